// include/mixeval/error.h

// Copyright 2026  mixeval authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef MIXEVAL_ERROR_H_
#define MIXEVAL_ERROR_H_

#include <sstream>
#include <stdexcept>
#include <string>

namespace mixeval {

/// Base of every error thrown by the toolkit.  The CLI maps any Error to
/// exit status 1; UsageError maps to 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define MIXEVAL_DEFINE_ERROR(Name) \
  class Name : public Error {      \
   public:                         \
    using Error::Error;            \
  }

MIXEVAL_DEFINE_ERROR(ArgumentError);
MIXEVAL_DEFINE_ERROR(FormatError);          // unknown file magic / encoding
MIXEVAL_DEFINE_ERROR(CorruptFileError);     // truncated payloads
MIXEVAL_DEFINE_ERROR(ParseError);           // malformed text, carries a line
MIXEVAL_DEFINE_ERROR(ValidationError);      // well-formed but inconsistent
MIXEVAL_DEFINE_ERROR(StructureError);       // corpus directory layout
MIXEVAL_DEFINE_ERROR(InventoryError);       // symbol outside the phone set
MIXEVAL_DEFINE_ERROR(DegenerateSignalError);
MIXEVAL_DEFINE_ERROR(ProtocolError);        // backend exchange
MIXEVAL_DEFINE_ERROR(PlanError);
MIXEVAL_DEFINE_ERROR(IoError);
MIXEVAL_DEFINE_ERROR(UsageError);

#undef MIXEVAL_DEFINE_ERROR

/// Builds a message from stream-insertable pieces:
///   throw ParseError(Msg("line ", n, ": bad field"));
template <typename... Args>
std::string Msg(const Args &...args) {
  std::ostringstream os;
  (os << ... << args);
  return os.str();
}

}  // namespace mixeval

#endif  // MIXEVAL_ERROR_H_
