// include/mixeval/cli.h

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

#ifndef MIXEVAL_CLI_H_
#define MIXEVAL_CLI_H_

#include <string>
#include <vector>

namespace mixeval {

/// Toolkit version string, e.g. "0.3.0".
const char *Version();

/// Runs the command line.  args[0] is the program name.  Returns 0 on
/// success, 2 on usage errors and 1 on any other failure; diagnostics go to
/// stderr.
int RunCli(const std::vector<std::string> &args);
int RunCli(int argc, char **argv);

}  // namespace mixeval

#endif  // MIXEVAL_CLI_H_
