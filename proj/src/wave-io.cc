// src/wave-io.cc

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

#include "mixeval/wave-io.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>
#include <string>

#include "mixeval/error.h"

namespace mixeval {

namespace {

namespace fs = std::filesystem;

constexpr std::size_t kSphereHeaderMin = 1024;

std::vector<char> ReadAll(const fs::path &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError(Msg("cannot open ", path.string()));
  return std::vector<char>(std::istreambuf_iterator<char>(is), {});
}

std::uint32_t Le32(const char *p) {
  const auto *u = reinterpret_cast<const unsigned char *>(p);
  return std::uint32_t(u[0]) | std::uint32_t(u[1]) << 8 |
         std::uint32_t(u[2]) << 16 | std::uint32_t(u[3]) << 24;
}

std::uint16_t Le16(const char *p) {
  const auto *u = reinterpret_cast<const unsigned char *>(p);
  return std::uint16_t(u[0] | u[1] << 8);
}

void PutLe32(std::string *out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out->push_back(char((v >> (8 * i)) & 0xff));
}

void PutLe16(std::string *out, std::uint16_t v) {
  out->push_back(char(v & 0xff));
  out->push_back(char(v >> 8));
}

std::int16_t ToPcm16(double x) {
  double v = std::nearbyint(x * kPcm16Scale);
  v = std::clamp(v, -32768.0, 32767.0);
  return static_cast<std::int16_t>(v);
}

// Decoded header of either container: where the int16 payload lives.
struct PcmLayout {
  AudioInfo info;
  std::size_t data_offset = 0;
  bool big_endian = false;
};

PcmLayout ParseSphereHeader(const std::vector<char> &bytes,
                            const std::string &name) {
  if (bytes.size() < 16)
    throw CorruptFileError(Msg(name, ": truncated SPHERE header"));
  std::string head(bytes.data(), std::min(bytes.size(), std::size_t(65536)));
  std::istringstream is(head);
  std::string magic, size_line;
  std::getline(is, magic);
  std::getline(is, size_line);
  std::size_t header_size = 0;
  try {
    header_size = std::stoul(size_line);
  } catch (const std::exception &) {
    throw FormatError(Msg(name, ": bad SPHERE header size '", size_line, "'"));
  }
  if (header_size < kSphereHeaderMin && header_size != 0)
    throw FormatError(Msg(name, ": SPHERE header size ", header_size));
  if (bytes.size() < header_size)
    throw CorruptFileError(Msg(name, ": truncated SPHERE header"));

  std::map<std::string, std::string> fields;
  std::string line;
  bool ended = false;
  while (std::getline(is, line)) {
    if (line.rfind("end_head", 0) == 0) {
      ended = true;
      break;
    }
    std::istringstream ls(line);
    std::string key, type, value;
    if (!(ls >> key >> type)) continue;
    std::getline(ls >> std::ws, value);
    fields[key] = value;
  }
  if (!ended) throw FormatError(Msg(name, ": SPHERE header lacks end_head"));

  auto int_field = [&](const std::string &key, long dflt) -> long {
    auto it = fields.find(key);
    if (it == fields.end()) return dflt;
    try {
      return std::stol(it->second);
    } catch (const std::exception &) {
      throw FormatError(Msg(name, ": bad SPHERE field ", key));
    }
  };

  PcmLayout layout;
  layout.data_offset = header_size;
  layout.info.sample_rate = static_cast<int>(int_field("sample_rate", 0));
  long channels = int_field("channel_count", 1);
  long width = int_field("sample_n_bytes", 2);
  if (channels != 1 || width != 2)
    throw FormatError(Msg(name, ": only 16-bit mono SPHERE is supported"));
  auto coding = fields.find("sample_coding");
  if (coding != fields.end() && coding->second.rfind("pcm", 0) != 0)
    throw FormatError(Msg(name, ": unsupported sample_coding ",
                          coding->second));
  auto order = fields.find("sample_byte_format");
  if (order != fields.end()) layout.big_endian = order->second == "10";
  long declared = int_field("sample_count", -1);
  std::size_t available = (bytes.size() - header_size) / 2;
  if (declared < 0) declared = static_cast<long>(available);
  if (static_cast<std::size_t>(declared) > available)
    throw CorruptFileError(Msg(name, ": declared ", declared,
                               " samples but only ", available, " present"));
  layout.info.num_samples = declared;
  if (layout.info.sample_rate <= 0)
    throw FormatError(Msg(name, ": missing sample_rate"));
  return layout;
}

PcmLayout ParseRiffHeader(const std::vector<char> &bytes,
                          const std::string &name) {
  if (bytes.size() < 12 || std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw FormatError(Msg(name, ": RIFF file is not WAVE"));
  std::size_t pos = 12;
  bool have_fmt = false;
  PcmLayout layout;
  while (pos + 8 <= bytes.size()) {
    std::string id(bytes.data() + pos, 4);
    std::size_t len = Le32(bytes.data() + pos + 4);
    std::size_t body = pos + 8;
    if (id == "fmt ") {
      if (len < 16 || body + 16 > bytes.size())
        throw CorruptFileError(Msg(name, ": truncated fmt chunk"));
      std::uint16_t tag = Le16(bytes.data() + body);
      std::uint16_t channels = Le16(bytes.data() + body + 2);
      std::uint16_t bits = Le16(bytes.data() + body + 14);
      if ((tag != 1 && tag != 0xfffe) || channels != 1 || bits != 16)
        throw FormatError(Msg(name, ": only PCM16 mono RIFF is supported"));
      layout.info.sample_rate =
          static_cast<int>(Le32(bytes.data() + body + 4));
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt)
        throw FormatError(Msg(name, ": data chunk before fmt chunk"));
      if (body + len > bytes.size())
        throw CorruptFileError(Msg(name, ": data chunk declares ", len,
                                   " bytes, ", bytes.size() - body,
                                   " present"));
      layout.data_offset = body;
      layout.info.num_samples = static_cast<std::int64_t>(len / 2);
      if (layout.info.sample_rate <= 0)
        throw FormatError(Msg(name, ": bad sample rate"));
      return layout;
    }
    pos = body + len + (len & 1);
  }
  throw CorruptFileError(Msg(name, ": no data chunk"));
}

PcmLayout ParseHeader(const std::vector<char> &bytes, const std::string &name) {
  if (bytes.size() >= 7 && std::memcmp(bytes.data(), "NIST_1A", 7) == 0)
    return ParseSphereHeader(bytes, name);
  if (bytes.size() >= 4 && std::memcmp(bytes.data(), "RIFF", 4) == 0)
    return ParseRiffHeader(bytes, name);
  throw FormatError(Msg(name, ": unrecognized audio format"));
}

void WriteBytes(const fs::path &path, const std::string &bytes) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError(Msg("cannot write ", path.string()));
  os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw IoError(Msg("write failed: ", path.string()));
}

}  // namespace

Waveform LoadAudio(const fs::path &path) {
  std::vector<char> bytes = ReadAll(path);
  PcmLayout layout = ParseHeader(bytes, path.string());
  Waveform wave;
  wave.sample_rate = layout.info.sample_rate;
  wave.samples.resize(static_cast<std::size_t>(layout.info.num_samples));
  const auto *p =
      reinterpret_cast<const unsigned char *>(bytes.data() + layout.data_offset);
  for (std::size_t i = 0; i < wave.samples.size(); ++i, p += 2) {
    std::uint16_t raw = layout.big_endian ? std::uint16_t(p[0] << 8 | p[1])
                                          : std::uint16_t(p[1] << 8 | p[0]);
    wave.samples[i] = static_cast<std::int16_t>(raw) / kPcm16Scale;
  }
  return wave;
}

AudioInfo ProbeAudio(const fs::path &path) {
  std::vector<char> bytes = ReadAll(path);
  return ParseHeader(bytes, path.string()).info;
}

void WriteWav(const fs::path &path, const Waveform &wave) {
  if (wave.sample_rate <= 0) throw ArgumentError("WriteWav: bad sample rate");
  const std::uint32_t data_len =
      static_cast<std::uint32_t>(wave.samples.size() * 2);
  std::string out;
  out.reserve(44 + data_len);
  out += "RIFF";
  PutLe32(&out, 36 + data_len);
  out += "WAVEfmt ";
  PutLe32(&out, 16);
  PutLe16(&out, 1);
  PutLe16(&out, 1);
  PutLe32(&out, static_cast<std::uint32_t>(wave.sample_rate));
  PutLe32(&out, static_cast<std::uint32_t>(wave.sample_rate) * 2);
  PutLe16(&out, 2);
  PutLe16(&out, 16);
  out += "data";
  PutLe32(&out, data_len);
  for (double x : wave.samples)
    PutLe16(&out, static_cast<std::uint16_t>(ToPcm16(x)));
  WriteBytes(path, out);
}

void WriteSphere(const fs::path &path, const Waveform &wave) {
  std::ostringstream h;
  h << "NIST_1A\n   1024\n"
    << "database_id -s5 TIMIT\n"
    << "channel_count -i 1\n"
    << "sample_count -i " << wave.samples.size() << "\n"
    << "sample_rate -i " << wave.sample_rate << "\n"
    << "sample_n_bytes -i 2\n"
    << "sample_byte_format -s2 01\n"
    << "sample_sig_bits -i 16\n"
    << "sample_coding -s3 pcm\n"
    << "end_head\n";
  std::string out = h.str();
  out.resize(kSphereHeaderMin, ' ');
  for (double x : wave.samples)
    PutLe16(&out, static_cast<std::uint16_t>(ToPcm16(x)));
  WriteBytes(path, out);
}

}  // namespace mixeval
