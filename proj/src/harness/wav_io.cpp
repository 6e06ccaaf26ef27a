// Copyright 2026 The sbss Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sbss/harness/wav_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>

#include "sbss/error.hpp"

namespace sbss::harness {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint32_t le32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
         static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

std::uint16_t le16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | p[1] << 8);
}

void put16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>(v >> 8));
}

void put32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::kIo, path + ": " + what);
}

}  // namespace

WavData read_wav(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(path, "cannot open");
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(f)),
                                         std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    fail(path, "not a RIFF/WAVE file");
  }

  std::uint16_t tag = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const unsigned char* data = nullptr;
  std::size_t data_size = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::uint32_t size = le32(chunk + 4);
    const std::size_t body = pos + 8;
    const std::size_t avail = std::min<std::size_t>(size, bytes.size() - body);
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (avail < 16) fail(path, "truncated fmt chunk");
      tag = le16(chunk + 8);
      channels = le16(chunk + 10);
      rate = le32(chunk + 12);
      bits = le16(chunk + 22);
      if (tag == kFormatExtensible) {
        if (avail < 40) fail(path, "truncated extensible fmt chunk");
        tag = le16(chunk + 8 + 24);  // first two bytes of the subformat GUID
      }
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = chunk + 8;
      data_size = avail;
    }
    pos = body + size + (size & 1);  // chunks are word aligned
  }
  if (channels == 0) fail(path, "missing fmt chunk");
  if (data == nullptr) fail(path, "missing data chunk");

  WavData out;
  out.sample_rate = rate;
  if (tag == kFormatPcm && bits == 16) {
    out.format = SampleFormat::kPcm16;
  } else if (tag == kFormatPcm && bits == 24) {
    out.format = SampleFormat::kPcm24;
  } else if (tag == kFormatFloat && bits == 32) {
    out.format = SampleFormat::kFloat32;
  } else {
    fail(path, "unsupported sample format (tag " + std::to_string(tag) + ", " +
                   std::to_string(bits) + " bits)");
  }
  const std::size_t width = bits / 8;
  const std::size_t frames = data_size / (width * channels);
  out.channels.assign(channels, Signal(frames));
  for (std::size_t t = 0; t < frames; ++t) {
    for (std::size_t c = 0; c < channels; ++c) {
      const unsigned char* p = data + (t * channels + c) * width;
      double v = 0.0;
      switch (out.format) {
        case SampleFormat::kPcm16:
          v = static_cast<std::int16_t>(le16(p)) / 32768.0;
          break;
        case SampleFormat::kPcm24: {
          std::int32_t raw = p[0] | p[1] << 8 | p[2] << 16;
          if (raw & 0x800000) raw -= 0x1000000;
          v = raw / 8388608.0;
          break;
        }
        case SampleFormat::kFloat32: {
          const std::uint32_t u = le32(p);
          float x;
          std::memcpy(&x, &u, sizeof x);
          v = x;
          break;
        }
      }
      out.channels[c][t] = v;
    }
  }
  return out;
}

void write_wav(const std::string& path, const MultiSignal& channels, double sample_rate,
               SampleFormat format) {
  if (channels.empty()) throw Error(ErrorCode::kInvalidDimension, "no channels to write");
  const std::size_t frames = channels.front().size();
  for (const auto& c : channels) {
    if (c.size() != frames) throw Error(ErrorCode::kLengthMismatch, "channels differ in length");
  }
  const auto nch = static_cast<std::uint16_t>(channels.size());
  const std::uint16_t bits = format == SampleFormat::kPcm16 ? 16 : format == SampleFormat::kPcm24 ? 24 : 32;
  const std::uint16_t width = bits / 8;
  const auto rate = static_cast<std::uint32_t>(std::lround(sample_rate));
  const auto data_size = static_cast<std::uint32_t>(frames * nch * width);

  std::string out;
  out.reserve(44 + data_size);
  out += "RIFF";
  put32(out, 36 + data_size);
  out += "WAVEfmt ";
  put32(out, 16);
  put16(out, format == SampleFormat::kFloat32 ? kFormatFloat : kFormatPcm);
  put16(out, nch);
  put32(out, rate);
  put32(out, rate * nch * width);
  put16(out, static_cast<std::uint16_t>(nch * width));
  put16(out, bits);
  out += "data";
  put32(out, data_size);
  for (std::size_t t = 0; t < frames; ++t) {
    for (const auto& c : channels) {
      const double v = c[t];
      switch (format) {
        case SampleFormat::kPcm16: {
          const auto q = static_cast<std::int32_t>(std::lround(std::clamp(v, -1.0, 1.0) * 32768.0));
          put16(out, static_cast<std::uint16_t>(std::clamp(q, -32768, 32767)));
          break;
        }
        case SampleFormat::kPcm24: {
          const auto q = static_cast<std::int32_t>(std::lround(std::clamp(v, -1.0, 1.0) * 8388608.0));
          const auto u = static_cast<std::uint32_t>(std::clamp(q, -8388608, 8388607));
          for (int i = 0; i < 3; ++i) out.push_back(static_cast<char>((u >> (8 * i)) & 0xFF));
          break;
        }
        case SampleFormat::kFloat32: {
          const float x = static_cast<float>(v);
          std::uint32_t u;
          std::memcpy(&u, &x, sizeof u);
          put32(out, u);
          break;
        }
      }
    }
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(path, "cannot open for writing");
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) fail(path, "write failed");
}

}  // namespace sbss::harness
