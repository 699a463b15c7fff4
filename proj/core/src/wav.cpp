// Copyright 2026 The ISSIR Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "issir/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

#include "issir/error.hpp"

namespace issir {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint32_t le32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}
std::uint16_t le16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void put32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}
void put16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

}  // namespace

Signal read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw Error(ErrorCode::kUnsupportedFormat, path + ": not a RIFF/WAVE file");
  }

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const std::uint8_t* data = nullptr;
  std::size_t data_size = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t* chunk = bytes.data() + pos;
    const std::uint32_t size = le32(chunk + 4);
    const std::size_t body = pos + 8;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || body + size > bytes.size()) {
        throw Error(ErrorCode::kTruncated, path + ": truncated fmt chunk");
      }
      format = le16(chunk + 8);
      channels = le16(chunk + 10);
      rate = le32(chunk + 12);
      bits = le16(chunk + 22);
      if (format == kFormatExtensible && size >= 26) format = le16(chunk + 32);
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = bytes.data() + body;
      data_size = std::min<std::size_t>(size, bytes.size() - body);
      if (data_size < size) {
        throw Error(ErrorCode::kTruncated, path + ": truncated data chunk");
      }
    }
    pos = body + size + (size & 1);
  }
  if (format == 0) throw Error(ErrorCode::kUnsupportedFormat, path + ": missing fmt chunk");
  if (!data) throw Error(ErrorCode::kUnsupportedFormat, path + ": missing data chunk");
  if (channels != 1) throw Error(ErrorCode::kUnsupportedFormat, "mono required");
  if (rate == 0) throw Error(ErrorCode::kUnsupportedFormat, path + ": zero sample rate");

  const bool pcm = format == kFormatPcm && (bits == 16 || bits == 24 || bits == 32);
  const bool flt = format == kFormatFloat && (bits == 32 || bits == 64);
  if (!pcm && !flt) {
    throw Error(ErrorCode::kUnsupportedFormat,
                path + ": unsupported sample format (" + std::to_string(format) +
                    ", " + std::to_string(bits) + " bit)");
  }
  const std::size_t width = bits / 8;
  const std::size_t n = data_size / width;
  Signal out(std::vector<double>(n), rate);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint8_t* p = data + i * width;
    double v = 0.0;
    if (pcm) {
      std::int32_t s = 0;
      if (bits == 16) {
        s = static_cast<std::int16_t>(le16(p));
        v = s / 32768.0;
      } else if (bits == 24) {
        s = static_cast<std::int32_t>((static_cast<std::uint32_t>(p[0]) << 8) |
                                      (static_cast<std::uint32_t>(p[1]) << 16) |
                                      (static_cast<std::uint32_t>(p[2]) << 24)) >> 8;
        v = s / 8388608.0;
      } else {
        s = static_cast<std::int32_t>(le32(p));
        v = s / 2147483648.0;
      }
    } else if (bits == 32) {
      float f;
      std::memcpy(&f, p, 4);
      v = f;
    } else {
      std::memcpy(&v, p, 8);
    }
    out.samples[i] = v;
  }
  return out;
}

std::size_t write_wav(const std::string& path, const Signal& signal,
                      WavFormat format) {
  const bool pcm = format == WavFormat::kPcm16;
  const std::uint16_t bits = pcm ? 16 : 32;
  const std::uint32_t rate = static_cast<std::uint32_t>(std::lround(signal.sample_rate));
  const std::uint32_t data_size =
      static_cast<std::uint32_t>(signal.size() * (bits / 8));

  std::vector<std::uint8_t> out;
  out.reserve(44 + data_size);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  put32(out, 36 + data_size);
  out.insert(out.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
  put32(out, 16);
  put16(out, pcm ? kFormatPcm : kFormatFloat);
  put16(out, 1);
  put32(out, rate);
  put32(out, rate * (bits / 8));
  put16(out, static_cast<std::uint16_t>(bits / 8));
  put16(out, bits);
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  put32(out, data_size);

  std::size_t clipped = 0;
  for (double v : signal.samples) {
    if (pcm) {
      double s = std::round(v * 32768.0);
      if (s > 32767.0 || s < -32768.0) {
        ++clipped;
        s = std::clamp(s, -32768.0, 32767.0);
      }
      put16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(s)));
    } else {
      const float f = static_cast<float>(v);
      std::uint32_t u;
      std::memcpy(&u, &f, 4);
      put32(out, u);
    }
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::kIo, "cannot write " + path);
  file.write(reinterpret_cast<const char*>(out.data()),
             static_cast<std::streamsize>(out.size()));
  if (!file) throw Error(ErrorCode::kIo, "write failed for " + path);
  return clipped;
}

}  // namespace issir
