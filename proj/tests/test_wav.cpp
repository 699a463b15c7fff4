// Copyright 2026 The ISSIR Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "issir/error.hpp"
#include "issir/wav.hpp"
#include "oracles/oracles.hpp"

using namespace issir;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "issir_wav_tests";
  fs::create_directories(dir);
  return dir / name;
}

void put(std::ofstream& f, std::uint32_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) f.put(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void write_header(const fs::path& p, int channels, std::uint32_t data_bytes,
                  std::size_t actual_bytes) {
  std::ofstream f(p, std::ios::binary);
  f.write("RIFF", 4);
  put(f, 36 + data_bytes, 4);
  f.write("WAVEfmt ", 8);
  put(f, 16, 4);
  put(f, 1, 2);
  put(f, static_cast<std::uint32_t>(channels), 2);
  put(f, 44100, 4);
  put(f, 44100u * 2u * static_cast<std::uint32_t>(channels), 4);
  put(f, 2u * static_cast<std::uint32_t>(channels), 2);
  put(f, 16, 2);
  f.write("data", 4);
  put(f, data_bytes, 4);
  for (std::size_t i = 0; i < actual_bytes; ++i) f.put(0);
}

ErrorCode read_code(const fs::path& p) {
  try {
    read_wav(p.string());
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("file was accepted");
  return ErrorCode::kInvalidArgument;
}

}  // namespace

TEST_SUITE("wav") {

TEST_CASE("16-bit round trip") {
  Signal x = oracle::noise(1, 5000);
  for (auto& v : x.samples) v = std::clamp(v, -0.99, 0.99);
  const auto path = scratch("pcm16.wav");
  write_wav(path.string(), x, WavFormat::kPcm16);
  const Signal y = read_wav(path.string());
  REQUIRE(y.size() == x.size());
  CHECK(y.sample_rate == 44100.0);
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(x.samples[i] - y.samples[i]));
  CHECK(worst <= std::ldexp(1.0, -15));
}

TEST_CASE("float round trip is exact to single precision") {
  Signal x = oracle::noise(2, 3000, 22050.0);
  const auto path = scratch("float.wav");
  write_wav(path.string(), x, WavFormat::kFloat32);
  const Signal y = read_wav(path.string());
  REQUIRE(y.size() == x.size());
  CHECK(y.sample_rate == 22050.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    CHECK(y.samples[i] == static_cast<double>(static_cast<float>(x.samples[i])));
  }
}

TEST_CASE("15 s at 44.1 kHz keeps every sample") {
  const Signal x(std::vector<double>(661500, 0.25), 44100.0);
  const auto path = scratch("long.wav");
  write_wav(path.string(), x);
  CHECK(read_wav(path.string()).size() == 661500);
}

TEST_CASE("malformed files") {
  const auto stereo = scratch("stereo.wav");
  write_header(stereo, 2, 400, 400);
  try {
    read_wav(stereo.string());
    FAIL("stereo accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUnsupportedFormat);
    CHECK(std::string(e.what()).find("mono required") != std::string::npos);
  }

  const auto cut = scratch("cut.wav");
  write_header(cut, 1, 400, 100);
  CHECK(read_code(cut) == ErrorCode::kTruncated);

  const auto junk = scratch("junk.wav");
  std::ofstream(junk) << "not a wave file at all";
  CHECK(read_code(junk) == ErrorCode::kUnsupportedFormat);

  CHECK(read_code(scratch("missing.wav")) == ErrorCode::kIo);
}

}  // TEST_SUITE
