// Copyright 2026 The ISSIR Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "issir/signal.hpp"

namespace issir {

/// Seeded generator with platform-independent draws (std distributions are
/// implementation-defined, the raw engine is not).
class FixtureRng {
 public:
  explicit FixtureRng(std::uint64_t seed) : engine_(seed) {}
  double uniform();  // [0, 1)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  int index(int n);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Mixture plus its stems; mix is exactly the sample-wise sum of the stems.
struct Fixture {
  std::string name;
  Signal mix;
  std::vector<Signal> stems;
  std::vector<std::string> stem_names;
};

enum class FixtureKind {
  kTwoSource,       // keys + breathy lead, heavily overlapping
  kFiveSource,      // bass, drums, percussion, keys, lead
  kTransientRich,   // click train over tonal stems
};

Fixture make_fixture(FixtureKind kind, std::uint64_t seed, double seconds,
                     double sample_rate = 44100.0);
FixtureKind fixture_kind_from_string(const std::string& name);
std::string to_string(FixtureKind kind);

Signal sinusoid(double hz, double seconds, double sample_rate,
                double amplitude = 0.5, double phase = 0.0);
/// Unit impulses at the given sample positions.
Signal click_train(std::span<const std::size_t> positions, std::size_t length,
                   double sample_rate, double amplitude = 0.9);
Signal white_noise(FixtureRng& rng, std::size_t length, double sample_rate,
                   double amplitude = 0.1);

}  // namespace issir
