// Copyright 2026 The ISSIR Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace issir {

/// Mono time-domain signal.
struct Signal {
  std::vector<double> samples;
  double sample_rate = 44100.0;

  Signal() = default;
  Signal(std::vector<double> s, double rate)
      : samples(std::move(s)), sample_rate(rate) {}

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  double duration() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
  std::span<const double> view() const { return samples; }

  /// Throws on non-finite samples or a non-positive rate.
  void validate() const;
};

/// Sample-wise sum; all inputs must share length and rate.
Signal mix_down(std::span<const Signal> sources);

}  // namespace issir
