// Copyright 2026 The ISSIR Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <random>

#include "issir/grid.hpp"
#include "issir/tf_array.hpp"

namespace issir::test {

inline ComplexSpectrogram random_spectrogram(const DualGridSpec& g,
                                             std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> d;
  auto X = ComplexSpectrogram::zeros(g);
  for (Eigen::Index i = 0; i < X.large.size(); ++i) X.large(i) = cplx(d(gen), d(gen));
  for (Eigen::Index i = 0; i < X.small.size(); ++i) X.small(i) = cplx(d(gen), d(gen));
  // DC and Nyquist of a real signal's spectrum are real.
  X.large.col(0) = X.large.col(0).real().cast<cplx>();
  X.large.col(X.large.cols() - 1) = X.large.col(X.large.cols() - 1).real().cast<cplx>();
  if (X.small.size() > 0) {
    X.small.col(0) = X.small.col(0).real().cast<cplx>();
    X.small.col(X.small.cols() - 1) = X.small.col(X.small.cols() - 1).real().cast<cplx>();
  }
  return X;
}

inline double rel_diff(const ComplexSpectrogram& a, const ComplexSpectrogram& b) {
  return norm(a - b) / norm(b);
}

inline GridSpec grid_for(std::size_t n, int window = 2048, int divisor = 2,
                         double sr = 44100.0) {
  return GridSpec::make(window, divisor, sr, n);
}

/// Dual grid with transients at the given large frames.
inline DualGridSpec dual_for(std::size_t n, std::vector<int> frames,
                             int divisor = 2) {
  auto d = DualGridSpec::uniform(grid_for(n, 2048, divisor), 256);
  d.transient_frames = std::move(frames);
  d.validate();
  return d;
}

}  // namespace issir::test
