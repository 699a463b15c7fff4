// Copyright 2026 The ISSIR Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <Eigen/Dense>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "issir/signal.hpp"

namespace issir {

inline constexpr double kScoreCapDb = 100.0;
inline constexpr int kDefaultFilterLength = 512;

/// estimate (zero-padded by L - 1 samples) = target + interference + artifacts.
struct Decomposition {
  std::vector<double> target;
  std::vector<double> interference;
  std::vector<double> artifacts;
  bool regularized = false;  // Gram system was near-singular
};

struct SourceScores {
  double sdr = 0.0;
  double sir = 0.0;
  double sar = 0.0;
  bool defined = true;
};

struct Summary {
  double mean = 0.0;
  double stddev = 0.0;
  int count = 0;
};

struct SeparationScores {
  std::vector<SourceScores> sources;
  std::string baseline;  // non-empty for scores relative to a baseline

  Summary sdr() const;
  Summary sir() const;
  Summary sar() const;
};

/// BSS-Eval style decomposition against a fixed set of references. The Gram
/// matrix of all delayed references is assembled from FFT cross-correlations
/// and factored once, so evaluating several estimates against the same
/// references is cheap.
class BssEvaluator {
 public:
  BssEvaluator(std::span<const Signal> references,
               int filter_length = kDefaultFilterLength);
  ~BssEvaluator();
  BssEvaluator(BssEvaluator&&) noexcept;
  BssEvaluator& operator=(BssEvaluator&&) noexcept;

  int num_sources() const;
  int filter_length() const;

  /// Throws kDegenerate if reference `j` is silent.
  Decomposition decompose(const Signal& estimate, int j) const;
  /// One score per reference; silent references or estimates are undefined.
  SeparationScores evaluate(std::span<const Signal> estimates) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

Decomposition decompose(const Signal& estimate,
                        std::span<const Signal> references, int j,
                        int filter_length = kDefaultFilterLength);

/// SDR/SIR/SAR in dB, capped at +kScoreCapDb.
SourceScores scores(const Decomposition& d);

/// Element-wise dB differences scores - baseline.
SeparationScores relative_scores(const SeparationScores& scores,
                                 const SeparationScores& baseline,
                                 const std::string& baseline_name = "baseline");

}  // namespace issir
