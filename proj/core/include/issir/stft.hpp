// Copyright 2026 The ISSIR Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <vector>

#include "issir/fft.hpp"
#include "issir/grid.hpp"
#include "issir/signal.hpp"
#include "issir/tf_array.hpp"

namespace issir {

/// Periodic square-root Hann window of length n.
std::vector<double> sqrt_hann(int n);

/// STFT analysis/synthesis on a uniform or dual-resolution grid.
///
/// Frames use an orthonormal DFT (scaled by 1/sqrt(N)), so analysis is an
/// isometry up to the overlap-add weight and synthesis is the least-squares
/// inverse over every frame of both sizes:
///
///   x(t) = sum_f w_f(t) idft(X_f)(t) / sum_f w_f(t)^2
///
/// With that, project() = analyze(synthesize(.)) is the orthogonal projection
/// onto consistent spectrograms. The engine precomputes windows, plans and
/// the overlap-add normalization, and is safe to share between threads.
class StftEngine {
 public:
  explicit StftEngine(DualGridSpec grid);
  explicit StftEngine(const GridSpec& grid)
      : StftEngine(DualGridSpec::uniform(grid)) {}

  const DualGridSpec& grid() const { return grid_; }

  ComplexSpectrogram analyze(const Signal& x) const;
  Signal synthesize(const ComplexSpectrogram& X) const;
  ComplexSpectrogram project(const ComplexSpectrogram& X) const;

 private:
  void analyze_padded(const std::vector<double>& padded,
                      ComplexSpectrogram& out) const;
  std::vector<double> overlap_add(const ComplexSpectrogram& X) const;

  DualGridSpec grid_;
  std::vector<double> large_window_;
  std::vector<double> small_window_;
  std::vector<double> inv_weight_;  // 1 / sum w^2 over the padded buffer
  RealFft large_fft_;
  RealFft small_fft_;
};

ComplexSpectrogram stft(const Signal& x, const GridSpec& grid);
ComplexSpectrogram stft(const Signal& x, const DualGridSpec& grid);
Signal istft(const ComplexSpectrogram& X);
/// Consistency projection stft(istft(X)).
ComplexSpectrogram project(const ComplexSpectrogram& X);

/// Normalized squared magnitude distance
///   sum (|X| - S)^2 / sum S^2
/// summed over the two-sided spectrum (interior bins count twice), which is
/// the norm in which project() is orthogonal.
double gl_objective(const ComplexSpectrogram& estimate,
                    const RealSpectrogram& target_mag);

struct GriffinLimResult {
  ComplexSpectrogram estimate;     // |S| exp(i angle of last projection)
  std::vector<double> objective;   // one entry per iteration
};

/// Griffin & Lim phase retrieval starting from `init_phase`.
GriffinLimResult griffin_lim(const RealSpectrogram& target_mag,
                             const RealSpectrogram& init_phase, int iterations);

}  // namespace issir
