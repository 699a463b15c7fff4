// Copyright 2026 The ISSIR Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "issir/stft.hpp"

#include <cmath>
#include <numbers>

namespace issir {

std::vector<double> sqrt_hann(int n) {
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    w[static_cast<std::size_t>(i)] = std::sqrt(
        0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / n));
  }
  return w;
}

StftEngine::StftEngine(DualGridSpec grid)
    : grid_(std::move(grid)),
      large_fft_(grid_.large.window_length),
      small_fft_(grid_.small.window_length) {
  grid_.validate();
  large_window_ = sqrt_hann(grid_.large.window_length);
  small_window_ = sqrt_hann(grid_.small.window_length);

  const std::size_t total = grid_.large.padded_length();
  std::vector<double> weight(total, 0.0);
  const int nl = grid_.large.window_length;
  for (int f = 0; f < grid_.large.num_frames(); ++f) {
    const std::size_t s = grid_.large.frame_start(f);
    for (int n = 0; n < nl; ++n) {
      weight[s + n] += large_window_[n] * large_window_[n];
    }
  }
  const int ns = grid_.small.window_length;
  for (int g = 0; g < grid_.num_small_frames(); ++g) {
    const std::size_t s = grid_.small_frame_start(g);
    for (int n = 0; n < ns; ++n) {
      weight[s + n] += small_window_[n] * small_window_[n];
    }
  }
  inv_weight_.assign(total, 0.0);
  for (std::size_t t = 0; t < total; ++t) {
    if (weight[t] > 0.0) inv_weight_[t] = 1.0 / weight[t];
  }
}

void StftEngine::analyze_padded(const std::vector<double>& padded,
                                ComplexSpectrogram& out) const {
  auto run = [&padded](const RealFft& fft, const std::vector<double>& window,
                       int frames, auto start_of, TfMatrix<cplx>& dst) {
    const int n = fft.length();
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    auto ws = fft.workspace();
    auto real = ws.real();
    auto spec = ws.spectrum();
    for (int f = 0; f < frames; ++f) {
      const double* seg = padded.data() + start_of(f);
      for (int i = 0; i < n; ++i) real[i] = seg[i] * window[i];
      fft.forward(ws);
      for (int b = 0; b < fft.num_bins(); ++b) dst(f, b) = spec[b] * scale;
    }
  };
  run(large_fft_, large_window_, grid_.large.num_frames(),
      [this](int f) { return grid_.large.frame_start(f); }, out.large);
  run(small_fft_, small_window_, grid_.num_small_frames(),
      [this](int g) { return grid_.small_frame_start(g); }, out.small);
}

ComplexSpectrogram StftEngine::analyze(const Signal& x) const {
  if (x.empty()) throw Error(ErrorCode::kEmptyInput, "empty input");
  if (x.size() != grid_.large.signal_length) {
    throw Error(ErrorCode::kDimensionMismatch,
                "signal length does not match the grid");
  }
  std::vector<double> padded(grid_.large.padded_length(), 0.0);
  std::copy(x.samples.begin(), x.samples.end(),
            padded.begin() + static_cast<std::ptrdiff_t>(grid_.large.pad()));
  auto out = ComplexSpectrogram::zeros(grid_);
  analyze_padded(padded, out);
  return out;
}

std::vector<double> StftEngine::overlap_add(const ComplexSpectrogram& X) const {
  std::vector<double> acc(grid_.large.padded_length(), 0.0);
  auto run = [&acc](const RealFft& fft, const std::vector<double>& window,
                    int frames, auto start_of, const TfMatrix<cplx>& src) {
    const int n = fft.length();
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    auto ws = fft.workspace();
    auto real = ws.real();
    auto spec = ws.spectrum();
    for (int f = 0; f < frames; ++f) {
      for (int b = 0; b < fft.num_bins(); ++b) spec[b] = src(f, b);
      fft.inverse(ws);
      double* dst = acc.data() + start_of(f);
      for (int i = 0; i < n; ++i) dst[i] += window[i] * real[i] * scale;
    }
  };
  run(large_fft_, large_window_, grid_.large.num_frames(),
      [this](int f) { return grid_.large.frame_start(f); }, X.large);
  run(small_fft_, small_window_, grid_.num_small_frames(),
      [this](int g) { return grid_.small_frame_start(g); }, X.small);
  return acc;
}

Signal StftEngine::synthesize(const ComplexSpectrogram& X) const {
  if (X.grid != grid_ ||
      X.large.rows() != grid_.large.num_frames() ||
      X.large.cols() != grid_.large.num_bins() ||
      X.small.rows() != grid_.num_small_frames() ||
      X.small.cols() != grid_.small.num_bins()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "spectrogram does not match the synthesis grid");
  }
  const auto acc = overlap_add(X);
  const std::size_t pad = grid_.large.pad();
  Signal out(std::vector<double>(grid_.large.signal_length),
             grid_.large.sample_rate);
  for (std::size_t t = 0; t < out.size(); ++t) {
    out.samples[t] = acc[pad + t] * inv_weight_[pad + t];
  }
  return out;
}

ComplexSpectrogram StftEngine::project(const ComplexSpectrogram& X) const {
  // Same as analyze(synthesize(X)) without the intermediate Signal copy.
  auto acc = overlap_add(X);
  const std::size_t pad = grid_.large.pad();
  const std::size_t end = pad + grid_.large.signal_length;
  for (std::size_t t = 0; t < acc.size(); ++t) {
    acc[t] = (t >= pad && t < end) ? acc[t] * inv_weight_[t] : 0.0;
  }
  auto out = ComplexSpectrogram::zeros(grid_);
  analyze_padded(acc, out);
  return out;
}

ComplexSpectrogram stft(const Signal& x, const GridSpec& grid) {
  return StftEngine(grid).analyze(x);
}

ComplexSpectrogram stft(const Signal& x, const DualGridSpec& grid) {
  return StftEngine(grid).analyze(x);
}

Signal istft(const ComplexSpectrogram& X) {
  return StftEngine(X.grid).synthesize(X);
}

ComplexSpectrogram project(const ComplexSpectrogram& X) {
  return StftEngine(X.grid).project(X);
}

namespace {

// Weight of a one-sided bin in the two-sided spectrum.
template <typename Derived>
double weighted_sum(const Eigen::ArrayBase<Derived>& m) {
  const Eigen::Index bins = m.cols();
  if (bins == 0 || m.rows() == 0) return 0.0;
  double s = 2.0 * m.sum();
  s -= m.col(0).sum();
  s -= m.col(bins - 1).sum();
  return s;
}

}  // namespace

double gl_objective(const ComplexSpectrogram& estimate,
                    const RealSpectrogram& target_mag) {
  estimate.require_shape(target_mag, "gl_objective");
  const double den = weighted_sum(target_mag.large.square()) +
                     weighted_sum(target_mag.small.square());
  if (!(den > 0.0)) {
    throw Error(ErrorCode::kDegenerate, "degenerate objective");
  }
  const double num =
      weighted_sum((estimate.large.abs() - target_mag.large).square()) +
      weighted_sum((estimate.small.abs() - target_mag.small).square());
  return num / den;
}

GriffinLimResult griffin_lim(const RealSpectrogram& target_mag,
                             const RealSpectrogram& init_phase,
                             int iterations) {
  if (iterations < 1) {
    throw Error(ErrorCode::kInvalidArgument, "iteration count must be >= 1");
  }
  target_mag.require_shape(init_phase, "griffin_lim");
  const StftEngine engine(target_mag.grid);
  GriffinLimResult result;
  result.objective.reserve(static_cast<std::size_t>(iterations));
  ComplexSpectrogram snapped = polar(target_mag, init_phase);
  for (int k = 0; k < iterations; ++k) {
    const ComplexSpectrogram consistent = engine.project(snapped);
    result.objective.push_back(gl_objective(consistent, target_mag));
    snapped = with_phase_of(target_mag, consistent);
  }
  result.estimate = std::move(snapped);
  return result;
}

}  // namespace issir
