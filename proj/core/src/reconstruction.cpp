// Copyright 2026 The ISSIR Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "issir/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include "issir/bands.hpp"
#include "issir/stft.hpp"

namespace issir {
namespace {

void require_sources(std::size_t n, std::size_t min, const char* what) {
  if (n < min) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(what) + ": not enough sources");
  }
}

template <typename T, typename U>
void require_same(const std::vector<T>& xs, const TfArray<U>& ref,
                  const char* what) {
  for (const auto& x : xs) ref.require_shape(x, what);
}

// Runs fn(j) for j in [0, n), spreading work over up to `workers` threads.
template <typename Fn>
void for_each_source(std::size_t n, int workers, Fn fn) {
  const std::size_t w =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(workers, 1)));
  if (w <= 1) {
    for (std::size_t j = 0; j < n; ++j) fn(j);
    return;
  }
  std::vector<std::future<void>> jobs;
  jobs.reserve(w);
  for (std::size_t t = 0; t < w; ++t) {
    jobs.push_back(std::async(std::launch::async, [&, t] {
      for (std::size_t j = t; j < n; j += w) fn(j);
    }));
  }
  for (auto& job : jobs) job.get();
}

std::vector<ComplexSpectrogram> project_all(
    const StftEngine& engine, const std::vector<ComplexSpectrogram>& xs,
    int workers) {
  std::vector<ComplexSpectrogram> out(xs.size());
  for_each_source(xs.size(), workers,
                  [&](std::size_t j) { out[j] = engine.project(xs[j]); });
  return out;
}

// Keeps x where mask is set, exact zero elsewhere.
template <typename Derived>
void mask_in_place(TfMatrix<cplx>& x, const Eigen::ArrayBase<Derived>& mask) {
  x = (mask > 0.5).select(x, cplx(0.0, 0.0));
}

}  // namespace

void ReconParams::validate() const {
  if (mode == ReconMode::kFixedDivisor && !(divisor >= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "divisor D must be >= 1");
  }
  if (!(rho > 0.0 && rho < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "rho must lie in (0, 1)");
  }
  if (iterations < 0) {
    throw Error(ErrorCode::kInvalidArgument, "iterations must be >= 0");
  }
}

WienerMaskSet wiener_masks(std::span<const RealSpectrogram> power) {
  require_sources(power.size(), 2, "wiener_masks");
  for (const auto& p : power) power[0].require_shape(p, "wiener_masks");
  RealSpectrogram total = power[0];
  for (std::size_t j = 1; j < power.size(); ++j) {
    total.large += power[j].large;
    total.small += power[j].small;
  }
  const double uniform = 1.0 / static_cast<double>(power.size());
  WienerMaskSet out;
  out.alpha.reserve(power.size());
  auto ratio = [uniform](double p, double t) {
    return t > 0.0 ? p / t : uniform;
  };
  for (const auto& p : power) {
    RealSpectrogram a;
    a.grid = p.grid;
    a.large = p.large.binaryExpr(total.large, ratio);
    a.small = p.small.binaryExpr(total.small, ratio);
    out.alpha.push_back(std::move(a));
  }
  return out;
}

std::vector<ComplexSpectrogram> wiener_estimates(const ComplexSpectrogram& mix,
                                                 const WienerMaskSet& masks) {
  require_same(masks.alpha, mix, "wiener_estimates");
  std::vector<ComplexSpectrogram> out;
  out.reserve(masks.alpha.size());
  for (const auto& a : masks.alpha) {
    ComplexSpectrogram s;
    s.grid = mix.grid;
    s.large = mix.large * a.large.cast<cplx>();
    s.small = mix.small * a.small.cast<cplx>();
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<Signal> wiener_separate(const ComplexSpectrogram& mix,
                                    const WienerMaskSet& masks) {
  const StftEngine engine(mix.grid);
  std::vector<Signal> out;
  for (const auto& s : wiener_estimates(mix, masks)) {
    out.push_back(engine.synthesize(s));
  }
  return out;
}

ComplexSpectrogram remix_error(const ComplexSpectrogram& mix,
                               std::span<const ComplexSpectrogram> estimates) {
  ComplexSpectrogram err = mix;
  for (const auto& s : estimates) {
    mix.require_shape(s, "remix_error");
    err.large -= s.large;
    err.small -= s.small;
  }
  return err;
}

ActivityMask activity_masks(const WienerMaskSet& masks, double rho) {
  if (!(rho > 0.0 && rho < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "rho must lie in (0, 1)");
  }
  ActivityMask out;
  auto on = [rho](double a) { return a > rho ? 1.0 : 0.0; };
  for (const auto& a : masks.alpha) {
    RealSpectrogram psi;
    psi.grid = a.grid;
    psi.large = a.large.unaryExpr(on);
    psi.small = a.small.unaryExpr(on);
    out.psi.push_back(std::move(psi));
  }
  return out;
}

std::vector<ComplexSpectrogram> misi(const ComplexSpectrogram& mix,
                                     std::span<const RealSpectrogram> target_mag,
                                     int iterations, int workers) {
  require_sources(target_mag.size(), 1, "misi");
  if (iterations < 1) {
    throw Error(ErrorCode::kInvalidArgument, "iteration count must be >= 1");
  }
  for (const auto& m : target_mag) mix.require_shape(m, "misi");
  const StftEngine engine(mix.grid);
  const double share = static_cast<double>(target_mag.size());

  std::vector<ComplexSpectrogram> est;
  for (const auto& m : target_mag) est.push_back(with_phase_of(m, mix));

  for (int k = 0; k < iterations; ++k) {
    const auto consistent = project_all(engine, est, workers);
    const auto err = remix_error(mix, consistent);
    for (std::size_t j = 0; j < est.size(); ++j) {
      ComplexSpectrogram corrected = consistent[j];
      corrected.large = consistent[j].large + err.large / share;
      corrected.small = consistent[j].small + err.small / share;
      est[j] = with_phase_of(target_mag[j], corrected);
    }
  }
  return est;
}

std::vector<ComplexSpectrogram> issir_initialize(
    const ComplexSpectrogram& mix, std::span<const RealSpectrogram> magnitude,
    const ActivityMask& activity) {
  if (magnitude.size() != activity.psi.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "issir_initialize: source counts differ");
  }
  std::vector<ComplexSpectrogram> out;
  for (std::size_t j = 0; j < magnitude.size(); ++j) {
    mix.require_shape(magnitude[j], "issir_initialize");
    auto s = with_phase_of(magnitude[j], mix);
    mask_in_place(s.large, activity.psi[j].large);
    mask_in_place(s.small, activity.psi[j].small);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<ComplexSpectrogram> issir_iterate(
    const ComplexSpectrogram& mix, std::vector<ComplexSpectrogram> estimates,
    const ActivityMask& activity, const ReconParams& params,
    std::span<const RealSpectrogram> locked_magnitude) {
  params.validate();
  const std::size_t n = estimates.size();
  require_sources(n, 1, "issir_iterate");
  require_same(estimates, mix, "issir_iterate");
  const bool masked = params.mode != ReconMode::kActiveCountNoMask;
  if (masked) {
    if (activity.psi.size() != n) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "issir_iterate: one activity mask per source required");
    }
    require_same(activity.psi, mix, "issir_iterate");
  }
  if (!locked_magnitude.empty()) {
    if (locked_magnitude.size() != n) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "issir_iterate: one locked magnitude per source required");
    }
    for (const auto& m : locked_magnitude) mix.require_shape(m, "issir_iterate");
  }

  // Per-bin 1/D. Bins with no active source receive none of the error.
  RealSpectrogram inv_divisor;
  const bool per_bin = params.mode != ReconMode::kFixedDivisor;
  if (per_bin) {
    inv_divisor = RealSpectrogram::zeros(mix.grid);
    if (masked) {
      for (const auto& psi : activity.psi) {
        inv_divisor.large += psi.large;
        inv_divisor.small += psi.small;
      }
    } else {
      inv_divisor.large.setConstant(static_cast<double>(n));
      inv_divisor.small.setConstant(static_cast<double>(n));
    }
    auto inv = [](double d) { return d > 0.0 ? 1.0 / d : 0.0; };
    inv_divisor.large = inv_divisor.large.unaryExpr(inv);
    inv_divisor.small = inv_divisor.small.unaryExpr(inv);
  }

  const StftEngine engine(mix.grid);
  for (int k = 0; k < params.iterations; ++k) {
    auto consistent = project_all(engine, estimates, params.workers);
    const auto err = remix_error(mix, consistent);
    for_each_source(n, params.workers, [&](std::size_t j) {
      ComplexSpectrogram& s = consistent[j];
      if (per_bin) {
        s.large += err.large * inv_divisor.large.cast<cplx>();
        s.small += err.small * inv_divisor.small.cast<cplx>();
      } else {
        s.large = s.large + err.large / params.divisor;
        s.small = s.small + err.small / params.divisor;
      }
      if (masked) {
        mask_in_place(s.large, activity.psi[j].large);
        mask_in_place(s.small, activity.psi[j].small);
      }
      if (!locked_magnitude.empty()) {
        s = with_phase_of(locked_magnitude[j], s);
      }
      estimates[j] = std::move(s);
    });
  }
  return estimates;
}

std::vector<Signal> issir_separate(const Signal& mix, const DualGridSpec& grid,
                                   std::span<const RealSpectrogram> magnitude,
                                   const ActivityMask& activity,
                                   const ReconParams& params) {
  params.validate();
  const StftEngine engine(grid);
  const auto M = engine.analyze(mix);
  ActivityMask effective = activity;
  if (params.mode == ReconMode::kActiveCountNoMask) {
    for (auto& psi : effective.psi) {
      psi.large.setOnes();
      psi.small.setOnes();
    }
  }
  auto est = issir_initialize(M, magnitude, effective);
  est = issir_iterate(M, std::move(est), effective, params);
  std::vector<Signal> out;
  for (std::size_t j = 0; j < est.size(); ++j) {
    mask_in_place(est[j].large, effective.psi[j].large);
    mask_in_place(est[j].small, effective.psi[j].small);
    out.push_back(engine.synthesize(est[j]));
  }
  return out;
}

DecodedSideInfo decode_side_info(const SideInfoBundle& bundle) {
  bundle.validate();
  DecodedSideInfo out;
  out.grid = bundle.grid();
  const CodecConfig cfg = bundle.config();
  const auto edges_large =
      band_edges(bundle.bands_large, out.grid.large.num_bins(),
                 bundle.sample_rate / 2.0);
  const auto edges_small =
      band_edges(bundle.bands_small, out.grid.small.num_bins(),
                 bundle.sample_rate / 2.0);
  for (const auto& src : bundle.sources) {
    out.power.push_back(
        dequantize_spectrogram(src.spectrogram, cfg, out.grid));
    RealSpectrogram psi;
    psi.grid = out.grid;
    psi.large = decode_activity(src.activity_large,
                                out.grid.large.num_frames(), edges_large);
    psi.small = decode_activity(src.activity_small, out.grid.num_small_frames(),
                                edges_small);
    out.activity.psi.push_back(std::move(psi));
  }
  return out;
}

std::vector<Signal> issir_reconstruct(const Signal& mix,
                                      const SideInfoBundle& bundle,
                                      const ReconParams& params) {
  const auto side = decode_side_info(bundle);
  if (mix.size() != side.grid.large.signal_length) {
    throw Error(ErrorCode::kDimensionMismatch,
                "mixture length does not match the side information");
  }
  std::vector<RealSpectrogram> mag;
  for (const auto& p : side.power) {
    RealSpectrogram m = p;
    m.large = m.large.sqrt();
    m.small = m.small.sqrt();
    mag.push_back(std::move(m));
  }
  return issir_separate(mix, side.grid, mag, side.activity, params);
}

std::vector<Signal> wiener_from_side_info(const Signal& mix,
                                          const SideInfoBundle& bundle) {
  const auto side = decode_side_info(bundle);
  if (mix.size() != side.grid.large.signal_length) {
    throw Error(ErrorCode::kDimensionMismatch,
                "mixture length does not match the side information");
  }
  const StftEngine engine(side.grid);
  const auto M = engine.analyze(mix);
  if (side.power.size() == 1) {
    return {engine.synthesize(M)};
  }
  std::vector<Signal> out;
  for (const auto& s : wiener_estimates(M, wiener_masks(side.power))) {
    out.push_back(engine.synthesize(s));
  }
  return out;
}

}  // namespace issir
