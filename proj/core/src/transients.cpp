// Copyright 2026 The ISSIR Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "issir/transients.hpp"

#include <algorithm>
#include <cmath>

#include "issir/error.hpp"
#include "issir/stft.hpp"

namespace issir {
namespace {

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid),
                   v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) {
    m = 0.5 * (m + *std::max_element(v.begin(),
                                     v.begin() + static_cast<std::ptrdiff_t>(mid)));
  }
  return m;
}

std::vector<double> csd_of(const TfMatrix<cplx>& X) {
  const auto frames = X.rows();
  std::vector<double> csd(static_cast<std::size_t>(frames), 0.0);
  for (Eigen::Index t = 2; t < frames; ++t) {
    double sum = 0.0;
    for (Eigen::Index f = 0; f < X.cols(); ++f) {
      const double predicted_phase =
          2.0 * std::arg(X(t - 1, f)) - std::arg(X(t - 2, f));
      const cplx predicted = std::polar(std::abs(X(t - 1, f)), predicted_phase);
      sum += std::abs(X(t, f) - predicted);
    }
    csd[static_cast<std::size_t>(t)] = sum;
  }
  return csd;
}

void require_two_frames(const Signal& x, const GridSpec& grid) {
  if (grid.num_frames() < 2 ||
      x.size() < 2 * static_cast<std::size_t>(grid.hop)) {
    throw Error(ErrorCode::kInvalidArgument,
                "transient detection needs at least two frames of signal");
  }
}

}  // namespace

std::vector<int> TransientTrack::frames() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < flags.size(); ++i) {
    if (flags[i]) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::size_t TransientTrack::count() const {
  return static_cast<std::size_t>(std::count(flags.begin(), flags.end(), 1));
}

std::vector<double> complex_spectrum_difference(const Signal& x,
                                                const GridSpec& grid) {
  require_two_frames(x, grid);
  return csd_of(stft(x, grid).large);
}

TransientTrack detect_transients(const Signal& x, const GridSpec& grid,
                                 const TransientDetectorConfig& cfg) {
  require_two_frames(x, grid);
  const auto X = stft(x, grid).large;
  const auto csd = csd_of(X);
  double peak_mass = 0.0;
  for (Eigen::Index t = 0; t < X.rows(); ++t) {
    peak_mass = std::max(peak_mass, X.row(t).abs().sum());
  }
  const double floor = cfg.relative_floor * peak_mass;

  const int n = static_cast<int>(csd.size());
  const int half = std::max(
      1, static_cast<int>(std::lround(cfg.window_seconds * grid.sample_rate /
                                      grid.hop / 2.0)));
  TransientTrack track;
  track.flags.assign(csd.size(), 0);
  for (int t = 2; t < n; ++t) {
    if (!(csd[t] > floor)) continue;
    const int lo = std::max(2, t - half);
    const int hi = std::min(n - 1, t + half);
    std::vector<double> win(csd.begin() + lo, csd.begin() + hi + 1);
    const double med = median_of(win);
    for (double& v : win) v = std::abs(v - med);
    const double mad = median_of(std::move(win));
    if (csd[t] > med + cfg.mad_factor * mad) track.flags[t] = 1;
  }
  return track;
}

TransientTrack combine(std::span<const TransientTrack> tracks) {
  if (tracks.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "combine: no tracks");
  }
  TransientTrack out;
  out.flags.assign(tracks[0].flags.size(), 0);
  for (const auto& t : tracks) {
    if (t.flags.size() != out.flags.size()) {
      throw Error(ErrorCode::kDimensionMismatch, "combine: length mismatch");
    }
    for (std::size_t i = 0; i < t.flags.size(); ++i) {
      out.flags[i] = static_cast<std::uint8_t>(out.flags[i] | (t.flags[i] ? 1 : 0));
    }
  }
  return out;
}

TransientTrack clean(const TransientTrack& track, const GridSpec& grid) {
  TransientTrack out = track;
  const std::size_t min_gap = 2 * static_cast<std::size_t>(grid.window_length);
  bool have_last = false;
  std::size_t last = 0;
  for (std::size_t i = 0; i < out.flags.size(); ++i) {
    if (!out.flags[i]) continue;
    const std::size_t at = grid.frame_start(static_cast<int>(i));
    if (have_last && at - last < min_gap) {
      out.flags[i] = 0;
      continue;
    }
    out.flags[i] = 1;
    have_last = true;
    last = at;
  }
  return out;
}

DualGridSpec build_dual_grid(const TransientTrack& track, const GridSpec& large,
                             const GridSpec& small) {
  large.validate();
  if (track.flags.size() != static_cast<std::size_t>(large.num_frames())) {
    throw Error(ErrorCode::kDimensionMismatch,
                "transient track length differs from the large grid");
  }
  const auto kept = track.frames();
  const std::size_t min_gap = 2 * static_cast<std::size_t>(large.window_length);
  for (std::size_t i = 1; i < kept.size(); ++i) {
    if (large.frame_start(kept[i]) - large.frame_start(kept[i - 1]) < min_gap) {
      throw Error(ErrorCode::kSpacingViolation, "spacing violation");
    }
  }
  DualGridSpec out;
  out.large = large;
  out.small = small;
  out.small.signal_length = large.signal_length;
  out.small.sample_rate = large.sample_rate;
  out.transient_frames = kept;
  out.validate();
  return out;
}

}  // namespace issir
