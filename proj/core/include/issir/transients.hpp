// Copyright 2026 The ISSIR Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "issir/grid.hpp"
#include "issir/signal.hpp"

namespace issir {

/// Binary transient indicator over large-grid frames.
struct TransientTrack {
  static constexpr int kCombined = -1;

  std::vector<std::uint8_t> flags;
  int source_id = kCombined;

  std::vector<int> frames() const;
  std::size_t count() const;
  bool operator==(const TransientTrack&) const = default;
};

struct TransientDetectorConfig {
  double mad_factor = 3.0;        // threshold = median + factor * MAD
  double window_seconds = 1.0;    // sliding statistics window
  // CSD must also exceed this fraction of the loudest frame's spectral mass,
  // which keeps numerical noise on steady or silent material below threshold.
  double relative_floor = 0.05;
};

/// Complex spectrum difference per large frame: sum_f |X(t,f) - X~(t,f)| with
/// X~ carrying the previous magnitude and linearly extrapolated phase.
/// Frames 0 and 1 have no prediction and score 0.
std::vector<double> complex_spectrum_difference(const Signal& x,
                                                const GridSpec& grid);

TransientTrack detect_transients(const Signal& x, const GridSpec& grid,
                                 const TransientDetectorConfig& cfg = {});

/// Element-wise OR.
TransientTrack combine(std::span<const TransientTrack> tracks);

/// Greedy left-to-right: keeps a flag only if it starts at least two large
/// windows after the previously kept one.
TransientTrack clean(const TransientTrack& track, const GridSpec& grid);

/// Dual grid with small-window frames tiling every flagged large frame.
/// Throws kSpacingViolation if the track is not clean.
DualGridSpec build_dual_grid(const TransientTrack& track, const GridSpec& large,
                             const GridSpec& small);

}  // namespace issir
