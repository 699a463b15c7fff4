// Copyright 2026 The ISSIR Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstddef>
#include <vector>

namespace issir {

/// Geometry of a uniform STFT. Frames index a padded copy of the signal with
/// one window of zeros on each side; frame f starts at padded sample f * hop.
struct GridSpec {
  int window_length = 2048;
  int hop = 1024;
  double sample_rate = 44100.0;
  std::size_t signal_length = 0;

  static GridSpec make(int window_length, int overlap_divisor,
                       double sample_rate, std::size_t signal_length);

  int num_bins() const { return window_length / 2 + 1; }
  int num_frames() const;
  /// 2 for 50% overlap, 4 for 75%.
  int overlap_divisor() const { return window_length / hop; }
  std::size_t padded_length() const;
  std::size_t frame_start(int frame) const {
    return static_cast<std::size_t>(frame) * static_cast<std::size_t>(hop);
  }
  /// Offset of the first real sample inside the padded buffer.
  std::size_t pad() const { return static_cast<std::size_t>(window_length); }

  void validate() const;
  bool operator==(const GridSpec&) const = default;
};

/// Large-window grid everywhere plus small-window frames tiling each
/// transient large frame.
struct DualGridSpec {
  GridSpec large;
  GridSpec small;
  std::vector<int> transient_frames;

  /// Dual grid with no transients; behaves exactly like `large`.
  static DualGridSpec uniform(const GridSpec& large, int small_window = 256);

  bool is_uniform() const { return transient_frames.empty(); }
  int small_frames_per_transient() const {
    return (large.window_length - small.window_length) / small.hop + 1;
  }
  int num_small_frames() const {
    return static_cast<int>(transient_frames.size()) *
           small_frames_per_transient();
  }
  /// Padded-buffer start of small frame `index` (transient-major order).
  std::size_t small_frame_start(int index) const;

  void validate() const;
  bool operator==(const DualGridSpec&) const = default;
};

}  // namespace issir
