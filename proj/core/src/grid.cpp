// Copyright 2026 The ISSIR Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "issir/grid.hpp"

#include <string>

#include "issir/error.hpp"

namespace issir {

GridSpec GridSpec::make(int window_length, int overlap_divisor,
                        double sample_rate, std::size_t signal_length) {
  GridSpec g;
  g.window_length = window_length;
  g.hop = overlap_divisor > 0 ? window_length / overlap_divisor : 0;
  g.sample_rate = sample_rate;
  g.signal_length = signal_length;
  g.validate();
  return g;
}

int GridSpec::num_frames() const {
  // Every sample of [pad, pad + len) must be covered by a full set of
  // overlapping frames.
  const std::size_t last = pad() + signal_length - 1;
  return static_cast<int>(last / static_cast<std::size_t>(hop)) + 1;
}

std::size_t GridSpec::padded_length() const {
  return frame_start(num_frames() - 1) + static_cast<std::size_t>(window_length);
}

void GridSpec::validate() const {
  if (window_length < 4 || window_length % 4 != 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "window length must be a positive multiple of 4");
  }
  if (hop != window_length / 2 && hop != window_length / 4) {
    throw Error(ErrorCode::kInvalidArgument,
                "hop must be half or a quarter of the window length");
  }
  if (!(sample_rate > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "sample rate must be positive");
  }
  if (signal_length == 0) {
    throw Error(ErrorCode::kEmptyInput, "empty input");
  }
}

DualGridSpec DualGridSpec::uniform(const GridSpec& large, int small_window) {
  DualGridSpec d;
  d.large = large;
  d.small = large;
  d.small.window_length = small_window;
  d.small.hop = small_window / large.overlap_divisor();
  return d;
}

std::size_t DualGridSpec::small_frame_start(int index) const {
  const int per = small_frames_per_transient();
  const int host = transient_frames[static_cast<std::size_t>(index / per)];
  return large.frame_start(host) +
         static_cast<std::size_t>(index % per) *
             static_cast<std::size_t>(small.hop);
}

void DualGridSpec::validate() const {
  large.validate();
  if (small.window_length < 4 || small.window_length % 4 != 0 ||
      large.window_length % small.window_length != 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "small window must divide the large window");
  }
  if (small.window_length * large.hop !=
      small.hop * large.window_length) {
    throw Error(ErrorCode::kInvalidArgument,
                "small grid overlap must match the large grid overlap");
  }
  const int frames = large.num_frames();
  for (std::size_t i = 0; i < transient_frames.size(); ++i) {
    const int f = transient_frames[i];
    if (f < 0 || f >= frames) {
      throw Error(ErrorCode::kInvalidArgument,
                  "transient frame " + std::to_string(f) + " out of range");
    }
    if (i > 0 && f <= transient_frames[i - 1]) {
      throw Error(ErrorCode::kInvalidArgument,
                  "transient frames must be strictly increasing");
    }
  }
}

}  // namespace issir
