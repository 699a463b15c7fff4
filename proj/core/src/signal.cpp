// Copyright 2026 The ISSIR Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "issir/signal.hpp"

#include <cmath>

#include "issir/error.hpp"

namespace issir {

void Signal::validate() const {
  if (!(sample_rate > 0.0) || !std::isfinite(sample_rate)) {
    throw Error(ErrorCode::kInvalidArgument, "sample rate must be positive");
  }
  for (double s : samples) {
    if (!std::isfinite(s)) {
      throw Error(ErrorCode::kInvalidArgument, "signal has non-finite samples");
    }
  }
}

Signal mix_down(std::span<const Signal> sources) {
  if (sources.empty()) throw Error(ErrorCode::kNoSources, "no sources");
  Signal out(std::vector<double>(sources[0].size(), 0.0),
             sources[0].sample_rate);
  for (const Signal& s : sources) {
    if (s.size() != out.size() || s.sample_rate != out.sample_rate) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "sources differ in length or sample rate");
    }
    for (std::size_t i = 0; i < s.size(); ++i) out.samples[i] += s.samples[i];
  }
  return out;
}

}  // namespace issir
