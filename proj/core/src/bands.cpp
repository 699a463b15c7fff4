// Copyright 2026 The ISSIR Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "issir/bands.hpp"

#include <algorithm>
#include <cmath>

#include "issir/error.hpp"

namespace issir {
namespace {

double inverse_erb_rate(double erb) {
  return (std::pow(10.0, erb / 21.4) - 1.0) / 0.00437;
}

}  // namespace

double erb_rate(double hz) { return 21.4 * std::log10(1.0 + 0.00437 * hz); }

std::vector<int> band_edges(int num_bands, int num_bins, double nyquist_hz) {
  if (num_bands < 1 || num_bins < 1) {
    throw Error(ErrorCode::kInvalidArgument, "band and bin counts must be >= 1");
  }
  if (num_bands > num_bins) {
    throw Error(ErrorCode::kInvalidArgument,
                "more bands than bins (" + std::to_string(num_bands) + " > " +
                    std::to_string(num_bins) + ")");
  }
  // Equal steps on the ERB-rate axis, mapped to bin boundaries (bin b spans
  // [b - 1/2, b + 1/2) in units of the bin spacing), forced to >= 1 bin.
  const double bin_hz = num_bins > 1 ? nyquist_hz / (num_bins - 1) : nyquist_hz;
  const double top = erb_rate(nyquist_hz);
  std::vector<int> edges(static_cast<std::size_t>(num_bands) + 1, 0);
  for (int k = 1; k < num_bands; ++k) {
    const double hz = inverse_erb_rate(top * k / num_bands);
    const int ideal = static_cast<int>(std::lround(hz / bin_hz + 0.5));
    const int lo = edges[k - 1] + 1;
    const int hi = num_bins - (num_bands - k);
    edges[k] = std::clamp(ideal, lo, hi);
  }
  edges[num_bands] = num_bins;

  // Rounding and the one-bin minimum can leave small dips in width; sorting
  // the widths keeps count and coverage and makes them non-decreasing.
  std::vector<int> widths(static_cast<std::size_t>(num_bands));
  for (int k = 0; k < num_bands; ++k) widths[k] = edges[k + 1] - edges[k];
  std::sort(widths.begin(), widths.end());
  for (int k = 0; k < num_bands; ++k) edges[k + 1] = edges[k] + widths[k];
  return edges;
}

}  // namespace issir
