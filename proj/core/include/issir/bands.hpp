// Copyright 2026 The ISSIR Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <vector>

namespace issir {

/// ERB-rate (Glasberg & Moore) of a frequency in Hz.
double erb_rate(double hz);

/// Partition of `num_bins` one-sided bins into `num_bands` contiguous bands
/// on an ERB-like scale. Returns num_bands + 1 edges; band k covers
/// [edges[k], edges[k+1]). Widths are >= 1 and non-decreasing with frequency.
/// `nyquist_hz` fixes the frequency of the last bin.
std::vector<int> band_edges(int num_bands, int num_bins,
                            double nyquist_hz = 22050.0);

}  // namespace issir
