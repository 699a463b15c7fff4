// Copyright 2026 The ISSIR Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <span>
#include <vector>

#include "issir/bitstream.hpp"
#include "issir/signal.hpp"
#include "issir/tf_array.hpp"

namespace issir {

/// Per-source soft masks alpha_j = |S_j|^2 / sum_k |S_k|^2.
struct WienerMaskSet {
  std::vector<RealSpectrogram> alpha;
};

/// Per-source binary activity domains (values 0.0 / 1.0).
struct ActivityMask {
  std::vector<RealSpectrogram> psi;
};

enum class ReconMode {
  kFixedDivisor,      // M1: fixed D, activity masking
  kActiveCount,       // M2: D = number of active sources, activity masking
  kActiveCountNoMask, // M3: D = J, no activity masking
};

struct ReconParams {
  ReconMode mode = ReconMode::kFixedDivisor;
  double divisor = 40.0;  // D, used by kFixedDivisor
  double rho = 0.01;
  int iterations = 50;
  int workers = 1;        // concurrent per-source projections

  void validate() const;
};

/// Zero-energy bins get 1/J for every source.
WienerMaskSet wiener_masks(std::span<const RealSpectrogram> power);

std::vector<ComplexSpectrogram> wiener_estimates(const ComplexSpectrogram& mix,
                                                 const WienerMaskSet& masks);
std::vector<Signal> wiener_separate(const ComplexSpectrogram& mix,
                                    const WienerMaskSet& masks);

/// E = M - sum_i S_i.
ComplexSpectrogram remix_error(const ComplexSpectrogram& mix,
                               std::span<const ComplexSpectrogram> estimates);

/// psi_j = 1 where alpha_j > rho.
ActivityMask activity_masks(const WienerMaskSet& masks, double rho);

/// Multiple input spectrogram inversion with magnitudes fixed to
/// `target_mag`, phases initialized from the mixture.
std::vector<ComplexSpectrogram> misi(const ComplexSpectrogram& mix,
                                     std::span<const RealSpectrogram> target_mag,
                                     int iterations, int workers = 1);

/// psi_j * mag_j * exp(i angle M).
std::vector<ComplexSpectrogram> issir_initialize(
    const ComplexSpectrogram& mix, std::span<const RealSpectrogram> magnitude,
    const ActivityMask& activity);

/// Activity-masked remix-error distribution alternating with consistency
/// projection:
///
///   S_j <- psi_j * (G(S_j) + E / D),   E = M - sum_i G(S_i)
///
/// Magnitudes evolve freely unless `locked_magnitude` is non-empty, in which
/// case each update is snapped back to those magnitudes (the MISI variant).
std::vector<ComplexSpectrogram> issir_iterate(
    const ComplexSpectrogram& mix, std::vector<ComplexSpectrogram> estimates,
    const ActivityMask& activity, const ReconParams& params,
    std::span<const RealSpectrogram> locked_magnitude = {});

/// Full decoder-side separation from in-memory magnitudes and activity.
std::vector<Signal> issir_separate(const Signal& mix, const DualGridSpec& grid,
                                   std::span<const RealSpectrogram> magnitude,
                                   const ActivityMask& activity,
                                   const ReconParams& params);

/// Decoded magnitudes and activity of a side-info bundle on its grid.
struct DecodedSideInfo {
  DualGridSpec grid;
  std::vector<RealSpectrogram> power;
  ActivityMask activity;
};
DecodedSideInfo decode_side_info(const SideInfoBundle& bundle);

/// ISSIR decoder: mixture phase + dequantized magnitudes, K iterations,
/// synthesis through the decoded activity domains.
std::vector<Signal> issir_reconstruct(const Signal& mix,
                                      const SideInfoBundle& bundle,
                                      const ReconParams& params);

/// Baseline: Wiener masks built from the decoded (quantized) energies.
std::vector<Signal> wiener_from_side_info(const Signal& mix,
                                          const SideInfoBundle& bundle);

}  // namespace issir
