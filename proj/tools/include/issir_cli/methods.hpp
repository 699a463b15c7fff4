// Copyright 2026 The ISSIR Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <span>
#include <vector>

#include "issir/grid.hpp"
#include "issir/reconstruction.hpp"
#include "issir/signal.hpp"

namespace issir::cli {

// Separation with side information taken straight from the references,
// optionally log-quantized per bin with step `step_db` (0 = exact).
struct OracleModel {
  DualGridSpec grid;
  std::vector<RealSpectrogram> power;
  std::vector<RealSpectrogram> magnitude;
  ActivityMask activity;
};

OracleModel oracle_model(std::span<const Signal> refs, const GridSpec& grid,
                         double step_db, double rho);

std::vector<Signal> oracle_wiener(const Signal& mix, const OracleModel& m);
std::vector<Signal> oracle_misi(const Signal& mix, const OracleModel& m,
                                int iterations, int workers);
std::vector<Signal> oracle_issir(const Signal& mix, const OracleModel& m,
                                 const ReconParams& params);

}  // namespace issir::cli
