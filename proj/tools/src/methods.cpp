// Copyright 2026 The ISSIR Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "issir_cli/methods.hpp"

#include "issir/quantizer.hpp"
#include "issir/stft.hpp"

namespace issir::cli {

OracleModel oracle_model(std::span<const Signal> refs, const GridSpec& grid,
                         double step_db, double rho) {
  OracleModel m;
  m.grid = DualGridSpec::uniform(grid);
  for (const auto& r : refs) {
    m.power.push_back(requantize(power(stft(r, m.grid)), step_db));
    RealSpectrogram mag = m.power.back();
    mag.large = mag.large.sqrt();
    mag.small = mag.small.sqrt();
    m.magnitude.push_back(std::move(mag));
  }
  if (refs.size() >= 2) {
    m.activity = activity_masks(wiener_masks(m.power), rho);
  } else {
    m.activity.psi.assign(refs.size(), m.power.front());
    for (auto& p : m.activity.psi) {
      p.large.setOnes();
      p.small.setOnes();
    }
  }
  return m;
}

std::vector<Signal> oracle_wiener(const Signal& mix, const OracleModel& m) {
  return wiener_separate(stft(mix, m.grid), wiener_masks(m.power));
}

std::vector<Signal> oracle_misi(const Signal& mix, const OracleModel& m,
                                int iterations, int workers) {
  std::vector<Signal> out;
  for (const auto& x : misi(stft(mix, m.grid), m.magnitude, iterations, workers)) {
    out.push_back(istft(x));
  }
  return out;
}

std::vector<Signal> oracle_issir(const Signal& mix, const OracleModel& m,
                                 const ReconParams& params) {
  return issir_separate(mix, m.grid, m.magnitude, m.activity, params);
}

}  // namespace issir::cli
