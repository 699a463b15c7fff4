// Copyright 2026 The ISSIR Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "issir/quantizer.hpp"

#include <cmath>
#include <numeric>

#include "issir/bands.hpp"

namespace issir {

std::int32_t to_cdb(double db) {
  if (std::isinf(db) && db < 0) return kMinusInfCdb;
  return static_cast<std::int32_t>(std::round(db * 100.0));
}

double from_cdb(std::int32_t cdb) {
  if (cdb == kMinusInfCdb) return -std::numeric_limits<double>::infinity();
  return cdb / 100.0;
}

void CodecConfig::validate() const {
  if (!(step_db > 0.0) || step_cdb() < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "quantization step must be at least 0.01 dB");
  }
  if (!(threshold_db <= -20.0)) {
    throw Error(ErrorCode::kInvalidArgument, "threshold T must be <= -20 dB");
  }
  if (!(rho > 0.0 && rho < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "rho must lie in (0, 1)");
  }
  if (overlap_divisor != 2 && overlap_divisor != 4) {
    throw Error(ErrorCode::kInvalidArgument, "overlap must be 50% or 75%");
  }
  if (small_window < 4 || large_window % small_window != 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "small window must divide the large window");
  }
  if (bands_large < 1 || bands_large > large_window / 2 + 1 ||
      bands_small < 1 || bands_small > small_window / 2 + 1) {
    throw Error(ErrorCode::kInvalidArgument, "band counts exceed bin counts");
  }
  if (target_rate && !(*target_rate > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "target rate must be positive");
  }
}

std::int32_t CodecConfig::step_cdb() const { return to_cdb(step_db); }
std::int32_t CodecConfig::threshold_cdb() const { return to_cdb(threshold_db); }
std::uint32_t CodecConfig::rho_ppm() const {
  return static_cast<std::uint32_t>(std::lround(rho * 1e6));
}

TfMatrix<double> band_energies(const TfMatrix<double>& power,
                               std::span<const int> edges) {
  const int bands = static_cast<int>(edges.size()) - 1;
  if (bands < 1 || edges.back() != power.cols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "band edges do not cover the spectrogram bins");
  }
  TfMatrix<double> out(power.rows(), bands);
  for (int k = 0; k < bands; ++k) {
    const int width = edges[k + 1] - edges[k];
    out.col(k) = power.middleCols(edges[k], width).rowwise().sum() / width;
  }
  return out;
}

QuantizedBands quantize_bands(const TfMatrix<double>& power,
                              std::span<const int> edges,
                              std::int32_t step_cdb,
                              std::int32_t threshold_cdb) {
  const TfMatrix<double> energy = band_energies(power, edges);
  QuantizedBands q;
  q.rows = static_cast<int>(energy.rows());
  q.bands = static_cast<int>(energy.cols());
  q.indices.assign(static_cast<std::size_t>(energy.size()), kSilentIndex);

  double peak = 0.0;
  if (energy.size() > 0) peak = energy.maxCoeff();
  if (!(peak > 0.0)) {
    q.norm_cdb = kMinusInfCdb;
    return q;
  }
  q.norm_cdb = to_cdb(10.0 * std::log10(peak));
  const double norm = from_cdb(q.norm_cdb);
  const double step = step_cdb / 100.0;
  const double threshold = from_cdb(threshold_cdb);
  for (int r = 0; r < q.rows; ++r) {
    for (int b = 0; b < q.bands; ++b) {
      const double e = energy(r, b);
      if (!(e > 0.0)) continue;
      const double rel = 10.0 * std::log10(e) - norm;
      if (rel < threshold) continue;
      q.indices[static_cast<std::size_t>(r) * q.bands + b] =
          static_cast<std::int32_t>(std::round(rel / step));
    }
  }
  return q;
}

TfMatrix<double> dequantize_bands(const QuantizedBands& q,
                                  std::span<const int> edges,
                                  std::int32_t step_cdb) {
  if (static_cast<int>(edges.size()) != q.bands + 1) {
    throw Error(ErrorCode::kDimensionMismatch,
                "band edges do not match the quantized bands");
  }
  TfMatrix<double> out = TfMatrix<double>::Zero(q.rows, edges.back());
  if (q.norm_cdb == kMinusInfCdb) return out;
  for (int r = 0; r < q.rows; ++r) {
    for (int b = 0; b < q.bands; ++b) {
      const std::int32_t idx = q.at(r, b);
      if (idx == kSilentIndex) continue;
      const std::int64_t cdb =
          static_cast<std::int64_t>(idx) * step_cdb + q.norm_cdb;
      const double e = std::pow(10.0, static_cast<double>(cdb) / 1000.0);
      out.row(r).segment(edges[b], edges[b + 1] - edges[b]).setConstant(e);
    }
  }
  return out;
}

QuantizedSpectrogram quantize_spectrogram(const RealSpectrogram& power,
                                          const CodecConfig& cfg) {
  const double nyquist = power.grid.large.sample_rate / 2.0;
  const auto large_edges =
      band_edges(cfg.bands_large, power.grid.large.num_bins(), nyquist);
  const auto small_edges =
      band_edges(cfg.bands_small, power.grid.small.num_bins(), nyquist);
  QuantizedSpectrogram q;
  q.large = quantize_bands(power.large, large_edges, cfg.step_cdb(),
                           cfg.threshold_cdb());
  q.small = quantize_bands(power.small, small_edges, cfg.step_cdb(),
                           cfg.threshold_cdb());
  return q;
}

RealSpectrogram dequantize_spectrogram(const QuantizedSpectrogram& q,
                                       const CodecConfig& cfg,
                                       const DualGridSpec& grid) {
  const double nyquist = grid.large.sample_rate / 2.0;
  RealSpectrogram out;
  out.grid = grid;
  out.large = dequantize_bands(
      q.large, band_edges(cfg.bands_large, grid.large.num_bins(), nyquist),
      cfg.step_cdb());
  out.small = dequantize_bands(
      q.small, band_edges(cfg.bands_small, grid.small.num_bins(), nyquist),
      cfg.step_cdb());
  if (out.large.rows() != grid.large.num_frames() ||
      out.small.rows() != grid.num_small_frames()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "quantized rows do not match the grid");
  }
  return out;
}

RealSpectrogram requantize(const RealSpectrogram& power, double step_db) {
  if (!(step_db >= 0.0) || !std::isfinite(step_db)) {
    throw Error(ErrorCode::kInvalidArgument, "step must be finite and >= 0");
  }
  if (step_db == 0.0) return power;
  const std::int32_t step = to_cdb(step_db);
  if (step < 1) throw Error(ErrorCode::kInvalidArgument, "step below 0.01 dB");
  const auto per_bin = [&](const TfMatrix<double>& p) -> TfMatrix<double> {
    if (p.size() == 0) return p;
    std::vector<int> edges(static_cast<std::size_t>(p.cols()) + 1);
    std::iota(edges.begin(), edges.end(), 0);
    return dequantize_bands(quantize_bands(p, edges, step, kMinusInfCdb),
                            edges, step);
  };
  RealSpectrogram out;
  out.grid = power.grid;
  out.large = per_bin(power.large);
  out.small = per_bin(power.small);
  return out;
}

std::vector<std::uint8_t> encode_activity(const TfMatrix<double>& psi,
                                          std::span<const int> edges) {
  const int bands = static_cast<int>(edges.size()) - 1;
  if (bands < 1 || edges.back() != psi.cols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "band edges do not cover the activity mask");
  }
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(psi.rows()) * bands, 0);
  for (Eigen::Index r = 0; r < psi.rows(); ++r) {
    for (int b = 0; b < bands; ++b) {
      const bool any =
          (psi.row(r).segment(edges[b], edges[b + 1] - edges[b]) > 0.5).any();
      bits[static_cast<std::size_t>(r) * bands + b] = any ? 1 : 0;
    }
  }
  return bits;
}

TfMatrix<double> decode_activity(std::span<const std::uint8_t> bits, int rows,
                                 std::span<const int> edges) {
  const int bands = static_cast<int>(edges.size()) - 1;
  if (bits.size() != static_cast<std::size_t>(rows) * bands) {
    throw Error(ErrorCode::kDimensionMismatch,
                "activity bits do not match rows x bands");
  }
  TfMatrix<double> out = TfMatrix<double>::Zero(rows, edges.back());
  for (int r = 0; r < rows; ++r) {
    for (int b = 0; b < bands; ++b) {
      if (bits[static_cast<std::size_t>(r) * bands + b]) {
        out.row(r).segment(edges[b], edges[b + 1] - edges[b]).setOnes();
      }
    }
  }
  return out;
}

}  // namespace issir
