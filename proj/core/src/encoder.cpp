// Copyright 2026 The ISSIR Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "issir/codec.hpp"

#include <cmath>
#include <map>

#include "issir/bands.hpp"
#include "issir/quantizer.hpp"
#include "issir/stft.hpp"
#include "issir/transients.hpp"

namespace issir {

EncoderAnalysis analyze_sources(const Signal& mix, std::span<const Signal> stems,
                                const CodecConfig& cfg) {
  cfg.validate();
  if (stems.empty()) throw Error(ErrorCode::kNoSources, "no sources");
  mix.validate();
  if (mix.empty()) throw Error(ErrorCode::kEmptyInput, "empty input");
  for (const auto& s : stems) {
    s.validate();
    if (s.size() != mix.size() || s.sample_rate != mix.sample_rate) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "stems must match the mixture length and sample rate");
    }
  }
  if (std::round(mix.sample_rate) != mix.sample_rate) {
    throw Error(ErrorCode::kInvalidArgument, "sample rate must be integral");
  }

  EncoderAnalysis a;
  a.cfg = cfg;
  a.duration = mix.duration();
  const GridSpec large = GridSpec::make(cfg.large_window, cfg.overlap_divisor,
                                        mix.sample_rate, mix.size());
  DualGridSpec grid = DualGridSpec::uniform(large, cfg.small_window);
  if (cfg.dual) {
    std::vector<TransientTrack> tracks;
    for (std::size_t j = 0; j < stems.size(); ++j) {
      tracks.push_back(detect_transients(stems[j], large));
      tracks.back().source_id = static_cast<int>(j);
    }
    const TransientTrack all = clean(combine(tracks), large);
    grid = build_dual_grid(all, large, grid.small);
  }
  a.grid = grid;

  const StftEngine engine(grid);
  for (const auto& s : stems) a.power.push_back(power(engine.analyze(s)));
  if (a.power.size() == 1) {
    RealSpectrogram ones = RealSpectrogram::zeros(grid);
    ones.large.setOnes();
    ones.small.setOnes();
    a.activity.psi.push_back(std::move(ones));
  } else {
    a.activity = activity_masks(wiener_masks(a.power), cfg.rho);
  }
  return a;
}

SideInfoBundle build_bundle(const EncoderAnalysis& a, double threshold_db,
                            int bands_large) {
  CodecConfig cfg = a.cfg;
  cfg.threshold_db = threshold_db;
  cfg.bands_large = bands_large;
  cfg.validate();

  SideInfoBundle b;
  b.sample_rate = static_cast<std::uint32_t>(a.grid.large.sample_rate);
  b.signal_length = a.grid.large.signal_length;
  b.large_window = cfg.large_window;
  b.small_window = cfg.small_window;
  b.overlap_divisor = cfg.overlap_divisor;
  b.step_cdb = cfg.step_cdb();
  b.rho_ppm = cfg.rho_ppm();
  b.bands_large = cfg.bands_large;
  b.bands_small = cfg.bands_small;
  b.threshold_cdb = cfg.threshold_cdb();
  b.backend = cfg.backend;
  b.transients = a.grid.transient_frames;

  const double nyquist = a.grid.large.sample_rate / 2.0;
  const auto edges_large =
      band_edges(cfg.bands_large, a.grid.large.num_bins(), nyquist);
  const auto edges_small =
      band_edges(cfg.bands_small, a.grid.small.num_bins(), nyquist);
  for (std::size_t j = 0; j < a.power.size(); ++j) {
    SourceSideInfo s;
    s.spectrogram = quantize_spectrogram(a.power[j], cfg);
    s.activity_large = encode_activity(a.activity.psi[j].large, edges_large);
    s.activity_small = encode_activity(a.activity.psi[j].small, edges_small);
    b.sources.push_back(std::move(s));
  }
  return b;
}

namespace {

EncodeResult finish(const EncoderAnalysis& a, double threshold_db,
                    int bands_large) {
  EncodeResult r;
  r.bundle = build_bundle(a, threshold_db, bands_large);
  r.stream = serialize(r.bundle);
  r.rate = measure_rate(r.stream, a.duration,
                        static_cast<int>(a.power.size()));
  r.threshold_db = threshold_db;
  r.bands_large = bands_large;
  r.transient_count = a.grid.transient_frames.size();
  return r;
}

}  // namespace

EncodeResult rate_control(const EncoderAnalysis& a, double target_rate) {
  if (!(target_rate > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "target rate must be positive");
  }
  const double limit = 1.1 * target_rate;
  const int lo_t = static_cast<int>(kPermissiveThresholdDb);
  const int hi_t = -20;
  double best = std::numeric_limits<double>::infinity();

  for (int bands : kRateControlBands) {
    if (bands > a.grid.large.num_bins()) continue;
    // Rate falls as T rises, so the first acceptable T of the 1 dB scan is
    // found by bisection over the integer grid. Results are memoized.
    std::map<int, EncodeResult> seen;
    auto at = [&](int t) -> const EncodeResult& {
      auto it = seen.find(t);
      if (it == seen.end()) {
        it = seen.emplace(t, finish(a, static_cast<double>(t), bands)).first;
        best = std::min(best, it->second.rate);
      }
      return it->second;
    };
    if (at(lo_t).rate <= limit) return at(lo_t);
    if (at(hi_t).rate > limit) continue;
    int fail = lo_t;  // rate > limit
    int ok = hi_t;    // rate <= limit
    while (ok - fail > 1) {
      const int mid = fail + (ok - fail) / 2;
      if (at(mid).rate <= limit) {
        ok = mid;
      } else {
        fail = mid;
      }
    }
    return at(ok);
  }
  throw RateUnreachableError(
      best, "target rate " + std::to_string(target_rate) +
                " kb/source/s unreachable; best achieved " +
                std::to_string(best));
}

EncodeResult rate_control(const Signal& mix, std::span<const Signal> stems,
                          const CodecConfig& cfg) {
  if (!cfg.target_rate) {
    throw Error(ErrorCode::kInvalidArgument, "rate control needs a target rate");
  }
  return rate_control(analyze_sources(mix, stems, cfg), *cfg.target_rate);
}

EncodeResult encode(const Signal& mix, std::span<const Signal> stems,
                    const CodecConfig& cfg) {
  const auto a = analyze_sources(mix, stems, cfg);
  if (cfg.target_rate) return rate_control(a, *cfg.target_rate);
  return finish(a, cfg.threshold_db, cfg.bands_large);
}

std::vector<Signal> decode(const Signal& mix, const Bitstream& stream,
                           const ReconParams& params) {
  return issir_reconstruct(mix, deserialize(stream), params);
}

}  // namespace issir
