// Copyright 2026 The ISSIR Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <cmath>
#include <filesystem>
#include <iomanip>
#include <ostream>

#include "issir/error.hpp"
#include "issir/metrics.hpp"
#include "issir/wav.hpp"
#include "issir_cli/cli.hpp"
#include "issir_cli/methods.hpp"

namespace issir::cli {
namespace fs = std::filesystem;

namespace {

struct Method {
  std::string name;
  std::vector<Signal> estimates;
};

// Pairs estimate files with references by file name, or by sorted order when
// the names differ entirely.
std::vector<Signal> load_estimates(const std::string& dir,
                                   const std::vector<std::string>& refs) {
  const auto files = list_wavs(dir);
  std::vector<Signal> out;
  bool by_name = true;
  for (const auto& r : refs) {
    by_name = by_name && fs::exists(fs::path(dir) / fs::path(r).filename());
  }
  if (by_name) {
    for (const auto& r : refs) {
      out.push_back(read_wav((fs::path(dir) / fs::path(r).filename()).string()));
    }
    return out;
  }
  if (files.size() != refs.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                dir + ": " + std::to_string(files.size()) + " estimates for " +
                    std::to_string(refs.size()) + " references");
  }
  for (const auto& f : files) out.push_back(read_wav(f));
  return out;
}

void put(std::ostream& os, double v) {
  if (std::isfinite(v)) {
    os << v;
  } else {
    os << "nan";
  }
}

}  // namespace

std::size_t run_eval(const EvalOptions& opt, std::ostream& csv, int workers) {
  const auto ref_files = list_wavs(opt.ref_dir);
  if (ref_files.empty()) {
    throw Error(ErrorCode::kEmptyInput, "no references in " + opt.ref_dir);
  }
  std::vector<Signal> refs;
  std::vector<std::string> names;
  for (const auto& f : ref_files) {
    refs.push_back(read_wav(f));
    names.push_back(fs::path(f).stem().string());
  }
  const Signal mix = opt.mix_path.empty() ? mix_down(refs) : read_wav(opt.mix_path);
  if (mix.size() != refs.front().size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "mixture and references differ in length");
  }

  const GridSpec grid =
      GridSpec::make(2048, 2, mix.sample_rate, mix.size());
  std::vector<Method> methods;
  const OracleModel model = oracle_model(refs, grid, 0.0, 0.01);
  if (refs.size() >= 2) {
    methods.push_back({"wiener_oracle", oracle_wiener(mix, model)});
  }
  for (const auto& name : opt.run) {
    if (name == "misi") {
      methods.push_back({name, oracle_misi(mix, model, opt.iterations, workers)});
      continue;
    }
    CodecConfig cfg;
    cfg.target_rate = opt.target_rate;
    cfg.dual = name == "issir_dual";
    ReconParams params;
    params.iterations = opt.iterations;
    params.workers = workers;
    const auto r = encode(mix, refs, cfg);
    methods.push_back({name, decode(mix, r.stream, params)});
  }
  if (!opt.est_dir.empty()) {
    std::vector<fs::path> subdirs;
    for (const auto& e : fs::directory_iterator(opt.est_dir)) {
      if (e.is_directory()) subdirs.push_back(e.path());
    }
    std::sort(subdirs.begin(), subdirs.end());
    if (subdirs.empty()) {
      methods.push_back({opt.method, load_estimates(opt.est_dir, ref_files)});
    }
    for (const auto& d : subdirs) {
      methods.push_back(
          {d.filename().string(), load_estimates(d.string(), ref_files)});
    }
  }

  const BssEvaluator evaluator(refs, opt.filter_length);
  std::vector<SeparationScores> scores;
  for (const auto& m : methods) {
    if (m.estimates.size() != refs.size()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  m.name + ": estimate count does not match the references");
    }
    scores.push_back(evaluator.evaluate(m.estimates));
  }

  csv << "method,source,sdr,sir,sar,delta_sdr,delta_sir,delta_sar,defined,"
         "iterations,target_rate,filter_length\n";
  csv << std::fixed << std::setprecision(4);
  std::size_t rows = 0;
  for (std::size_t m = 0; m < methods.size(); ++m) {
    const bool has_baseline = refs.size() >= 2;
    const SeparationScores rel =
        has_baseline ? relative_scores(scores[m], scores[0], "wiener_oracle")
                     : scores[m];
    for (std::size_t j = 0; j < refs.size(); ++j) {
      const auto& s = scores[m].sources[j];
      const auto& d = rel.sources[j];
      csv << methods[m].name << ',' << names[j] << ',';
      put(csv, s.sdr);
      csv << ',';
      put(csv, s.sir);
      csv << ',';
      put(csv, s.sar);
      csv << ',';
      put(csv, has_baseline ? d.sdr : NAN);
      csv << ',';
      put(csv, has_baseline ? d.sir : NAN);
      csv << ',';
      put(csv, has_baseline ? d.sar : NAN);
      csv << ',' << (s.defined ? 1 : 0) << ',' << opt.iterations << ','
          << opt.target_rate << ',' << opt.filter_length << '\n';
      ++rows;
    }
  }
  return rows;
}

}  // namespace issir::cli
