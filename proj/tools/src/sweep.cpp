// Copyright 2026 The ISSIR Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <future>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "issir/error.hpp"
#include "issir/metrics.hpp"
#include "issir/wav.hpp"
#include "issir_cli/cli.hpp"
#include "issir_cli/methods.hpp"

namespace issir::cli {
namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

[[noreturn]] void bad(const std::string& key, const std::string& what) {
  throw Error(ErrorCode::kInvalidArgument, key + ": " + what);
}

double to_double(const std::string& key, const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    bad(key, "not a number '" + s + "'");
  }
  if (used != s.size()) bad(key, "not a number '" + s + "'");
  return v;
}

int to_int(const std::string& key, const std::string& s) {
  const double v = to_double(key, s);
  if (v != std::floor(v) || std::abs(v) > 1e9) bad(key, "not an integer");
  return static_cast<int>(v);
}

bool to_bool(const std::string& key, const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  bad(key, "not a boolean '" + s + "'");
}

template <typename T, typename F>
std::vector<T> list(const std::string& key, const std::string& value, F conv) {
  std::vector<T> out;
  for (const auto& item : split(value)) out.push_back(conv(key, item));
  return out;
}

struct Material {
  Signal mix;
  std::vector<Signal> stems;
  std::vector<std::string> names;
};

Material load_material(const SweepConfig& cfg) {
  Material m;
  if (!cfg.mix_path.empty()) {
    m.mix = read_wav(cfg.mix_path);
    for (const auto& f : list_wavs(cfg.stems_dir)) {
      m.stems.push_back(read_wav(f));
      m.names.push_back(std::filesystem::path(f).stem().string());
    }
    return m;
  }
  Fixture fx = make_fixture(fixture_kind_from_string(cfg.fixture), cfg.seed,
                            cfg.seconds);
  m.mix = std::move(fx.mix);
  m.stems = std::move(fx.stems);
  m.names = std::move(fx.stem_names);
  return m;
}

struct PointResult {
  SeparationScores scores;
  double rate = NAN;
};

int divisor_of(int overlap) {
  if (overlap == 50) return 2;
  if (overlap == 75) return 4;
  throw Error(ErrorCode::kInvalidArgument, "overlap must be 50 or 75");
}

PointResult run_point(const Material& m, const SweepPoint& p,
                      const BssEvaluator& evaluator) {
  ReconParams params;
  params.mode = p.mode;
  params.divisor = p.divisor;
  params.rho = p.rho;
  params.iterations = p.iterations;

  CodecConfig cfg;
  cfg.step_db = p.step_db > 0.0 ? p.step_db : 1.0;
  cfg.threshold_db = p.threshold_db;
  cfg.rho = p.rho;
  cfg.bands_large = p.bands;
  cfg.overlap_divisor = divisor_of(p.overlap);
  cfg.dual = p.dual;
  cfg.target_rate = p.target_rate;

  PointResult r;
  if (p.target_rate) {
    if (p.method != "issir") {
      throw Error(ErrorCode::kInvalidArgument,
                  "rate-controlled points need method issir");
    }
    const auto enc = encode(m.mix, m.stems, cfg);
    r.rate = enc.rate;
    r.scores = evaluator.evaluate(decode(m.mix, enc.stream, params));
    return r;
  }
  if (p.step_db > 0.0) {
    const auto analysis = analyze_sources(m.mix, m.stems, cfg);
    r.rate = measure_rate(serialize(build_bundle(analysis, p.threshold_db, p.bands)),
                          analysis.duration, static_cast<int>(m.stems.size()));
  }
  const GridSpec grid = GridSpec::make(2048, cfg.overlap_divisor,
                                       m.mix.sample_rate, m.mix.size());
  const OracleModel model = oracle_model(m.stems, grid, p.step_db, p.rho);
  if (p.method == "wiener") {
    r.scores = evaluator.evaluate(oracle_wiener(m.mix, model));
  } else if (p.method == "misi") {
    r.scores = evaluator.evaluate(oracle_misi(m.mix, model, p.iterations, 1));
  } else {
    r.scores = evaluator.evaluate(oracle_issir(m.mix, model, params));
  }
  return r;
}

}  // namespace

SweepConfig parse_sweep_config(std::istream& in) {
  SweepConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      bad("line " + std::to_string(lineno), "expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "fixture") {
      cfg.fixture = value;
    } else if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(to_int(key, value));
    } else if (key == "seconds") {
      cfg.seconds = to_double(key, value);
    } else if (key == "mix") {
      cfg.mix_path = value;
    } else if (key == "stems") {
      cfg.stems_dir = value;
    } else if (key == "method") {
      cfg.methods = split(value);
      for (const auto& m : cfg.methods) {
        if (m != "issir" && m != "misi" && m != "wiener") {
          bad(key, "unknown method '" + m + "'");
        }
      }
    } else if (key == "u") {
      cfg.step_db = list<double>(key, value, to_double);
    } else if (key == "D") {
      cfg.divisor = list<double>(key, value, to_double);
    } else if (key == "rho") {
      cfg.rho = list<double>(key, value, to_double);
    } else if (key == "overlap") {
      cfg.overlap = list<int>(key, value, to_int);
    } else if (key == "bands") {
      cfg.bands = list<int>(key, value, to_int);
    } else if (key == "T") {
      cfg.threshold_db = list<double>(key, value, to_double);
    } else if (key == "target_rate") {
      cfg.target_rate = list<double>(key, value, to_double);
    } else if (key == "dual") {
      cfg.dual = list<bool>(key, value, to_bool);
    } else if (key == "mode") {
      cfg.modes.clear();
      for (const auto& m : split(value)) {
        try {
          cfg.modes.push_back(parse_mode(m));
        } catch (const Error&) {
          bad(key, "unknown mode '" + m + "'");
        }
      }
    } else if (key == "iterations") {
      cfg.iterations = list<int>(key, value, to_int);
    } else if (key == "filter_length") {
      cfg.filter_length = to_int(key, value);
    } else {
      bad(key, "unknown key");
    }
  }
  if (cfg.mix_path.empty() != cfg.stems_dir.empty()) {
    bad("mix", "mix and stems must be given together");
  }
  const bool any_empty =
      cfg.methods.empty() || cfg.step_db.empty() || cfg.divisor.empty() ||
      cfg.rho.empty() || cfg.overlap.empty() || cfg.bands.empty() ||
      cfg.threshold_db.empty() || cfg.dual.empty() || cfg.modes.empty() ||
      cfg.iterations.empty();
  if (any_empty) bad("grid", "every swept list needs at least one value");
  if (std::any_of(cfg.step_db.begin(), cfg.step_db.end(),
                  [](double u) { return !(u >= 0.0); })) {
    bad("u", "steps must be >= 0");
  }
  return cfg;
}

std::vector<SweepPoint> expand(const SweepConfig& cfg) {
  std::vector<std::optional<double>> rates;
  for (double r : cfg.target_rate) rates.emplace_back(r);
  if (rates.empty()) rates.emplace_back();
  std::vector<SweepPoint> out;
  for (const auto& method : cfg.methods)
    for (double u : cfg.step_db)
      for (double d : cfg.divisor)
        for (double rho : cfg.rho)
          for (int ov : cfg.overlap)
            for (int b : cfg.bands)
              for (double t : cfg.threshold_db)
                for (const auto& rate : rates)
                  for (bool dual : cfg.dual)
                    for (ReconMode mode : cfg.modes)
                      for (int it : cfg.iterations) {
                        out.push_back({method, u, d, rho, ov, b, t, rate, dual,
                                       mode, it});
                      }
  return out;
}

std::size_t run_sweep(const SweepConfig& cfg, std::ostream& csv, int workers) {
  const Material m = load_material(cfg);
  if (m.stems.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "a sweep needs at least two stems");
  }
  const BssEvaluator evaluator(m.stems, cfg.filter_length);
  const auto points = expand(cfg);

  // Oracle Wiener baseline per overlap, computed once.
  std::map<int, SeparationScores> baseline;
  for (const auto& p : points) {
    if (baseline.count(p.overlap)) continue;
    const GridSpec grid = GridSpec::make(2048, divisor_of(p.overlap),
                                         m.mix.sample_rate, m.mix.size());
    baseline[p.overlap] =
        evaluator.evaluate(oracle_wiener(m.mix, oracle_model(m.stems, grid, 0.0, 0.01)));
  }

  std::vector<PointResult> results(points.size());
  const std::size_t batch = static_cast<std::size_t>(std::max(1, workers));
  for (std::size_t first = 0; first < points.size(); first += batch) {
    std::vector<std::future<PointResult>> running;
    const std::size_t last = std::min(points.size(), first + batch);
    for (std::size_t i = first; i < last; ++i) {
      running.push_back(std::async(std::launch::async, [&, i] {
        return run_point(m, points[i], evaluator);
      }));
    }
    for (std::size_t i = first; i < last; ++i) {
      results[i] = running[i - first].get();
    }
  }

  csv << "method,u,D,rho,overlap,bands,T,target_rate,dual,mode,iterations,"
         "rate,source,metric,value,wiener_value,delta\n";
  csv << std::fixed << std::setprecision(4);
  std::size_t rows = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    const auto& base = baseline.at(p.overlap);
    for (std::size_t j = 0; j < m.stems.size(); ++j) {
      const auto& s = results[i].scores.sources[j];
      const auto& w = base.sources[j];
      const std::pair<const char*, std::pair<double, double>> metrics[] = {
          {"sdr", {s.sdr, w.sdr}}, {"sir", {s.sir, w.sir}}, {"sar", {s.sar, w.sar}}};
      for (const auto& [name, v] : metrics) {
        const bool ok = s.defined && w.defined;
        csv << p.method << ',' << p.step_db << ',' << p.divisor << ','
            << p.rho << ',' << p.overlap << ',' << p.bands << ','
            << p.threshold_db << ',';
        if (p.target_rate) csv << *p.target_rate;
        csv << ',' << (p.dual ? 1 : 0) << ',' << to_string(p.mode) << ','
            << p.iterations << ',';
        if (std::isfinite(results[i].rate)) csv << results[i].rate;
        csv << ',' << m.names[j] << ',' << name << ',';
        if (s.defined) {
          csv << v.first;
        } else {
          csv << "nan";
        }
        csv << ',';
        if (w.defined) {
          csv << v.second;
        } else {
          csv << "nan";
        }
        csv << ',';
        if (ok) {
          csv << v.first - v.second;
        } else {
          csv << "nan";
        }
        csv << '\n';
        ++rows;
      }
    }
  }
  return rows;
}

}  // namespace issir::cli
