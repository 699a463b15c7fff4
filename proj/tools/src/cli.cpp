// Copyright 2026 The ISSIR Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "issir_cli/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "issir/error.hpp"
#include "issir/wav.hpp"
#include "json.hpp"

namespace issir::cli {
namespace fs = std::filesystem;

namespace {

struct EncodeArgs {
  std::string mix;
  std::vector<std::string> stems;
  std::string out;
  std::string report;
  std::optional<double> target_rate;
  bool dual = false;
  double step_db = 1.0;
  double threshold_db = -60.0;
  double rho = 0.01;
  int bands = 250;
  int overlap = 50;
  std::string backend = "deflate";
};

struct DecodeArgs {
  std::string mix;
  std::string in;
  std::string outdir;
  std::vector<std::string> names;
  int iterations = 50;
  double divisor = 40.0;
  double rho = 0.01;
  std::string mode = "M1";
  bool float_out = false;
};

struct SynthArgs {
  std::string fixture = "two_source";
  std::uint64_t seed = 1;
  double seconds = 5.0;
  std::string outdir;
  bool float_out = false;
};

int overlap_divisor(int percent) {
  if (percent == 50) return 2;
  if (percent == 75) return 4;
  throw Error(ErrorCode::kInvalidArgument, "overlap must be 50 or 75");
}

std::ofstream open_out(const std::string& path, std::ios::openmode mode = {}) {
  std::ofstream f(path, std::ios::binary | std::ios::out | mode);
  if (!f) throw Error(ErrorCode::kIo, "cannot open " + path + " for writing");
  return f;
}

int cmd_encode(const EncodeArgs& a, std::ostream& out, std::ostream& err) {
  const Signal mix = read_wav(a.mix);
  std::vector<Signal> stems;
  for (const auto& p : a.stems) stems.push_back(read_wav(p));

  CodecConfig cfg;
  cfg.step_db = a.step_db;
  cfg.threshold_db = a.threshold_db;
  cfg.rho = a.rho;
  cfg.bands_large = a.bands;
  cfg.overlap_divisor = overlap_divisor(a.overlap);
  cfg.dual = a.dual;
  cfg.target_rate = a.target_rate;
  cfg.backend = a.backend == "store" ? EntropyBackend::kStore
                                     : EntropyBackend::kDeflate;
  EncodeResult r;
  try {
    r = encode(mix, stems, cfg);
  } catch (const RateUnreachableError& e) {
    err << "error: " << e.what() << " (best " << e.best_rate()
        << " kb/source/s)\n";
    return kExitData;
  }
  {
    auto f = open_out(a.out);
    f.write(reinterpret_cast<const char*>(r.stream.data()),
            static_cast<std::streamsize>(r.stream.size()));
    if (!f) throw Error(ErrorCode::kIo, "write failed: " + a.out);
  }
  nlohmann::ordered_json line = {
      {"command", "encode"},
      {"out", a.out},
      {"sources", stems.size()},
      {"bytes", r.stream.size()},
      {"rate_kbps_per_source", r.rate},
      {"threshold_db", r.threshold_db},
      {"bands_large", r.bands_large},
      {"transients", r.transient_count},
      {"dual", a.dual},
      {"target_rate", a.target_rate ? nlohmann::json(*a.target_rate)
                                    : nlohmann::json(nullptr)},
  };
  out << line.dump() << '\n';
  if (!a.report.empty()) open_out(a.report, std::ios::app) << line.dump() << '\n';
  return kExitOk;
}

Bitstream read_stream(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kIo, "cannot open " + path);
  return Bitstream(std::istreambuf_iterator<char>(f), {});
}

int cmd_decode(const DecodeArgs& a, std::ostream& out, std::ostream& err) {
  const Signal mix = read_wav(a.mix);
  const Bitstream stream = read_stream(a.in);
  ReconParams params;
  params.mode = parse_mode(a.mode);
  params.divisor = a.divisor;
  params.rho = a.rho;
  params.iterations = a.iterations;
  params.workers = workers_from_env();
  const auto estimates = decode(mix, stream, params);
  if (!a.names.empty() && a.names.size() != estimates.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "--names count does not match the stream's source count");
  }
  fs::create_directories(a.outdir);
  for (std::size_t j = 0; j < estimates.size(); ++j) {
    char fallback[32];
    std::snprintf(fallback, sizeof fallback, "source_%02zu", j);
    const std::string name = a.names.empty() ? fallback : a.names[j];
    const auto path = (fs::path(a.outdir) / (name + ".wav")).string();
    const auto clipped = write_wav(
        path, estimates[j], a.float_out ? WavFormat::kFloat32 : WavFormat::kPcm16);
    if (clipped > 0) {
      err << "warning: " << clipped << " samples clipped in " << path << '\n';
    }
    out << path << '\n';
  }
  return kExitOk;
}

int cmd_synth(const SynthArgs& a, std::ostream& out, std::ostream& err) {
  Fixture fx = make_fixture(fixture_kind_from_string(a.fixture), a.seed, a.seconds);
  // One gain for mix and stems keeps the mix the exact sum of the stems.
  double peak = 0.0;
  for (double v : fx.mix.samples) peak = std::max(peak, std::abs(v));
  for (const auto& s : fx.stems) {
    for (double v : s.samples) peak = std::max(peak, std::abs(v));
  }
  if (peak > 0.99) {
    const double g = 0.99 / peak;
    for (auto& v : fx.mix.samples) v *= g;
    for (auto& s : fx.stems) {
      for (auto& v : s.samples) v *= g;
    }
  }
  const auto format = a.float_out ? WavFormat::kFloat32 : WavFormat::kPcm16;
  const fs::path root(a.outdir);
  fs::create_directories(root / "stems");
  std::size_t clipped = write_wav((root / "mix.wav").string(), fx.mix, format);
  for (std::size_t j = 0; j < fx.stems.size(); ++j) {
    char name[64];
    std::snprintf(name, sizeof name, "%02zu_%s.wav", j, fx.stem_names[j].c_str());
    clipped += write_wav((root / "stems" / name).string(), fx.stems[j], format);
  }
  if (clipped > 0) err << "warning: " << clipped << " samples clipped\n";
  out << (root / "mix.wav").string() << '\n';
  return kExitOk;
}

}  // namespace

int workers_from_env() {
  const char* v = std::getenv("ISSIR_WORKERS");
  if (v == nullptr) return 1;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (end == v || *end != '\0' || n < 1) return 1;
  return static_cast<int>(std::min(n, 256L));
}

ReconMode parse_mode(const std::string& name) {
  if (name == "M1" || name == "m1") return ReconMode::kFixedDivisor;
  if (name == "M2" || name == "m2") return ReconMode::kActiveCount;
  if (name == "M3" || name == "m3") return ReconMode::kActiveCountNoMask;
  throw Error(ErrorCode::kInvalidArgument, "mode must be M1, M2 or M3");
}

std::string to_string(ReconMode mode) {
  switch (mode) {
    case ReconMode::kFixedDivisor: return "M1";
    case ReconMode::kActiveCount: return "M2";
    case ReconMode::kActiveCountNoMask: return "M3";
  }
  return "?";
}

std::vector<std::string> list_wavs(const std::string& dir) {
  if (!fs::is_directory(dir)) {
    throw Error(ErrorCode::kIo, "not a directory: " + dir);
  }
  std::vector<std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".wav") {
      files.push_back(e.path().string());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Informed source separation with iterative reconstruction"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "issir 0.1.0");

  EncodeArgs enc;
  auto* encode_cmd = app.add_subcommand("encode", "Code side information");
  encode_cmd->add_option("--mix", enc.mix, "Mixture WAV")->required();
  encode_cmd->add_option("--stems", enc.stems, "Source WAVs, in order")
      ->required();
  encode_cmd->add_option("--out", enc.out, "Output .issr file")->required();
  encode_cmd->add_option("--target-rate", enc.target_rate, "kb/source/s");
  encode_cmd->add_flag("--dual", enc.dual, "Dual-resolution STFT at transients");
  encode_cmd->add_option("--u", enc.step_db, "Quantization step in dB");
  encode_cmd->add_option("--T", enc.threshold_db, "Threshold in dB (<= -20)");
  encode_cmd->add_option("--rho", enc.rho, "Activity threshold");
  encode_cmd->add_option("--bands", enc.bands, "Large-window band count")
      ->check(CLI::IsMember({75, 125, 250}));
  encode_cmd->add_option("--overlap", enc.overlap, "Overlap in percent")
      ->check(CLI::IsMember({50, 75}));
  encode_cmd->add_option("--backend", enc.backend, "Entropy stage")
      ->check(CLI::IsMember({"deflate", "store"}));
  encode_cmd->add_option("--report", enc.report, "Append the JSON line here");

  DecodeArgs dec;
  auto* decode_cmd = app.add_subcommand("decode", "Separate a mixture");
  decode_cmd->add_option("--mix", dec.mix, "Mixture WAV")->required();
  decode_cmd->add_option("--in", dec.in, "Input .issr file")->required();
  decode_cmd->add_option("--outdir", dec.outdir, "Output directory")
      ->required();
  decode_cmd->add_option("--iters", dec.iterations, "Iterations")
      ->check(CLI::NonNegativeNumber);
  decode_cmd->add_option("--D", dec.divisor, "Error divisor for M1");
  decode_cmd->add_option("--rho", dec.rho, "Activity threshold");
  decode_cmd->add_option("--mode", dec.mode, "M1, M2 or M3");
  decode_cmd->add_option("--names", dec.names, "Output stem names");
  decode_cmd->add_flag("--float", dec.float_out, "Write 32-bit float WAVs");

  EvalOptions ev;
  std::string eval_csv;
  auto* eval_cmd = app.add_subcommand("eval", "Score estimates against references");
  eval_cmd->add_option("--ref-dir", ev.ref_dir, "Reference stems")->required();
  eval_cmd->add_option("--est-dir", ev.est_dir,
                       "Estimates: WAVs, or one subdirectory per method");
  eval_cmd->add_option("--mix", ev.mix_path, "Mixture (default: sum of refs)");
  eval_cmd->add_option("--method", ev.method, "Name for a flat --est-dir");
  eval_cmd->add_option("--run", ev.run, "Methods computed in-process")
      ->delimiter(',')
      ->check(CLI::IsMember({"misi", "issir_single", "issir_dual"}));
  eval_cmd->add_option("--target-rate", ev.target_rate,
                       "Rate for issir_single/issir_dual");
  eval_cmd->add_option("--iters", ev.iterations, "Iterations")
      ->check(CLI::NonNegativeNumber);
  eval_cmd->add_option("--filter-length", ev.filter_length,
                       "Distortion filter taps")
      ->check(CLI::PositiveNumber);
  eval_cmd->add_option("--csv", eval_csv, "Output CSV (default stdout)");

  std::string sweep_config, sweep_csv;
  auto* sweep_cmd = app.add_subcommand("sweep", "Evaluate a parameter grid");
  sweep_cmd->add_option("--config", sweep_config, "key = value file")
      ->required()
      ->check(CLI::ExistingFile);
  sweep_cmd->add_option("--csv", sweep_csv, "Output CSV (default stdout)");

  SynthArgs syn;
  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic fixture");
  synth_cmd->add_option("--fixture", syn.fixture, "two_source, five_source, transient_rich");
  synth_cmd->add_option("--seed", syn.seed, "Seed");
  synth_cmd->add_option("--seconds", syn.seconds, "Duration")
      ->check(CLI::PositiveNumber);
  synth_cmd->add_option("--outdir", syn.outdir, "Output directory")->required();
  synth_cmd->add_flag("--float", syn.float_out, "Write 32-bit float WAVs");

  std::vector<std::string> argv_store(args);
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*encode_cmd) return cmd_encode(enc, out, err);
    if (*decode_cmd) return cmd_decode(dec, out, err);
    if (*synth_cmd) return cmd_synth(syn, out, err);
    if (*eval_cmd) {
      if (eval_csv.empty()) {
        run_eval(ev, out, workers_from_env());
      } else {
        auto f = open_out(eval_csv);
        run_eval(ev, f, workers_from_env());
      }
      return kExitOk;
    }
    if (*sweep_cmd) {
      SweepConfig cfg;
      {
        std::ifstream in(sweep_config);
        try {
          cfg = parse_sweep_config(in);
        } catch (const Error& e) {
          err << "error: " << sweep_config << ": " << e.what() << '\n';
          return kExitUsage;
        }
      }
      if (sweep_csv.empty()) {
        run_sweep(cfg, out, workers_from_env());
      } else {
        auto f = open_out(sweep_csv);
        run_sweep(cfg, f, workers_from_env());
      }
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace issir::cli
