// Copyright 2026 The ISSIR Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "issir/codec.hpp"
#include "issir/fixtures.hpp"
#include "issir/reconstruction.hpp"

namespace issir::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;

/// Runs one command line (args[0] is the program name). Never throws.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

/// Worker count from ISSIR_WORKERS, at least 1.
int workers_from_env();

ReconMode parse_mode(const std::string& name);
std::string to_string(ReconMode mode);

/// A comma-separated grid per parameter, read from `key = v1, v2` lines.
/// Blank lines and `#` comments are ignored.
struct SweepConfig {
  std::string fixture = "two_source";
  std::uint64_t seed = 1;
  double seconds = 5.0;
  std::string mix_path;    // real material instead of a fixture
  std::string stems_dir;
  std::vector<std::string> methods = {"issir"};  // issir | misi | wiener
  std::vector<double> step_db = {1.0};           // u, 0 means unquantized
  std::vector<double> divisor = {40.0};
  std::vector<double> rho = {0.01};
  std::vector<int> overlap = {50};
  std::vector<int> bands = {250};
  std::vector<double> threshold_db = {-60.0};
  std::vector<double> target_rate;               // codec path when non-empty
  std::vector<bool> dual = {false};
  std::vector<ReconMode> modes = {ReconMode::kFixedDivisor};
  std::vector<int> iterations = {50};
  int filter_length = 512;
};

/// Throws Error(kInvalidArgument) on unknown keys or malformed values.
SweepConfig parse_sweep_config(std::istream& in);

struct SweepPoint {
  std::string method;
  double step_db = 1.0;
  double divisor = 40.0;
  double rho = 0.01;
  int overlap = 50;
  int bands = 250;
  double threshold_db = -60.0;
  std::optional<double> target_rate;
  bool dual = false;
  ReconMode mode = ReconMode::kFixedDivisor;
  int iterations = 50;
};

/// Cartesian product in a fixed order (methods outermost).
std::vector<SweepPoint> expand(const SweepConfig& cfg);

/// Runs the sweep and writes the CSV; returns the number of metric rows.
std::size_t run_sweep(const SweepConfig& cfg, std::ostream& csv, int workers);

struct EvalOptions {
  std::string ref_dir;
  std::string est_dir;
  std::string mix_path;
  std::string method = "issir_single";  // name for a flat estimate directory
  std::vector<std::string> run;          // methods computed in-process
  double target_rate = 32.0;
  int iterations = 50;
  int filter_length = 512;
};

/// Writes rows per (method, source); returns the number of rows.
std::size_t run_eval(const EvalOptions& opt, std::ostream& csv, int workers);

/// Sorted list of `*.wav` files in a directory.
std::vector<std::string> list_wavs(const std::string& dir);

}  // namespace issir::cli
