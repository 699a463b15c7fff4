// Copyright 2026 The ISSIR Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "doctest.h"
#include "issir_cli/cli.hpp"

namespace fs = std::filesystem;
using issir::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  args.insert(args.begin(), "issir");
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path fresh(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "issir_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::vector<std::string> stem_files(const fs::path& dir) {
  std::vector<std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) out.push_back(e.path().string());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::map<std::string, std::string>> read_csv(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  std::vector<std::string> head;
  {
    std::istringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) head.push_back(c);
  }
  std::vector<std::map<std::string, std::string>> rows;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::map<std::string, std::string> row;
    std::size_t i = 0;
    for (std::string c; std::getline(ls, c, ',');) row[head.at(i++)] = c;
    if (i < head.size()) row[head.back()] = "";
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<char> bytes_of(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("usage errors and data errors have distinct exit codes") {
  CHECK(call({}).code == issir::cli::kExitUsage);
  CHECK(call({"frobnicate"}).code == issir::cli::kExitUsage);
  CHECK(call({"encode", "--mix"}).code == issir::cli::kExitUsage);
  CHECK(call({"encode", "--mix", "a.wav", "--stems", "b.wav", "--out", "x", "--bands", "99"}).code ==
        issir::cli::kExitUsage);
  const fs::path dir = fresh("errors");
  const auto r = call({"decode", "--mix", (dir / "missing.wav").string(), "--in",
                       (dir / "missing.issr").string(), "--outdir", dir.string()});
  CHECK(r.code == issir::cli::kExitData);
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("synth, encode, decode and eval end to end") {
  const fs::path dir = fresh("pipeline");
  REQUIRE(call({"synth", "--fixture", "two_source", "--seed", "1", "--seconds", "3",
                "--outdir", dir.string()}).code == 0);
  REQUIRE(fs::exists(dir / "mix.wav"));
  const auto stems = stem_files(dir / "stems");
  REQUIRE(stems.size() == 2);

  std::vector<std::string> enc = {"encode", "--mix", (dir / "mix.wav").string(),
                                  "--out", (dir / "side.issr").string(),
                                  "--target-rate", "32", "--stems"};
  enc.insert(enc.end(), stems.begin(), stems.end());
  const auto e = call(enc);
  REQUIRE(e.code == 0);
  CHECK(e.out.find("\"command\":\"encode\"") != std::string::npos);
  CHECK(fs::file_size(dir / "side.issr") > 0);

  // Same inputs, same bytes.
  enc[4] = (dir / "again.issr").string();
  REQUIRE(call(enc).code == 0);
  CHECK(bytes_of(dir / "side.issr") == bytes_of(dir / "again.issr"));

  REQUIRE(call({"decode", "--mix", (dir / "mix.wav").string(), "--in",
                (dir / "side.issr").string(), "--outdir", (dir / "est").string(),
                "--iters", "50"}).code == 0);
  CHECK(stem_files(dir / "est").size() == 2);

  REQUIRE(call({"eval", "--ref-dir", (dir / "stems").string(), "--est-dir",
                (dir / "est").string(), "--method", "issir", "--csv",
                (dir / "scores.csv").string()}).code == 0);
  const auto rows = read_csv(dir / "scores.csv");
  int seen = 0;
  for (const auto& r : rows) {
    if (r.at("method") != "issir") continue;
    CHECK(std::stod(r.at("sdr")) > 10.0);
    ++seen;
  }
  CHECK(seen == 2);
}

TEST_CASE("eval of the references themselves is capped") {
  const fs::path dir = fresh("self");
  REQUIRE(call({"synth", "--fixture", "two_source", "--seed", "2", "--seconds", "2",
                "--outdir", dir.string(), "--float"}).code == 0);
  REQUIRE(call({"eval", "--ref-dir", (dir / "stems").string(), "--est-dir",
                (dir / "stems").string(), "--method", "copy", "--csv",
                (dir / "self.csv").string()}).code == 0);
  int seen = 0;
  for (const auto& r : read_csv(dir / "self.csv")) {
    if (r.at("method") != "copy") continue;
    CHECK(std::stod(r.at("sdr")) == 100.0);
    CHECK(std::stod(r.at("delta_sdr")) > 0.0);
    ++seen;
  }
  CHECK(seen == 2);
}

TEST_CASE("sweep writes one row per point, source and metric") {
  const fs::path dir = fresh("sweep");
  std::ofstream(dir / "grid.cfg") << "# small grid\n"
                                     "fixture = two_source\n"
                                     "seconds = 2\n"
                                     "u = 0, 2, 4\n"
                                     "iterations = 5\n"
                                     "filter_length = 64\n";
  REQUIRE(call({"sweep", "--config", (dir / "grid.cfg").string(), "--csv",
                (dir / "sweep.csv").string()}).code == 0);
  const auto rows = read_csv(dir / "sweep.csv");
  CHECK(rows.size() == 18);
  std::map<std::string, int> per_u;
  for (const auto& r : rows) ++per_u[r.at("u")];
  CHECK(per_u.size() == 3);

  std::ofstream(dir / "bad.cfg") << "colour = blue\n";
  CHECK(call({"sweep", "--config", (dir / "bad.cfg").string()}).code ==
        issir::cli::kExitUsage);
}

TEST_CASE("mode names and worker count") {
  CHECK(issir::cli::parse_mode("M3") == issir::ReconMode::kActiveCountNoMask);
  CHECK(issir::cli::to_string(issir::ReconMode::kActiveCount) == "M2");
  CHECK_THROWS(issir::cli::parse_mode("M4"));
  CHECK(issir::cli::workers_from_env() >= 1);
}

}  // TEST_SUITE
