// Copyright 2026 The ISSIR Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <cmath>

#include "doctest.h"
#include "issir/error.hpp"
#include "issir/metrics.hpp"
#include "oracles/oracles.hpp"

using namespace issir;

namespace {

// Unit-energy blocks on disjoint sample ranges: mutually orthogonal.
Signal block(std::size_t n, std::size_t from, std::size_t to, std::uint64_t seed) {
  Signal s = oracle::noise(seed, n);
  double e = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i < from || i >= to) s.samples[i] = 0.0;
    e += s.samples[i] * s.samples[i];
  }
  for (auto& v : s.samples) v /= std::sqrt(e);
  return s;
}

Signal combo(std::initializer_list<std::pair<double, const Signal*>> terms) {
  Signal out = *terms.begin()->second;
  std::fill(out.samples.begin(), out.samples.end(), 0.0);
  for (const auto& [w, s] : terms) {
    for (std::size_t i = 0; i < out.size(); ++i) out.samples[i] += w * s->samples[i];
  }
  return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double db(double x) { return 10.0 * std::log10(x); }

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("closed-form scores with a single tap") {
  const std::size_t n = 3000;
  const Signal s1 = block(n, 0, 1000, 1);
  const Signal s2 = block(n, 1000, 2000, 2);
  const Signal art = block(n, 2000, 3000, 3);
  const std::vector<Signal> refs = {s1, s2};
  const double a = 1.5, b = 0.4, c = 0.2;
  const Signal est = combo({{a, &s1}, {b, &s2}, {c, &art}});
  const auto sc = scores(decompose(est, refs, 0, 1));
  CHECK(std::abs(sc.sdr - db(a * a / (b * b + c * c))) < 1e-9);
  CHECK(std::abs(sc.sir - db(a * a / (b * b))) < 1e-9);
  CHECK(std::abs(sc.sar - db((a * a + b * b) / (c * c))) < 1e-9);

  // Perfect estimate of the second source, capped.
  const auto perfect = scores(decompose(s2, refs, 1, 1));
  CHECK(perfect.sdr == kScoreCapDb);
  CHECK(perfect.sir == kScoreCapDb);
  CHECK(perfect.sar == kScoreCapDb);
}

TEST_CASE("filtered decomposition matches a dense solve") {
  const double sr = 4000.0;
  const std::size_t n = 2000;
  const int L = 512;
  std::vector<Signal> refs = {oracle::noise(10, n, sr), oracle::noise(11, n, sr)};
  Signal est = oracle::noise(12, n, sr);
  for (std::size_t i = 0; i < n; ++i) {
    est.samples[i] = 0.8 * refs[0].samples[i] + 0.1 * est.samples[i] +
                     (i >= 3 ? 0.3 * refs[0].samples[i - 3] + 0.2 * refs[1].samples[i - 3] : 0.0);
  }
  for (int j = 0; j < 2; ++j) {
    const auto fast = decompose(est, refs, j, L);
    const auto dense = oracle::dense_decompose(est, refs, j, L);
    REQUIRE(fast.target.size() == static_cast<std::size_t>(dense.target.size()));
    auto close = [](const std::vector<double>& x, const Eigen::VectorXd& y) {
      return oracle::rel_error(std::span<const double>(y.data(), y.size()), x) < 1e-6;
    };
    CHECK(close(fast.target, dense.target));
    CHECK(close(fast.interference, dense.interference));
    CHECK(close(fast.artifacts, dense.artifacts));
    CHECK_FALSE(fast.regularized);
  }
}

TEST_CASE("decomposition identity and orthogonality") {
  const std::size_t n = 6000;
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    std::vector<Signal> refs;
    for (int j = 0; j < 3; ++j) refs.push_back(oracle::noise(seed * 10 + j, n));
    Signal est = oracle::noise(seed * 10 + 9, n);
    for (std::size_t i = 5; i < n; ++i) est.samples[i] += refs[1].samples[i - 5];
    const BssEvaluator ev(refs, 64);
    for (int j = 0; j < 3; ++j) {
      const auto d = ev.decompose(est, j);
      const std::size_t m = d.target.size();
      REQUIRE(m == n + 63);
      double worst = 0.0;
      double scale = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        const double e = i < n ? est.samples[i] : 0.0;
        worst = std::max(worst, std::abs(d.target[i] + d.interference[i] + d.artifacts[i] - e));
        scale = std::max(scale, std::abs(e));
      }
      CHECK(worst < 1e-10 * scale);
      std::vector<double> proj(m);
      for (std::size_t i = 0; i < m; ++i) proj[i] = d.target[i] + d.interference[i];
      const double en = dot(est.samples, est.samples);
      CHECK(std::abs(dot(d.target, d.interference)) < 1e-8 * en);
      CHECK(std::abs(dot(proj, d.artifacts)) < 1e-8 * en);
    }
  }
}

TEST_CASE("scores ignore the estimate's scale") {
  const std::size_t n = 5000;
  const std::vector<Signal> refs = {oracle::noise(1, n), oracle::noise(2, n)};
  Signal est = combo({{1.0, &refs[0]}, {0.3, &refs[1]}});
  const Signal extra = oracle::noise(3, n);
  for (std::size_t i = 0; i < n; ++i) est.samples[i] += 0.1 * extra.samples[i];
  Signal big = est;
  for (auto& v : big.samples) v *= 7.0;
  const BssEvaluator ev(refs, 32);
  const auto a = scores(ev.decompose(est, 0));
  const auto b = scores(ev.decompose(big, 0));
  CHECK(a.sdr == doctest::Approx(b.sdr).epsilon(1e-9));
  CHECK(a.sir == doctest::Approx(b.sir).epsilon(1e-9));
  CHECK(a.sar == doctest::Approx(b.sar).epsilon(1e-9));
}

TEST_CASE("silent inputs are undefined") {
  const std::size_t n = 2000;
  const Signal quiet(std::vector<double>(n, 0.0), 44100.0);
  const std::vector<Signal> refs = {oracle::noise(1, n), quiet};
  const BssEvaluator ev(refs, 16);
  CHECK_THROWS_AS(ev.decompose(refs[0], 1), Error);
  const std::vector<Signal> est = {quiet, refs[0]};
  const auto sc = ev.evaluate(est);
  CHECK_FALSE(sc.sources[0].defined);
  CHECK_FALSE(sc.sources[1].defined);
  CHECK(sc.sdr().count == 0);

  const std::vector<Signal> wrong = {refs[0]};
  CHECK_THROWS_AS(ev.evaluate(wrong), Error);
  CHECK_THROWS_AS(BssEvaluator(refs, 0), Error);
}

TEST_CASE("relative scores and summaries") {
  SeparationScores s;
  s.sources = {{10.0, 20.0, 11.0, true}, {6.0, 8.0, 9.0, true}, {0.0, 0.0, 0.0, false}};
  SeparationScores base;
  base.sources = {{7.0, 15.0, 10.0, true}, {7.0, 9.0, 8.0, true}, {1.0, 1.0, 1.0, true}};
  const auto r = relative_scores(s, base, "wiener");
  CHECK(r.baseline == "wiener");
  CHECK(r.sources[0].sdr == 3.0);
  CHECK(r.sources[1].sir == -1.0);
  CHECK_FALSE(r.sources[2].defined);
  CHECK(s.sdr().mean == 8.0);
  CHECK(s.sdr().count == 2);
  CHECK(s.sdr().stddev == doctest::Approx(2.0));
  base.sources.pop_back();
  CHECK_THROWS_AS(relative_scores(s, base), Error);
}

}  // TEST_SUITE
