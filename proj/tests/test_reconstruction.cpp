// Copyright 2026 The ISSIR Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <cmath>

#include "doctest.h"
#include "issir/codec.hpp"
#include "issir/error.hpp"
#include "issir/fixtures.hpp"
#include "issir/metrics.hpp"
#include "issir/reconstruction.hpp"
#include "issir/stft.hpp"
#include "oracles/oracles.hpp"
#include "support.hpp"

using namespace issir;

namespace {

DualGridSpec tiny_grid() {
  return DualGridSpec::uniform(GridSpec::make(4, 2, 1.0, 1));
}

RealSpectrogram constant(const DualGridSpec& g, double v) {
  auto r = RealSpectrogram::zeros(g);
  r.large.setConstant(v);
  return r;
}

// Tone with 10 ms fades, silent outside [from, to) seconds.
Signal tone(double hz, double seconds, double from, double to) {
  Signal s = sinusoid(hz, seconds, 44100.0, 0.4);
  const double fade = 0.01;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double t = i / 44100.0;
    double g = 0.0;
    if (t >= from && t < to) {
      g = std::min({1.0, (t - from) / fade, (to - t) / fade});
    }
    s.samples[i] *= g;
  }
  return s;
}

std::vector<RealSpectrogram> mags_of(std::span<const Signal> s, const DualGridSpec& g) {
  std::vector<RealSpectrogram> out;
  for (const auto& x : s) out.push_back(magnitude(stft(x, g)));
  return out;
}

std::vector<RealSpectrogram> powers_of(std::span<const Signal> s, const DualGridSpec& g) {
  std::vector<RealSpectrogram> out;
  for (const auto& x : s) out.push_back(power(stft(x, g)));
  return out;
}

}  // namespace

TEST_SUITE("reconstruction") {

TEST_CASE("Wiener mask examples") {
  const auto g = tiny_grid();
  const std::vector<RealSpectrogram> p = {constant(g, 1.0), constant(g, 3.0)};
  const auto m = wiener_masks(p);
  CHECK(m.alpha[0].large(0, 0) == 0.25);
  CHECK(m.alpha[1].large(0, 0) == 0.75);

  const std::vector<RealSpectrogram> one = {constant(g, 2.0), constant(g, 0.0)};
  CHECK(wiener_masks(one).alpha[0].large(1, 1) == 1.0);
  CHECK(wiener_masks(one).alpha[1].large(1, 1) == 0.0);

  const std::vector<RealSpectrogram> five(5, constant(g, 0.0));
  for (const auto& a : wiener_masks(five).alpha) CHECK(a.large(0, 2) == 0.2);

  CHECK_THROWS_AS(wiener_masks(std::span(p.data(), 1)), Error);
  const std::vector<RealSpectrogram> bad = {
      constant(g, 1.0), RealSpectrogram::zeros(DualGridSpec::uniform(GridSpec::make(8, 2, 1.0, 1)))};
  CHECK_THROWS_AS(wiener_masks(bad), Error);
}

TEST_CASE("Wiener masks partition unity on random energies") {
  const Fixture fx = make_fixture(FixtureKind::kFiveSource, 3, 1.0);
  const auto g = DualGridSpec::uniform(test::grid_for(fx.mix.size()));
  const auto m = wiener_masks(powers_of(fx.stems, g));
  TfMatrix<double> sum = TfMatrix<double>::Zero(m.alpha[0].large.rows(), m.alpha[0].large.cols());
  for (const auto& a : m.alpha) {
    CHECK(a.large.minCoeff() >= 0.0);
    CHECK(a.large.maxCoeff() <= 1.0);
    sum += a.large;
  }
  CHECK((sum - 1.0).abs().maxCoeff() < 1e-12);
}

TEST_CASE("Wiener separation satisfies the remix constraint") {
  const Fixture fx = make_fixture(FixtureKind::kFiveSource, 5, 1.0);
  const auto g = DualGridSpec::uniform(test::grid_for(fx.mix.size()));
  const auto M = stft(fx.mix, g);
  const auto est = wiener_separate(M, wiener_masks(powers_of(fx.stems, g)));
  const Signal back = istft(M);
  double worst = 0.0;
  for (std::size_t t = 0; t < back.size(); ++t) {
    double s = 0.0;
    for (const auto& e : est) s += e.samples[t];
    worst = std::max(worst, std::abs(s - back.samples[t]));
  }
  CHECK(worst < 1e-12);

  // All mask weight on one source.
  WienerMaskSet all_first;
  all_first.alpha = {constant(g, 1.0), constant(g, 0.0)};
  all_first.alpha[0].large.setOnes();
  all_first.alpha[1].large.setZero();
  const auto split = wiener_separate(M, all_first);
  CHECK(oracle::rel_error(back.samples, split[0].samples) < 1e-15);
  CHECK(std::all_of(split[1].samples.begin(), split[1].samples.end(),
                    [](double v) { return v == 0.0; }));
}

TEST_CASE("Wiener separates tones in disjoint bands") {
  const std::vector<Signal> s = {tone(440.0, 1.0, 0.0, 1.0), tone(8000.0, 1.0, 0.0, 1.0)};
  const Signal mix = mix_down(s);
  const auto g = DualGridSpec::uniform(test::grid_for(mix.size()));
  const auto est = wiener_separate(stft(mix, g), wiener_masks(powers_of(s, g)));
  for (int j = 0; j < 2; ++j) CHECK(oracle::snr_db(s[j].samples, est[j].samples) > 40.0);
}

TEST_CASE("remix error examples") {
  const Signal x = oracle::noise(1, 6000);
  const auto M = stft(x, test::grid_for(x.size()));
  const std::vector<ComplexSpectrogram> halves = {M * 0.5, M * 0.5};
  CHECK(norm(remix_error(M, halves)) == 0.0);
  const std::vector<ComplexSpectrogram> zero = {ComplexSpectrogram::zeros(M.grid)};
  CHECK(test::rel_diff(remix_error(M, zero), M) == 0.0);
  const std::vector<ComplexSpectrogram> parts = {M * 0.5, M * 0.25};
  CHECK(test::rel_diff(remix_error(M, parts), M * 0.25) < 1e-15);
}

TEST_CASE("activity masks") {
  const auto g = tiny_grid();
  WienerMaskSet w;
  w.alpha = {constant(g, 0.02), constant(g, 0.005), constant(g, 0.975)};
  const auto a = activity_masks(w, 0.01);
  CHECK(a.psi[0].large(0, 0) == 1.0);
  CHECK(a.psi[1].large(0, 0) == 0.0);
  CHECK_THROWS_AS(activity_masks(w, 0.0), Error);
  CHECK_THROWS_AS(activity_masks(w, 1.0), Error);

  const Fixture fx = make_fixture(FixtureKind::kFiveSource, 6, 1.0);
  const auto dg = DualGridSpec::uniform(test::grid_for(fx.mix.size()));
  const auto powers = powers_of(fx.stems, dg);
  const auto masks = wiener_masks(powers);
  const auto loose = activity_masks(masks, 0.01);
  const auto tight = activity_masks(masks, 0.1);
  TfMatrix<double> any = TfMatrix<double>::Zero(loose.psi[0].large.rows(), loose.psi[0].large.cols());
  for (std::size_t j = 0; j < loose.psi.size(); ++j) {
    CHECK((tight.psi[j].large <= loose.psi[j].large).all());
    any = any.max(loose.psi[j].large);
  }
  // rho < 1/J: every bin carrying energy has an active source.
  TfMatrix<double> total = TfMatrix<double>::Zero(any.rows(), any.cols());
  for (const auto& p : powers) total += p.large;
  CHECK(((total > 0.0).cast<double>() <= any).all());
}

TEST_CASE("MISI keeps magnitudes and recovers disjoint sources") {
  const std::vector<Signal> s = {tone(330.0, 1.5, 0.0, 0.6), tone(660.0, 1.5, 0.85, 1.5)};
  const Signal mix = mix_down(s);
  const auto g = DualGridSpec::uniform(test::grid_for(mix.size()));
  const auto mags = mags_of(s, g);
  const auto out = misi(stft(mix, g), mags, 50);
  for (int j = 0; j < 2; ++j) {
    CHECK((magnitude(out[j]).large - mags[j].large).abs().maxCoeff() <=
          1e-12 * mags[j].large.maxCoeff());
    CHECK(oracle::snr_db(s[j].samples, istft(out[j]).samples) > 30.0);
  }
}

TEST_CASE("MISI with one source returns the mixture") {
  const Signal x = oracle::noise(4, 8000);
  const auto M = stft(x, test::grid_for(x.size()));
  const std::vector<RealSpectrogram> mag = {magnitude(M)};
  const auto out = misi(M, mag, 3);
  CHECK(test::rel_diff(out[0], M) < 1e-10);
}

TEST_CASE("ISSIR reduces to MISI") {
  const Fixture fx = make_fixture(FixtureKind::kTwoSource, 8, 0.5);
  const auto g = DualGridSpec::uniform(test::grid_for(fx.mix.size()));
  const auto M = stft(fx.mix, g);
  const auto mags = mags_of(fx.stems, g);
  ActivityMask ones;
  for (const auto& m : mags) ones.psi.push_back(constant(g, 1.0));
  for (auto& p : ones.psi) p.large.setOnes();
  ReconParams p;
  p.divisor = 2.0;
  p.iterations = 5;
  const auto a = issir_iterate(M, issir_initialize(M, mags, ones), ones, p, mags);
  const auto b = misi(M, mags, 5);
  for (int j = 0; j < 2; ++j) CHECK((a[j].large == b[j].large).all());
}

TEST_CASE("ISSIR leaves a consistent exact decomposition alone") {
  const Fixture fx = make_fixture(FixtureKind::kTwoSource, 9, 0.5);
  const auto g = DualGridSpec::uniform(test::grid_for(fx.mix.size()));
  std::vector<ComplexSpectrogram> exact;
  for (const auto& s : fx.stems) exact.push_back(stft(s, g));
  const auto M = stft(fx.mix, g);
  ActivityMask ones;
  for (std::size_t j = 0; j < exact.size(); ++j) ones.psi.push_back(constant(g, 1.0));
  for (auto& p : ones.psi) p.large.setOnes();
  ReconParams p;
  p.iterations = 4;
  const auto out = issir_iterate(M, exact, ones, p);
  for (std::size_t j = 0; j < exact.size(); ++j) {
    CHECK(test::rel_diff(out[j], exact[j]) < 1e-10);
  }
}

TEST_CASE("ISSIR respects activity and skips bins without active sources") {
  const Fixture fx = make_fixture(FixtureKind::kTwoSource, 10, 0.5);
  const auto g = DualGridSpec::uniform(test::grid_for(fx.mix.size()));
  const auto M = stft(fx.mix, g);
  const auto mags = mags_of(fx.stems, g);
  auto act = activity_masks(wiener_masks(powers_of(fx.stems, g)), 0.01);
  // Switch both sources off in one band.
  for (auto& p : act.psi) p.large.middleCols(100, 20).setZero();
  for (auto mode : {ReconMode::kFixedDivisor, ReconMode::kActiveCount}) {
    ReconParams p;
    p.mode = mode;
    p.iterations = 3;
    const auto out = issir_iterate(M, issir_initialize(M, mags, act), act, p);
    for (std::size_t j = 0; j < out.size(); ++j) {
      CHECK((out[j].large.abs() * (1.0 - act.psi[j].large) == 0.0).all());
      CHECK(all_finite(out[j]));
    }
  }
}

TEST_CASE("parameter validation") {
  ReconParams p;
  CHECK_NOTHROW(p.validate());
  p.divisor = 0.5;
  CHECK_THROWS_AS(p.validate(), Error);
  p = {};
  p.rho = 1.0;
  CHECK_THROWS_AS(p.validate(), Error);
  p = {};
  p.iterations = -1;
  CHECK_THROWS_AS(p.validate(), Error);
}

TEST_CASE("single-source decode returns the mixture") {
  const Signal x = make_fixture(FixtureKind::kTwoSource, 11, 1.0).mix;
  CodecConfig cfg;
  cfg.threshold_db = -100.0;
  const std::vector<Signal> stems = {x};
  const auto r = encode(x, stems, cfg);
  ReconParams p;
  p.mode = ReconMode::kActiveCount;
  p.iterations = 10;
  const auto out = decode(x, r.stream, p);
  REQUIRE(out.size() == 1);
  CHECK(oracle::snr_db(x.samples, out[0].samples) > 40.0);
}

TEST_CASE("disjoint sources decode cleanly at u = 1 dB") {
  const std::vector<Signal> s = {tone(330.0, 1.5, 0.0, 0.6), tone(660.0, 1.5, 0.85, 1.5)};
  const Signal mix = mix_down(s);
  CodecConfig cfg;
  const auto r = encode(mix, s, cfg);
  const auto out = decode(mix, r.stream, ReconParams{});
  const BssEvaluator ev(s);
  for (const auto& sc : ev.evaluate(out).sources) CHECK(sc.sdr > 15.0);
}

}  // TEST_SUITE
