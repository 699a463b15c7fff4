// Copyright 2026 The ISSIR Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "issir/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "issir/error.hpp"

namespace issir {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kBarDensity = 0.6;

struct Note {
  double start = 0.0;     // s
  double length = 0.5;    // s
  double f0 = 220.0;
  double amplitude = 0.2;
  int harmonics = 6;
  double rolloff = 1.0;   // harmonic h has amplitude h^-rolloff
  double decay = 0.5;     // s, exponential
  double vibrato_hz = 0.0;
  double vibrato_depth = 0.0;  // fraction of f0
};

void add_note(std::vector<double>& buf, double sr, const Note& n,
              FixtureRng& rng) {
  const auto first = static_cast<std::size_t>(n.start * sr);
  const auto count = static_cast<std::size_t>(n.length * sr);
  const double attack = 0.005, release = 0.03;
  std::vector<double> phases(static_cast<std::size_t>(n.harmonics));
  for (auto& p : phases) p = rng.uniform(0.0, kTwoPi);
  double base_phase = 0.0;
  for (std::size_t i = 0; i < count && first + i < buf.size(); ++i) {
    const double t = static_cast<double>(i) / sr;
    double env = std::exp(-t / n.decay);
    if (t < attack) env *= t / attack;
    if (t > n.length - release) env *= std::max(0.0, (n.length - t) / release);
    const double f =
        n.f0 * (1.0 + n.vibrato_depth * std::sin(kTwoPi * n.vibrato_hz * t));
    base_phase += kTwoPi * f / sr;
    double v = 0.0;
    for (int h = 1; h <= n.harmonics; ++h) {
      if (h * f >= sr / 2.0) break;
      v += std::pow(h, -n.rolloff) *
           std::sin(h * base_phase + phases[static_cast<std::size_t>(h - 1)]);
    }
    buf[first + i] += n.amplitude * env * v;
  }
}

// Decaying noise burst through a one-pole band limiter, plus an optional
// pitched thump.
void add_hit(std::vector<double>& buf, double sr, double start, double amplitude,
             double decay, double lo_hz, double hi_hz, double thump_hz,
             FixtureRng& rng) {
  const auto first = static_cast<std::size_t>(start * sr);
  const auto count = static_cast<std::size_t>(std::min(6.0 * decay, 1.0) * sr);
  const double a_lo = 1.0 - std::exp(-kTwoPi * hi_hz / sr);
  const double a_hi = 1.0 - std::exp(-kTwoPi * lo_hz / sr);
  double low = 0.0, bass = 0.0, phase = 0.0;
  for (std::size_t i = 0; i < count && first + i < buf.size(); ++i) {
    const double t = static_cast<double>(i) / sr;
    const double env = std::exp(-t / decay);
    low += a_lo * (rng.normal() - low);   // low-pass at hi_hz
    bass += a_hi * (low - bass);          // remove below lo_hz
    double v = (low - bass) * 0.7;
    if (thump_hz > 0.0) {
      phase += kTwoPi * thump_hz * (1.0 + 1.5 * std::exp(-t / 0.02)) / sr;
      v += std::sin(phase);
    }
    buf[first + i] += amplitude * env * v;
  }
}

// Which 2 s bars a stem plays in; arrangement gaps make the material sparse.
class Bars {
 public:
  Bars(FixtureRng& rng, double seconds, double probability) {
    const auto n = static_cast<std::size_t>(std::ceil(seconds / kLength));
    for (std::size_t i = 0; i < n; ++i) on_.push_back(rng.uniform() < probability);
    if (std::none_of(on_.begin(), on_.end(), [](bool b) { return b; })) {
      on_[static_cast<std::size_t>(rng.index(static_cast<int>(n)))] = true;
    }
  }
  static Bars all(double seconds) {
    Bars b;
    b.on_.assign(static_cast<std::size_t>(std::ceil(seconds / kLength)), true);
    return b;
  }
  bool plays(double t) const {
    const auto i = static_cast<std::size_t>(t / kLength);
    return i < on_.size() && on_[i];
  }

 private:
  Bars() = default;
  static constexpr double kLength = 2.0;
  std::vector<bool> on_;
};

double midi_hz(double note) { return 440.0 * std::pow(2.0, (note - 69.0) / 12.0); }

constexpr int kScale[] = {0, 2, 3, 5, 7, 9, 10};  // dorian

double scale_note(FixtureRng& rng, int base_midi, int octaves) {
  const int degree = rng.index(7 * octaves);
  return midi_hz(base_midi + 12 * (degree / 7) + kScale[degree % 7]);
}

std::vector<double> bass_line(FixtureRng& rng, double seconds, double sr,
                        const Bars& bars) {
  std::vector<double> buf(static_cast<std::size_t>(seconds * sr), 0.0);
  for (double t = 0.0; t < seconds; t += 0.5) {
    if (rng.uniform() < 0.15 || !bars.plays(t)) continue;
    Note n;
    n.start = t;
    n.length = rng.uniform(0.3, 0.5);
    n.f0 = scale_note(rng, 33, 2);
    n.amplitude = 0.35;
    n.harmonics = 8;
    n.rolloff = 1.2;
    n.decay = 0.35;
    add_note(buf, sr, n, rng);
  }
  return buf;
}

std::vector<double> drums(FixtureRng& rng, double seconds, double sr,
                        const Bars& bars) {
  std::vector<double> buf(static_cast<std::size_t>(seconds * sr), 0.0);
  int beat = 0;
  for (double t = 0.0; t < seconds; t += 0.5, ++beat) {
    if (!bars.plays(t)) continue;
    if (beat % 2 == 0) {
      add_hit(buf, sr, t, 0.5, 0.09, 30.0, 400.0, 55.0, rng);
    } else {
      add_hit(buf, sr, t, 0.35, 0.07, 300.0, 6000.0, 190.0, rng);
    }
  }
  return buf;
}

std::vector<double> percussion(FixtureRng& rng, double seconds, double sr,
                        const Bars& bars) {
  std::vector<double> buf(static_cast<std::size_t>(seconds * sr), 0.0);
  for (double t = 0.25; t < seconds; t += 0.25) {
    if (rng.uniform() < 0.2 || !bars.plays(t)) continue;
    add_hit(buf, sr, t + rng.uniform(0.0, 0.01), rng.uniform(0.12, 0.2), 0.03,
            5000.0, 16000.0, 0.0, rng);
  }
  return buf;
}

std::vector<double> keys(FixtureRng& rng, double seconds, double sr,
                        const Bars& bars) {
  std::vector<double> buf(static_cast<std::size_t>(seconds * sr), 0.0);
  for (double t = 0.0; t < seconds; t += 1.0) {
    if (!bars.plays(t)) continue;
    const int chord = rng.index(3) + 2;
    for (int v = 0; v < chord; ++v) {
      Note n;
      n.start = t + 0.01 * v;
      n.length = rng.uniform(0.7, 0.95);
      n.f0 = scale_note(rng, 55, 2);
      n.amplitude = 0.12;
      n.harmonics = 10;
      n.rolloff = 1.4;
      n.decay = 0.6;
      add_note(buf, sr, n, rng);
    }
  }
  return buf;
}

std::vector<double> lead(FixtureRng& rng, double seconds, double sr,
                        const Bars& bars) {
  std::vector<double> buf(static_cast<std::size_t>(seconds * sr), 0.0);
  double t = 0.1;
  while (t < seconds) {
    if (!bars.plays(t)) {
      t += 0.25;
      continue;
    }
    Note n;
    n.start = t;
    n.length = rng.uniform(0.2, 0.6);
    n.f0 = scale_note(rng, 60, 2);
    n.amplitude = 0.15;
    n.harmonics = 12;
    n.rolloff = 0.9;
    n.decay = 2.0;
    n.vibrato_hz = 5.5;
    n.vibrato_depth = 0.006;
    add_note(buf, sr, n, rng);
    // breath
    add_hit(buf, sr, t, 0.01, n.length / 3.0, 1500.0, 9000.0, 0.0, rng);
    t += n.length + (rng.uniform() < 0.3 ? rng.uniform(0.1, 0.4) : 0.0);
  }
  return buf;
}

std::vector<double> clicks(FixtureRng& rng, double seconds, double sr,
                        const Bars& bars) {
  std::vector<double> buf(static_cast<std::size_t>(seconds * sr), 0.0);
  for (double t = 0.2; t < seconds - 0.05; t += rng.uniform(0.25, 0.45)) {
    if (bars.plays(t)) add_hit(buf, sr, t, 0.6, 0.004, 200.0, 12000.0, 0.0, rng);
  }
  return buf;
}

Fixture assemble(std::string name, std::vector<std::string> names,
                 std::vector<std::vector<double>> stems, double sr) {
  Fixture fx;
  fx.name = std::move(name);
  fx.stem_names = std::move(names);
  for (auto& s : stems) fx.stems.emplace_back(std::move(s), sr);
  fx.mix = mix_down(fx.stems);
  return fx;
}

}  // namespace

double FixtureRng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double FixtureRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u = 0.0;
  do {
    u = uniform();
  } while (u <= 0.0);
  const double v = uniform();
  const double r = std::sqrt(-2.0 * std::log(u));
  spare_ = r * std::sin(kTwoPi * v);
  has_spare_ = true;
  return r * std::cos(kTwoPi * v);
}

int FixtureRng::index(int n) {
  return std::min(n - 1, static_cast<int>(uniform() * n));
}

Fixture make_fixture(FixtureKind kind, std::uint64_t seed, double seconds,
                     double sr) {
  if (!(seconds > 0.0) || !(sr > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "fixture duration and rate must be positive");
  }
  FixtureRng rng(seed);
  switch (kind) {
    case FixtureKind::kTwoSource: {
      const Bars all = Bars::all(seconds);
      auto a = keys(rng, seconds, sr, all);
      auto b = lead(rng, seconds, sr, all);
      return assemble("two_source", {"keys", "lead"}, {std::move(a), std::move(b)},
                      sr);
    }
    case FixtureKind::kFiveSource: {
      auto bass = bass_line(rng, seconds, sr, Bars(rng, seconds, kBarDensity));
      auto kit = drums(rng, seconds, sr, Bars(rng, seconds, kBarDensity));
      auto perc = percussion(rng, seconds, sr, Bars(rng, seconds, kBarDensity));
      auto k = keys(rng, seconds, sr, Bars(rng, seconds, kBarDensity));
      auto l = lead(rng, seconds, sr, Bars(rng, seconds, kBarDensity));
      return assemble("five_source",
                      {"bass", "drums", "percussion", "keys", "lead"},
                      {std::move(bass), std::move(kit), std::move(perc),
                       std::move(k), std::move(l)},
                      sr);
    }
    case FixtureKind::kTransientRich: {
      const Bars all = Bars::all(seconds);
      auto c = clicks(rng, seconds, sr, all);
      auto k = keys(rng, seconds, sr, all);
      auto bass = bass_line(rng, seconds, sr, all);
      return assemble("transient_rich", {"clicks", "keys", "bass"},
                      {std::move(c), std::move(k), std::move(bass)}, sr);
    }
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown fixture kind");
}

FixtureKind fixture_kind_from_string(const std::string& name) {
  if (name == "two" || name == "two_source") return FixtureKind::kTwoSource;
  if (name == "five" || name == "five_source") return FixtureKind::kFiveSource;
  if (name == "transient" || name == "transient_rich") {
    return FixtureKind::kTransientRich;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown fixture '" + name + "'");
}

std::string to_string(FixtureKind kind) {
  switch (kind) {
    case FixtureKind::kTwoSource: return "two_source";
    case FixtureKind::kFiveSource: return "five_source";
    case FixtureKind::kTransientRich: return "transient_rich";
  }
  return "unknown";
}

Signal sinusoid(double hz, double seconds, double sr, double amplitude,
                double phase) {
  const auto n = static_cast<std::size_t>(std::llround(seconds * sr));
  Signal s(std::vector<double>(n), sr);
  for (std::size_t i = 0; i < n; ++i) {
    s.samples[i] = amplitude * std::sin(kTwoPi * hz * i / sr + phase);
  }
  return s;
}

Signal click_train(std::span<const std::size_t> positions, std::size_t length,
                   double sr, double amplitude) {
  Signal s(std::vector<double>(length, 0.0), sr);
  for (std::size_t p : positions) {
    if (p >= length) {
      throw Error(ErrorCode::kInvalidArgument, "click position past the end");
    }
    s.samples[p] = amplitude;
  }
  return s;
}

Signal white_noise(FixtureRng& rng, std::size_t length, double sr,
                   double amplitude) {
  Signal s(std::vector<double>(length), sr);
  for (auto& v : s.samples) v = amplitude * rng.normal();
  return s;
}

}  // namespace issir
