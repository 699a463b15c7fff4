// Copyright 2026 The ISSIR Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "issir/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "issir/error.hpp"
#include "issir/fft.hpp"

namespace issir {
namespace {

using Spectrum = std::vector<std::complex<double>>;

int next_pow2(std::size_t n) {
  int p = 1;
  while (static_cast<std::size_t>(p) < n) p <<= 1;
  return p;
}

double energy(std::span<const double> x) {
  double e = 0.0;
  for (double v : x) e += v * v;
  return e;
}

double ratio_db(double num, double den) {
  if (!(num > 0.0)) return -std::numeric_limits<double>::infinity();
  if (!(den > 0.0) || num / den > std::pow(10.0, kScoreCapDb / 10.0)) {
    return kScoreCapDb;
  }
  return 10.0 * std::log10(num / den);
}

Summary summarize(const std::vector<SourceScores>& s, double SourceScores::*m) {
  Summary out;
  double sum = 0.0, sq = 0.0;
  for (const auto& x : s) {
    if (!x.defined) continue;
    sum += x.*m;
    sq += (x.*m) * (x.*m);
    ++out.count;
  }
  if (out.count == 0) return out;
  out.mean = sum / out.count;
  out.stddev = std::sqrt(std::max(0.0, sq / out.count - out.mean * out.mean));
  return out;
}

}  // namespace

Summary SeparationScores::sdr() const { return summarize(sources, &SourceScores::sdr); }
Summary SeparationScores::sir() const { return summarize(sources, &SourceScores::sir); }
Summary SeparationScores::sar() const { return summarize(sources, &SourceScores::sar); }

struct BssEvaluator::Impl {
  int num_sources = 0;
  int length = 0;     // reference length T
  int taps = 0;       // L
  int extended = 0;   // T + L - 1
  RealFft fft;
  std::vector<Spectrum> ref_spectra;
  std::vector<bool> silent;
  Eigen::LDLT<Eigen::MatrixXd> full;
  bool full_regularized = false;
  std::vector<Eigen::LDLT<Eigen::MatrixXd>> own;
  std::vector<bool> own_regularized;

  Impl(std::span<const Signal> refs, int L)
      : num_sources(static_cast<int>(refs.size())),
        length(refs.empty() ? 0 : static_cast<int>(refs[0].size())),
        taps(L),
        extended(length + L - 1),
        fft(next_pow2(static_cast<std::size_t>(length) + 2 * L)) {}

  Spectrum transform(std::span<const double> x) const {
    auto ws = fft.workspace();
    auto re = ws.real();
    std::fill(re.begin(), re.end(), 0.0);
    std::copy(x.begin(), x.begin() + std::min<std::size_t>(x.size(), re.size()),
              re.begin());
    fft.forward(ws);
    auto sp = ws.spectrum();
    return {sp.begin(), sp.end()};
  }

  // c(tau) = sum_u a(u) b(u + tau) for tau in [lo, hi].
  std::vector<double> correlate(const Spectrum& a, const Spectrum& b, int lo,
                                int hi) const {
    auto ws = fft.workspace();
    auto sp = ws.spectrum();
    for (std::size_t k = 0; k < sp.size(); ++k) sp[k] = std::conj(a[k]) * b[k];
    fft.inverse(ws);
    const int n = fft.length();
    auto re = ws.real();
    std::vector<double> out(static_cast<std::size_t>(hi - lo + 1));
    for (int tau = lo; tau <= hi; ++tau) {
      out[static_cast<std::size_t>(tau - lo)] = re[(tau % n + n) % n] / n;
    }
    return out;
  }

  static Eigen::LDLT<Eigen::MatrixXd> factor(Eigen::MatrixXd g, bool& flagged) {
    const double ridge = 1e-12 * g.trace();
    g.diagonal().array() += ridge;
    Eigen::LDLT<Eigen::MatrixXd> f(g);
    flagged = f.info() != Eigen::Success || !(f.rcond() > 1e-10);
    return f;
  }

  // sum_{i in sources} sum_a coef(i, a) r_i(t - a), t in [0, extended).
  std::vector<double> synthesize(const Eigen::VectorXd& coef,
                                 std::span<const int> sources) const {
    auto ws = fft.workspace();
    auto sp = ws.spectrum();
    std::fill(sp.begin(), sp.end(), std::complex<double>(0.0, 0.0));
    for (std::size_t s = 0; s < sources.size(); ++s) {
      std::vector<double> taps_i(coef.data() + s * taps,
                                 coef.data() + (s + 1) * taps);
      const Spectrum c = transform(taps_i);
      const Spectrum& r = ref_spectra[static_cast<std::size_t>(sources[s])];
      for (std::size_t k = 0; k < sp.size(); ++k) sp[k] += c[k] * r[k];
    }
    fft.inverse(ws);
    auto re = ws.real();
    const double n = fft.length();
    std::vector<double> out(static_cast<std::size_t>(extended));
    for (int t = 0; t < extended; ++t) out[static_cast<std::size_t>(t)] = re[t] / n;
    return out;
  }
};

BssEvaluator::BssEvaluator(std::span<const Signal> references, int filter_length) {
  if (references.empty()) throw Error(ErrorCode::kNoSources, "no references");
  if (filter_length < 1) {
    throw Error(ErrorCode::kInvalidArgument, "filter length must be >= 1");
  }
  for (const auto& r : references) {
    if (r.size() != references[0].size() || r.empty()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "references must be non-empty and of equal length");
    }
  }
  impl_ = std::make_unique<Impl>(references, filter_length);
  Impl& m = *impl_;
  const int J = m.num_sources;
  const int L = m.taps;
  for (const auto& r : references) {
    m.ref_spectra.push_back(m.transform(r.samples));
    m.silent.push_back(!(energy(r.samples) > 0.0));
  }

  Eigen::MatrixXd gram(J * L, J * L);
  for (int i = 0; i < J; ++i) {
    for (int j = i; j < J; ++j) {
      const auto c = m.correlate(m.ref_spectra[i], m.ref_spectra[j], -(L - 1), L - 1);
      for (int a = 0; a < L; ++a) {
        for (int b = 0; b < L; ++b) {
          const double v = c[static_cast<std::size_t>(a - b + L - 1)];
          gram(i * L + a, j * L + b) = v;
          gram(j * L + b, i * L + a) = v;
        }
      }
    }
  }
  m.full = Impl::factor(gram, m.full_regularized);
  m.own_regularized.assign(static_cast<std::size_t>(J), false);
  for (int j = 0; j < J; ++j) {
    bool flagged = false;
    m.own.push_back(Impl::factor(gram.block(j * L, j * L, L, L), flagged));
    m.own_regularized[static_cast<std::size_t>(j)] = flagged;
  }
}

BssEvaluator::~BssEvaluator() = default;
BssEvaluator::BssEvaluator(BssEvaluator&&) noexcept = default;
BssEvaluator& BssEvaluator::operator=(BssEvaluator&&) noexcept = default;

int BssEvaluator::num_sources() const { return impl_->num_sources; }
int BssEvaluator::filter_length() const { return impl_->taps; }

Decomposition BssEvaluator::decompose(const Signal& estimate, int j) const {
  const Impl& m = *impl_;
  if (j < 0 || j >= m.num_sources) {
    throw Error(ErrorCode::kInvalidArgument, "reference index out of range");
  }
  if (static_cast<int>(estimate.size()) != m.length) {
    throw Error(ErrorCode::kDimensionMismatch,
                "estimate and references differ in length");
  }
  if (m.silent[static_cast<std::size_t>(j)]) {
    throw Error(ErrorCode::kDegenerate, "reference is silent");
  }
  const int J = m.num_sources;
  const int L = m.taps;
  const Spectrum e = m.transform(estimate.samples);

  Eigen::VectorXd rhs(J * L);
  for (int i = 0; i < J; ++i) {
    const auto c = m.correlate(m.ref_spectra[i], e, 0, L - 1);
    for (int a = 0; a < L; ++a) rhs(i * L + a) = c[static_cast<std::size_t>(a)];
  }

  std::vector<int> all(static_cast<std::size_t>(J));
  for (int i = 0; i < J; ++i) all[static_cast<std::size_t>(i)] = i;
  const Eigen::VectorXd coef_all = m.full.solve(rhs);
  const Eigen::VectorXd coef_own =
      m.own[static_cast<std::size_t>(j)].solve(rhs.segment(j * L, L));
  const int own_index[] = {j};

  Decomposition d;
  d.target = m.synthesize(coef_own, own_index);
  const auto projected = m.synthesize(coef_all, all);
  d.interference.resize(projected.size());
  d.artifacts.resize(projected.size());
  for (std::size_t t = 0; t < projected.size(); ++t) {
    const double est = t < estimate.size() ? estimate.samples[t] : 0.0;
    d.interference[t] = projected[t] - d.target[t];
    d.artifacts[t] = est - projected[t];
  }
  d.regularized = m.full_regularized || m.own_regularized[static_cast<std::size_t>(j)];
  return d;
}

SeparationScores BssEvaluator::evaluate(std::span<const Signal> estimates) const {
  if (static_cast<int>(estimates.size()) != impl_->num_sources) {
    throw Error(ErrorCode::kDimensionMismatch,
                "one estimate per reference required");
  }
  SeparationScores out;
  for (int j = 0; j < impl_->num_sources; ++j) {
    const Signal& est = estimates[static_cast<std::size_t>(j)];
    if (impl_->silent[static_cast<std::size_t>(j)] || !(energy(est.samples) > 0.0)) {
      out.sources.push_back({0.0, 0.0, 0.0, false});
      continue;
    }
    out.sources.push_back(scores(decompose(est, j)));
  }
  return out;
}

Decomposition decompose(const Signal& estimate,
                        std::span<const Signal> references, int j,
                        int filter_length) {
  return BssEvaluator(references, filter_length).decompose(estimate, j);
}

SourceScores scores(const Decomposition& d) {
  const std::size_t n = d.target.size();
  double st = 0.0, ei = 0.0, ea = 0.0, dist = 0.0, signal = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    st += d.target[t] * d.target[t];
    ei += d.interference[t] * d.interference[t];
    ea += d.artifacts[t] * d.artifacts[t];
    const double noise = d.interference[t] + d.artifacts[t];
    dist += noise * noise;
    const double s = d.target[t] + d.interference[t];
    signal += s * s;
  }
  SourceScores s;
  s.sdr = ratio_db(st, dist);
  s.sir = ratio_db(st, ei);
  s.sar = ratio_db(signal, ea);
  s.defined = std::isfinite(s.sdr) && std::isfinite(s.sir) && std::isfinite(s.sar);
  return s;
}

SeparationScores relative_scores(const SeparationScores& scores,
                                 const SeparationScores& baseline,
                                 const std::string& baseline_name) {
  if (scores.sources.size() != baseline.sources.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "score sets differ in source count");
  }
  SeparationScores out;
  out.baseline = baseline_name;
  for (std::size_t j = 0; j < scores.sources.size(); ++j) {
    const auto& a = scores.sources[j];
    const auto& b = baseline.sources[j];
    out.sources.push_back({a.sdr - b.sdr, a.sir - b.sir, a.sar - b.sar,
                           a.defined && b.defined});
  }
  return out;
}

}  // namespace issir
