// Copyright 2026 The ISSIR Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "issir/tf_array.hpp"

#include <cmath>

namespace issir {
namespace {

template <typename Out, typename In, typename Fn>
TfArray<Out> map(const TfArray<In>& x, Fn fn) {
  TfArray<Out> out;
  out.grid = x.grid;
  out.large = x.large.unaryExpr(fn);
  out.small = x.small.unaryExpr(fn);
  return out;
}

inline cplx unit_phasor(const cplx& z) {
  return std::polar(1.0, std::arg(z));
}

}  // namespace

RealSpectrogram magnitude(const ComplexSpectrogram& x) {
  return map<double>(x, [](const cplx& z) { return std::abs(z); });
}

RealSpectrogram power(const ComplexSpectrogram& x) {
  return map<double>(x, [](const cplx& z) { return std::norm(z); });
}

RealSpectrogram phase(const ComplexSpectrogram& x) {
  return map<double>(x, [](const cplx& z) { return std::arg(z); });
}

ComplexSpectrogram polar(const RealSpectrogram& mag,
                         const RealSpectrogram& ph) {
  mag.require_shape(ph, "polar");
  ComplexSpectrogram out;
  out.grid = mag.grid;
  out.large = mag.large.binaryExpr(
      ph.large, [](double m, double p) { return std::polar(m, p); });
  out.small = mag.small.binaryExpr(
      ph.small, [](double m, double p) { return std::polar(m, p); });
  return out;
}

ComplexSpectrogram with_phase_of(const RealSpectrogram& mag,
                                 const ComplexSpectrogram& like) {
  mag.require_shape(like, "with_phase_of");
  ComplexSpectrogram out;
  out.grid = mag.grid;
  out.large = mag.large.binaryExpr(
      like.large, [](double m, const cplx& z) { return m * unit_phasor(z); });
  out.small = mag.small.binaryExpr(
      like.small, [](double m, const cplx& z) { return m * unit_phasor(z); });
  return out;
}

ComplexSpectrogram apply_mask(const ComplexSpectrogram& x,
                              const RealSpectrogram& mask) {
  x.require_shape(mask, "apply_mask");
  ComplexSpectrogram out;
  out.grid = x.grid;
  out.large = x.large * mask.large.cast<cplx>();
  out.small = x.small * mask.small.cast<cplx>();
  return out;
}

double norm(const ComplexSpectrogram& x) {
  return std::sqrt(x.large.abs2().sum() + x.small.abs2().sum());
}

bool all_finite(const ComplexSpectrogram& x) {
  return x.large.isFinite().all() && x.small.isFinite().all();
}

}  // namespace issir
