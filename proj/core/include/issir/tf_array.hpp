// Copyright 2026 The ISSIR Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <Eigen/Core>
#include <complex>

#include "issir/error.hpp"
#include "issir/grid.hpp"

namespace issir {

using cplx = std::complex<double>;

/// Frames x bins, one frame per contiguous row.
template <typename T>
using TfMatrix = Eigen::Array<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Time-frequency values on a (possibly dual) grid: `large` holds every
/// large-window frame, `small` the small-window frames of all transients in
/// transient-major order. On a uniform grid `small` has zero rows.
template <typename T>
struct TfArray {
  DualGridSpec grid;
  TfMatrix<T> large;
  TfMatrix<T> small;

  static TfArray zeros(const DualGridSpec& g) {
    TfArray out;
    out.grid = g;
    out.large = TfMatrix<T>::Zero(g.large.num_frames(), g.large.num_bins());
    out.small = TfMatrix<T>::Zero(g.num_small_frames(), g.small.num_bins());
    return out;
  }

  template <typename U>
  bool same_shape(const TfArray<U>& other) const {
    return large.rows() == other.large.rows() &&
           large.cols() == other.large.cols() &&
           small.rows() == other.small.rows() &&
           small.cols() == other.small.cols();
  }

  template <typename U>
  void require_shape(const TfArray<U>& other, const char* what) const {
    if (!same_shape(other)) {
      throw Error(ErrorCode::kDimensionMismatch,
                  std::string(what) + ": time-frequency dimensions differ");
    }
  }

  Eigen::Index size() const { return large.size() + small.size(); }

  TfArray& operator+=(const TfArray& o) {
    require_shape(o, "operator+=");
    large += o.large;
    small += o.small;
    return *this;
  }
  TfArray& operator-=(const TfArray& o) {
    require_shape(o, "operator-=");
    large -= o.large;
    small -= o.small;
    return *this;
  }
  TfArray& operator*=(double s) {
    large *= s;
    small *= s;
    return *this;
  }
};

using ComplexSpectrogram = TfArray<cplx>;
using RealSpectrogram = TfArray<double>;

inline ComplexSpectrogram operator+(ComplexSpectrogram a,
                                    const ComplexSpectrogram& b) {
  a += b;
  return a;
}
inline ComplexSpectrogram operator-(ComplexSpectrogram a,
                                    const ComplexSpectrogram& b) {
  a -= b;
  return a;
}
inline ComplexSpectrogram operator*(ComplexSpectrogram a, double s) {
  a *= s;
  return a;
}

RealSpectrogram magnitude(const ComplexSpectrogram& x);
RealSpectrogram power(const ComplexSpectrogram& x);
RealSpectrogram phase(const ComplexSpectrogram& x);
/// mag * exp(i * phase), element-wise.
ComplexSpectrogram polar(const RealSpectrogram& mag,
                         const RealSpectrogram& phase);
/// mag * exp(i * arg(like)), element-wise; arg(0) is taken as 0.
ComplexSpectrogram with_phase_of(const RealSpectrogram& mag,
                                 const ComplexSpectrogram& like);
ComplexSpectrogram apply_mask(const ComplexSpectrogram& x,
                              const RealSpectrogram& mask);
/// Frobenius norm over both resolutions.
double norm(const ComplexSpectrogram& x);
bool all_finite(const ComplexSpectrogram& x);

}  // namespace issir
