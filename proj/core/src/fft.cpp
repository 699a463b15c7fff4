// Copyright 2026 The ISSIR Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "issir/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

#include "issir/error.hpp"

namespace issir {
namespace {

// FFTW planning is not thread-safe; execution with the new-array interface is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

struct RealFft::Plans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
  ~Plans() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (r2c) fftw_destroy_plan(r2c);
    if (c2r) fftw_destroy_plan(c2r);
  }
};

RealFft::RealFft(int length) : length_(length) {
  if (length < 2) {
    throw Error(ErrorCode::kInvalidArgument, "fft length must be >= 2");
  }
  static std::map<int, std::shared_ptr<const Plans>> cache;
  std::lock_guard<std::mutex> lock(planner_mutex());
  auto it = cache.find(length);
  if (it != cache.end()) {
    plans_ = it->second;
    return;
  }
  auto plans = std::make_shared<Plans>();
  double* real = fftw_alloc_real(static_cast<size_t>(length));
  fftw_complex* spec = fftw_alloc_complex(static_cast<size_t>(length / 2 + 1));
  plans->r2c = fftw_plan_dft_r2c_1d(length, real, spec, FFTW_ESTIMATE);
  plans->c2r = fftw_plan_dft_c2r_1d(length, spec, real, FFTW_ESTIMATE);
  fftw_free(real);
  fftw_free(spec);
  cache.emplace(length, plans);
  plans_ = std::move(plans);
}

RealFft::Workspace::Workspace(int length)
    : n_(length),
      real_(fftw_alloc_real(static_cast<size_t>(length))),
      spec_(reinterpret_cast<std::complex<double>*>(
          fftw_alloc_complex(static_cast<size_t>(length / 2 + 1)))) {}

RealFft::Workspace::~Workspace() {
  fftw_free(real_);
  fftw_free(spec_);
}

void RealFft::forward(Workspace& ws) const {
  fftw_execute_dft_r2c(plans_->r2c, ws.real_,
                       reinterpret_cast<fftw_complex*>(ws.spec_));
}

void RealFft::inverse(Workspace& ws) const {
  fftw_execute_dft_c2r(plans_->c2r, reinterpret_cast<fftw_complex*>(ws.spec_),
                       ws.real_);
}

}  // namespace issir
