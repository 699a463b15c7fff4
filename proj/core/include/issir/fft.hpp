// Copyright 2026 The ISSIR Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <complex>
#include <memory>
#include <span>

namespace issir {

/// Unnormalized real-to-complex / complex-to-real DFT of a fixed length.
/// Plans are cached process-wide; a `Workspace` owns the aligned buffers, so
/// several threads may share one RealFft as long as each uses its own
/// workspace.
class RealFft {
 public:
  explicit RealFft(int length);

  int length() const { return length_; }
  int num_bins() const { return length_ / 2 + 1; }

  class Workspace {
   public:
    explicit Workspace(int length);
    ~Workspace();
    Workspace(const Workspace&) = delete;
    Workspace& operator=(const Workspace&) = delete;

    std::span<double> real() { return {real_, static_cast<size_t>(n_)}; }
    std::span<std::complex<double>> spectrum() {
      return {spec_, static_cast<size_t>(n_ / 2 + 1)};
    }

   private:
    friend class RealFft;
    int n_;
    double* real_;
    std::complex<double>* spec_;
  };

  Workspace workspace() const { return Workspace(length_); }

  /// real() -> spectrum()
  void forward(Workspace& ws) const;
  /// spectrum() -> real(); clobbers spectrum().
  void inverse(Workspace& ws) const;

 private:
  struct Plans;
  int length_;
  std::shared_ptr<const Plans> plans_;
};

}  // namespace issir
