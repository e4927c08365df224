#pragma once

#include <complex>
#include <vector>

namespace pgl::detail {

/// FFTW r2c/c2r plans for one (dim, N) pair. Plans are created once through
/// a process-wide registry; executing them is thread-safe.
class FftPlan {
 public:
  static const FftPlan& get(int dim, int n);

  /// Unnormalized forward transform of N^dim reals into the half-spectrum.
  void forward(const double* in, std::complex<double>* out) const;
  /// Normalized inverse (includes the 1/N^dim factor). `in` is not modified.
  void inverse(const std::complex<double>* in, double* out) const;

  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;
  ~FftPlan();

 private:
  FftPlan(int dim, int n);

  int dim_;
  int n_;
  std::size_t num_points_;
  std::size_t num_modes_;
  void* r2c_ = nullptr;
  void* c2r_ = nullptr;
};

}  // namespace pgl::detail
