#include "fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <memory>
#include <mutex>

namespace pgl::detail {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

const FftPlan& FftPlan::get(int dim, int n) {
  static std::map<std::pair<int, int>, std::unique_ptr<FftPlan>> registry;
  std::lock_guard<std::mutex> lock(planner_mutex());
  auto& slot = registry[{dim, n}];
  if (!slot) slot.reset(new FftPlan(dim, n));
  return *slot;
}

FftPlan::FftPlan(int dim, int n) : dim_(dim), n_(n) {
  num_points_ = 1;
  for (int a = 0; a < dim; ++a) num_points_ *= static_cast<std::size_t>(n);
  num_modes_ = num_points_ / static_cast<std::size_t>(n) * static_cast<std::size_t>(n / 2 + 1);

  // Planning scratch; FFTW_ESTIMATE never touches the arrays' contents and
  // always picks the same algorithm, which keeps runs bitwise reproducible.
  double* rbuf = fftw_alloc_real(num_points_);
  fftw_complex* cbuf = fftw_alloc_complex(num_modes_);
  int dims[3] = {n, n, n};
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  r2c_ = fftw_plan_dft_r2c(dim, dims, rbuf, cbuf, flags);
  c2r_ = fftw_plan_dft_c2r(dim, dims, cbuf, rbuf, flags | FFTW_DESTROY_INPUT);
  fftw_free(rbuf);
  fftw_free(cbuf);
}

FftPlan::~FftPlan() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(r2c_));
  fftw_destroy_plan(static_cast<fftw_plan>(c2r_));
}

void FftPlan::forward(const double* in, std::complex<double>* out) const {
  // The r2c plan does not modify its input.
  fftw_execute_dft_r2c(static_cast<fftw_plan>(r2c_), const_cast<double*>(in),
                       reinterpret_cast<fftw_complex*>(out));
}

void FftPlan::inverse(const std::complex<double>* in, double* out) const {
  thread_local std::vector<std::complex<double>> scratch;
  scratch.assign(in, in + num_modes_);
  fftw_execute_dft_c2r(static_cast<fftw_plan>(c2r_), reinterpret_cast<fftw_complex*>(scratch.data()),
                       out);
  const double scale = 1.0 / static_cast<double>(num_points_);
  for (std::size_t i = 0; i < num_points_; ++i) out[i] *= scale;
}

}  // namespace pgl::detail
