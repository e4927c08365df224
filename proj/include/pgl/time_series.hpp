#pragma once

#include <vector>

namespace pgl {

/// Scalar function of time sampled on a strictly increasing grid.
///
/// As a function on [t_0, t_last] each sample is held on its dual cell:
/// sample i covers [m_{i-1}, m_i) with m_i the midpoint of t_i and t_{i+1},
/// and the first and last cells stop at t_0 and t_last.
class TimeSeries {
 public:
  TimeSeries() = default;
  TimeSeries(std::vector<double> times, std::vector<double> samples);

  const std::vector<double>& times() const { return times_; }
  const std::vector<double>& samples() const { return samples_; }
  std::size_t size() const { return times_.size(); }
  bool empty() const { return times_.empty(); }
  double start() const { return times_.front(); }
  double end() const { return times_.back(); }

  void push_back(double t, double value);

  /// Dual-cell boundaries, size() + 1 entries.
  std::vector<double> cell_edges() const;
  /// Lengths of the parts of each dual cell inside [a, b].
  std::vector<double> cell_weights(double a, double b) const;

  /// Pointwise map of the samples.
  template <class F>
  TimeSeries map(F&& fn) const {
    TimeSeries out = *this;
    for (std::size_t i = 0; i < size(); ++i) out.samples_[i] = fn(times_[i], samples_[i]);
    return out;
  }

  double max_abs() const;

 private:
  std::vector<double> times_;
  std::vector<double> samples_;
};

/// Integral over [t_0, t_last]: composite Simpson on a uniform grid (3/8 rule
/// on the last three panels for an odd panel count), trapezoid otherwise.
double integrate(const TimeSeries& s);
/// Running integral at every sample time, same rules applied panel-wise.
std::vector<double> cumulative_integral(const TimeSeries& s);

}  // namespace pgl
