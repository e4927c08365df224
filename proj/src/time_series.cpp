#include "pgl/time_series.hpp"

#include <algorithm>
#include <cmath>

#include "pgl/errors.hpp"

namespace pgl {

TimeSeries::TimeSeries(std::vector<double> times, std::vector<double> samples)
    : times_(std::move(times)), samples_(std::move(samples)) {
  if (times_.size() != samples_.size()) throw InvalidArgument("time series needs equally many times and samples");
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (!std::isfinite(times_[i]) || !std::isfinite(samples_[i]))
      throw InvalidArgument("time series entries must be finite");
    if (i > 0 && !(times_[i] > times_[i - 1])) throw InvalidArgument("time series times must be strictly increasing");
  }
}

void TimeSeries::push_back(double t, double value) {
  if (!std::isfinite(t) || !std::isfinite(value)) throw InvalidArgument("time series entries must be finite");
  if (!times_.empty() && !(t > times_.back())) throw InvalidArgument("time series times must be strictly increasing");
  times_.push_back(t);
  samples_.push_back(value);
}

std::vector<double> TimeSeries::cell_edges() const {
  std::vector<double> edges;
  if (times_.empty()) return edges;
  edges.reserve(times_.size() + 1);
  edges.push_back(times_.front());
  for (std::size_t i = 0; i + 1 < times_.size(); ++i) edges.push_back(0.5 * (times_[i] + times_[i + 1]));
  edges.push_back(times_.back());
  return edges;
}

std::vector<double> TimeSeries::cell_weights(double a, double b) const {
  const auto edges = cell_edges();
  std::vector<double> w(size(), 0.0);
  for (std::size_t i = 0; i < size(); ++i) {
    const double lo = std::max(a, edges[i]);
    const double hi = std::min(b, edges[i + 1]);
    if (hi > lo) w[i] = hi - lo;
  }
  return w;
}

double TimeSeries::max_abs() const {
  double m = 0.0;
  for (double v : samples_) m = std::max(m, std::abs(v));
  return m;
}

namespace {

bool is_uniform(const std::vector<double>& t) {
  if (t.size() < 3) return false;
  const double h = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
  for (std::size_t i = 1; i < t.size(); ++i)
    if (std::abs((t[i] - t[i - 1]) - h) > 1e-9 * h) return false;
  return true;
}

}  // namespace

std::vector<double> cumulative_integral(const TimeSeries& s) {
  const auto& t = s.times();
  const auto& y = s.samples();
  std::vector<double> acc(t.size(), 0.0);
  if (t.size() < 2) return acc;
  if (!is_uniform(t)) {
    for (std::size_t i = 1; i < t.size(); ++i) acc[i] = acc[i - 1] + 0.5 * (t[i] - t[i - 1]) * (y[i] + y[i - 1]);
    return acc;
  }
  const double h = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
  // Even-indexed nodes get composite Simpson values; odd ones use the
  // third-order half-panel rule over [t_{i-1}, t_i] inside the Simpson pair.
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (i % 2 == 0) {
      acc[i] = acc[i - 2] + h / 3.0 * (y[i - 2] + 4.0 * y[i - 1] + y[i]);
    } else if (i + 1 < t.size()) {
      acc[i] = acc[i - 1] + h / 12.0 * (5.0 * y[i - 1] + 8.0 * y[i] - y[i + 1]);
    } else if (i >= 3) {
      acc[i] = acc[i - 3] + 3.0 * h / 8.0 * (y[i - 3] + 3.0 * y[i - 2] + 3.0 * y[i - 1] + y[i]);
    } else {
      acc[i] = acc[i - 1] + 0.5 * h * (y[i] + y[i - 1]);
    }
  }
  return acc;
}

double integrate(const TimeSeries& s) {
  if (s.size() < 2) return 0.0;
  return cumulative_integral(s).back();
}

}  // namespace pgl
