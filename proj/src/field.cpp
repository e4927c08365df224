#include "pgl/field.hpp"

#include <cmath>
#include <numbers>

#include "fft.hpp"
#include "pgl/errors.hpp"

namespace pgl {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

int signed_index(int i, int n) { return i <= n / 2 ? i : i - n; }

}  // namespace

Torus::Torus(int dim, double side_length, int points_per_axis)
    : dim_(dim), side_(side_length), n_(points_per_axis) {
  if (dim != 2 && dim != 3) throw InvalidArgument("torus dimension must be 2 or 3, got " + std::to_string(dim));
  if (!(side_length > 0.0) || !std::isfinite(side_length))
    throw InvalidArgument("torus side length must be positive and finite");
  if (points_per_axis < 8 || !is_power_of_two(points_per_axis))
    throw InvalidArgument("points per axis must be a power of two >= 8, got " + std::to_string(points_per_axis));
  num_points_ = 1;
  for (int a = 0; a < dim; ++a) num_points_ *= static_cast<std::size_t>(n_);
  num_modes_ = num_points_ / static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_ / 2 + 1);
}

double Torus::cell_volume() const { return std::pow(spacing(), dim_); }

double Torus::volume() const { return std::pow(side_, dim_); }

double Torus::base_frequency() const { return 2.0 * std::numbers::pi / side_; }

std::array<double, 3> Torus::point(std::size_t index) const {
  std::array<double, 3> x{0.0, 0.0, 0.0};
  const double h = spacing();
  const auto n = static_cast<std::size_t>(n_);
  for (int a = dim_ - 1; a >= 0; --a) {
    x[static_cast<std::size_t>(a)] = static_cast<double>(index % n) * h;
    index /= n;
  }
  return x;
}

std::array<int, 3> Torus::wavevector(std::size_t mode) const {
  std::array<int, 3> k{0, 0, 0};
  const auto half = static_cast<std::size_t>(n_ / 2 + 1);
  const auto n = static_cast<std::size_t>(n_);
  k[static_cast<std::size_t>(dim_ - 1)] = static_cast<int>(mode % half);
  mode /= half;
  for (int a = dim_ - 2; a >= 0; --a) {
    k[static_cast<std::size_t>(a)] = signed_index(static_cast<int>(mode % n), n_);
    mode /= n;
  }
  return k;
}

double Torus::hermitian_weight(std::size_t mode) const {
  const int last = wavevector(mode)[static_cast<std::size_t>(dim_ - 1)];
  return (last == 0 || last == n_ / 2) ? 1.0 : 2.0;
}

bool Torus::is_nyquist(std::size_t mode) const {
  const auto k = wavevector(mode);
  for (int a = 0; a < dim_; ++a)
    if (std::abs(k[static_cast<std::size_t>(a)]) == n_ / 2) return true;
  return false;
}

Field::Field(Torus torus, int components)
    : torus_(torus), components_(components),
      values_(static_cast<std::size_t>(components) * torus.num_points(), 0.0) {
  if (components < 1) throw InvalidArgument("a field needs at least one component");
}

Field::Field(Torus torus, int components, std::vector<double> values)
    : torus_(torus), components_(components), values_(std::move(values)) {
  if (components < 1) throw InvalidArgument("a field needs at least one component");
  if (values_.size() != static_cast<std::size_t>(components) * torus_.num_points())
    throw InvalidArgument("field value count does not match torus size times components");
}

Field Field::sample(const Torus& torus, int components, const PointFunction& fn) {
  Field f(torus, components);
  for (int c = 0; c < components; ++c) {
    auto dst = f.component(c);
    for (std::size_t i = 0; i < torus.num_points(); ++i) dst[i] = fn(torus.point(i), c);
  }
  return f;
}

Field Field::constant(const Torus& torus, int components, double value) {
  Field f(torus, components);
  std::fill(f.values_.begin(), f.values_.end(), value);
  return f;
}

std::span<const double> Field::component(int c) const {
  return std::span<const double>(values_).subspan(static_cast<std::size_t>(c) * num_points(), num_points());
}

std::span<double> Field::component(int c) {
  return std::span<double>(values_).subspan(static_cast<std::size_t>(c) * num_points(), num_points());
}

bool Field::is_finite() const {
  for (double v : values_)
    if (!std::isfinite(v)) return false;
  return true;
}

void Field::require_finite(const std::string& context) const {
  for (int c = 0; c < components_; ++c)
    for (double v : component(c))
      if (!std::isfinite(v))
        throw InvalidArgument(context + ": non-finite value in component " + std::to_string(c));
}

std::vector<double> Field::magnitude() const {
  std::vector<double> out(num_points(), 0.0);
  if (components_ == 1) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::abs(values_[i]);
    return out;
  }
  for (int c = 0; c < components_; ++c) {
    auto v = component(c);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += v[i] * v[i];
  }
  for (double& x : out) x = std::sqrt(x);
  return out;
}

std::vector<double> Field::mean() const {
  std::vector<double> out;
  for (int c = 0; c < components_; ++c) {
    double s = 0.0;
    for (double v : component(c)) s += v;
    out.push_back(s / static_cast<double>(num_points()));
  }
  return out;
}

Field& Field::operator+=(const Field& other) {
  if (!(torus_ == other.torus_) || components_ != other.components_)
    throw InvalidArgument("field shapes differ in +=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  if (!(torus_ == other.torus_) || components_ != other.components_)
    throw InvalidArgument("field shapes differ in -=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

Field& Field::operator*=(double factor) {
  for (double& v : values_) v *= factor;
  return *this;
}

Spectrum::Spectrum(Torus torus, int components)
    : torus_(torus), components_(components),
      coeffs_(static_cast<std::size_t>(components) * torus.num_modes()) {}

std::span<const std::complex<double>> Spectrum::component(int c) const {
  return std::span<const std::complex<double>>(coeffs_).subspan(static_cast<std::size_t>(c) * num_modes(),
                                                               num_modes());
}

std::span<std::complex<double>> Spectrum::component(int c) {
  return std::span<std::complex<double>>(coeffs_).subspan(static_cast<std::size_t>(c) * num_modes(), num_modes());
}

Spectrum& Spectrum::operator+=(const Spectrum& other) { return add_scaled(other, 1.0); }

Spectrum& Spectrum::operator*=(double factor) {
  for (auto& z : coeffs_) z *= factor;
  return *this;
}

Spectrum& Spectrum::add_scaled(const Spectrum& other, double factor) {
  if (!(torus_ == other.torus_) || components_ != other.components_)
    throw InvalidArgument("spectrum shapes differ");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += factor * other.coeffs_[i];
  return *this;
}

Spectrum forward(const Field& f) {
  const auto& plan = detail::FftPlan::get(f.torus().dim(), f.torus().n());
  Spectrum s(f.torus(), f.components());
  for (int c = 0; c < f.components(); ++c) plan.forward(f.component(c).data(), s.component(c).data());
  return s;
}

Field inverse(const Spectrum& s) {
  const auto& plan = detail::FftPlan::get(s.torus().dim(), s.torus().n());
  Field f(s.torus(), s.components());
  for (int c = 0; c < s.components(); ++c) plan.inverse(s.component(c).data(), f.component(c).data());
  return f;
}

}  // namespace pgl
