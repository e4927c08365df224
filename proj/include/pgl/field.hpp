#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace pgl {

/// Periodic box [0,L)^d sampled with N points per axis.
class Torus {
 public:
  Torus(int dim, double side_length, int points_per_axis);

  int dim() const { return dim_; }
  double side_length() const { return side_; }
  int n() const { return n_; }
  double spacing() const { return side_ / n_; }
  double cell_volume() const;
  double volume() const;
  std::size_t num_points() const { return num_points_; }
  /// Number of complex coefficients in the half-spectrum (last axis halved).
  std::size_t num_modes() const { return num_modes_; }
  /// Angular frequency of the lowest mode, 2*pi/L.
  double base_frequency() const;

  /// Physical coordinates of grid point `index` (row-major, last axis fastest).
  std::array<double, 3> point(std::size_t index) const;

  /// Signed integer wavevector of half-spectrum entry `mode`.
  std::array<int, 3> wavevector(std::size_t mode) const;
  /// Multiplicity of `mode` when summing over the full Hermitian spectrum.
  double hermitian_weight(std::size_t mode) const;
  /// True when some component of the wavevector sits on the Nyquist index.
  bool is_nyquist(std::size_t mode) const;

  friend bool operator==(const Torus& a, const Torus& b) {
    return a.dim_ == b.dim_ && a.side_ == b.side_ && a.n_ == b.n_;
  }

 private:
  int dim_;
  double side_;
  int n_;
  std::size_t num_points_;
  std::size_t num_modes_;
};

/// Real scalar (components == 1) or vector/tensor grid function on a torus.
/// Values are stored component-major: component c occupies
/// [c * num_points, (c + 1) * num_points).
class Field {
 public:
  /// Empty placeholder (no components) on the smallest 2D torus.
  Field() : torus_(2, 1.0, 8) {}
  Field(Torus torus, int components);
  Field(Torus torus, int components, std::vector<double> values);

  using PointFunction = std::function<double(const std::array<double, 3>& x, int component)>;
  static Field sample(const Torus& torus, int components, const PointFunction& fn);
  static Field constant(const Torus& torus, int components, double value);

  const Torus& torus() const { return torus_; }
  int components() const { return components_; }
  std::size_t num_points() const { return torus_.num_points(); }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  std::span<const double> component(int c) const;
  std::span<double> component(int c);

  /// Throws InvalidArgument naming the first component holding NaN/Inf.
  void require_finite(const std::string& context) const;
  bool is_finite() const;

  /// Pointwise Euclidean magnitude over components.
  std::vector<double> magnitude() const;

  /// Mean of each component over the torus.
  std::vector<double> mean() const;

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double factor);
  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(double c, Field a) { return a *= c; }
  friend Field operator*(Field a, double c) { return a *= c; }

 private:
  Torus torus_;
  int components_ = 0;
  std::vector<double> values_;
};

/// Half-spectrum (r2c layout) of every component of a field, unnormalized
/// forward DFT convention: hat f_k = sum_x f(x) exp(-i k.x).
class Spectrum {
 public:
  Spectrum(Torus torus, int components);

  const Torus& torus() const { return torus_; }
  int components() const { return components_; }
  std::size_t num_modes() const { return torus_.num_modes(); }

  std::span<const std::complex<double>> component(int c) const;
  std::span<std::complex<double>> component(int c);
  std::span<const std::complex<double>> coefficients() const { return coeffs_; }
  std::span<std::complex<double>> coefficients() { return coeffs_; }

  Spectrum& operator+=(const Spectrum& other);
  Spectrum& operator*=(double factor);
  /// this += factor * other
  Spectrum& add_scaled(const Spectrum& other, double factor);

 private:
  Torus torus_;
  int components_;
  std::vector<std::complex<double>> coeffs_;
};

Spectrum forward(const Field& f);
Field inverse(const Spectrum& s);

}  // namespace pgl
