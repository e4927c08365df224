#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "pgl/field.hpp"
#include "pgl/time_series.hpp"

namespace pgl {

using Point = std::array<double, 3>;
using Matrix = std::array<double, 9>;  ///< row-major, leading dim x dim block used

/// Trigonometric interpolant of a field at arbitrary points, built from the
/// coefficients above 1e-14 of the largest. Nyquist content is ignored.
class SpectralInterpolator {
 public:
  explicit SpectralInterpolator(const Spectrum& s);

  int components() const { return components_; }
  /// Values of every component at x.
  void evaluate(const Point& x, double* values) const;
  /// Values and first derivatives; gradient[c * dim + j] = d_j f_c.
  void evaluate(const Point& x, double* values, double* gradient) const;

 private:
  int dim_;
  int components_;
  int kmax_;
  double base_;
  std::vector<std::array<int, 3>> k_;
  std::vector<std::complex<double>> coeff_;  // components_ entries per mode
};

/// Velocity snapshots on a uniform time grid, kept in spectral form.
struct VelocityHistory {
  std::vector<double> times;
  std::vector<Spectrum> u_hat;

  static VelocityHistory from_fields(std::vector<double> times, const std::vector<Field>& u);
  /// Steady field sampled on [0, T] with step dt.
  static VelocityHistory steady(const Field& u, double T, double dt);
  /// s = T - t with u -> -u, so integrating it runs the flow backwards.
  VelocityHistory reversed() const;
  double dt() const;
  std::size_t size() const { return times.size(); }
};

/// Characteristics dX/dt = u(t, X), X(0) = y, with DX from the variational
/// equation d(DX)/dt = grad u(X) DX. Positions live in the universal cover.
struct FlowMap {
  int dim = 2;
  std::vector<double> times;
  std::vector<Point> labels;
  std::vector<double> X;   ///< [time][label][dim]
  std::vector<double> DX;  ///< [time][label][dim * dim]
  std::vector<double> J;   ///< [time][label]

  std::size_t num_labels() const { return labels.size(); }
  Point position(std::size_t ti, std::size_t label) const;
  /// Wrapped into [0, L)^d.
  Point wrapped_position(std::size_t ti, std::size_t label, double side) const;
  Matrix jacobian(std::size_t ti, std::size_t label) const;
  double det(std::size_t ti, std::size_t label) const { return J[ti * labels.size() + label]; }
  /// A = DX^{-1}.
  Matrix inverse_jacobian(std::size_t ti, std::size_t label) const;
  Matrix adjugate(std::size_t ti, std::size_t label) const;
};

double determinant(const Matrix& m, int dim);
Matrix adjugate(const Matrix& m, int dim);
Matrix invert(const Matrix& m, int dim);

/// Every `stride`-th grid point along each axis.
std::vector<Point> grid_labels(const Torus& torus, int stride = 1);

/// Classical RK4 on the characteristics over [t_0, t_0 + T]; dt must equal the
/// history spacing. Midpoint velocities come from cubic Lagrange interpolation
/// in time. Throws NumericalAbort naming the label when values stop being finite.
FlowMap integrate_flow(const VelocityHistory& u, const std::vector<Point>& labels, double T, double dt);

/// max over labels and times of |rho(t, X) J - rho0(y)| / ||rho0||_inf.
double mass_identity_check(const FlowMap& flow, const std::vector<Field>& rho, const Field& rho0);

/// Measured quantities of the Lagrangian uniqueness estimate for two runs.
struct UniquenessGap {
  TimeSeries gap;               ///< ||sqrt(rho0) (v_b - v_a)(t)||_{L2} over the labels
  double grad_gap_integral = 0.0;  ///< int_0^T ||grad_y (v_b - v_a)||_{L2}^2 dt
  double grad_integral_a = 0.0;    ///< int_0^T ||grad u_a||_inf dt
  double grad_integral_b = 0.0;
  double weighted_grad_a = 0.0;    ///< ||t^{1/2} grad u_a||_{L2(0,T; L_inf)}
  double weighted_grad_b = 0.0;
};

/// Lagrangian velocity gap v(t, y) = u(t, X(t, y)) between two runs, sampled at
/// the times of run a (which must also be times of run b). Labels are every
/// `stride`-th point of rho0_a's grid. Initial data must agree to 1e-10 at the
/// labels unless allow_different_data is set.
UniquenessGap uniqueness_gap(const VelocityHistory& a, const Field& rho0_a, const VelocityHistory& b,
                             const Field& rho0_b, int stride = 1, bool allow_different_data = false);

struct WeightedGradientNorms {
  double I1 = 0.0;   ///< int ||grad u||_inf dt
  double I2 = 0.0;   ///< int t ||grad u||_inf^2 dt
  double rhs = 0.0;  ///< ||t grad^2 u||_{L_{4,1}(L_4)}^{1/2} ||grad^2 u||_{L_{4/3,1}(L_{4/3})}^{1/2}
};

/// From the series grad_u_inf, t_hess_u_L4 and hess_u_L1.33333 (rhs is 0 when
/// the Hessian series are empty). ||t^{-1/2}||_{L_{2,inf}} = 1 is folded in.
WeightedGradientNorms weighted_gradient_norms(const TimeSeries& grad_u_inf, const TimeSeries& t_hess_u_L4,
                                              const TimeSeries& hess_u_L43);

/// max over labels and times of |Id - A(t, y)| (Frobenius) / int_0^t ||grad u||_inf.
double neumann_ratio(const FlowMap& flow, const TimeSeries& grad_u_inf);

/// Residual of the Liouville identity dJ/dt = (div u)(X) J measured with
/// five-point centered differences of J, relative to max |dJ/dt| + max |div u J|.
double liouville_residual(const FlowMap& flow, const VelocityHistory& u);

/// Field snapshot followed by a "FLOW" section: u32 dim, u32 labels, u32 times,
/// then times, labels, X, DX, J as f64 arrays.
void write_flow(std::ostream& out, const Field& field, const FlowMap& flow);
FlowMap read_flow(std::istream& in, Field* field = nullptr);
void save_flow(const std::string& path, const Field& field, const FlowMap& flow);
FlowMap load_flow(const std::string& path, Field* field = nullptr);

}  // namespace pgl
