#include "pgl/lagrangian.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "pgl/errors.hpp"
#include "pgl/lorentz.hpp"
#include "pgl/snapshot.hpp"
#include "pgl/spectral.hpp"

namespace pgl {

namespace {

using cplx = std::complex<double>;

bool same_time(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(a)); }

double frobenius_distance_to_identity(const Matrix& m, int d) {
  double s = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const double v = m[static_cast<std::size_t>(i * d + j)] - (i == j ? 1.0 : 0.0);
      s += v * v;
    }
  return std::sqrt(s);
}

// Spectrum at the midpoint of [t_i, t_{i+1}] by Lagrange interpolation in time.
Spectrum midpoint_spectrum(const VelocityHistory& h, std::size_t i) {
  const std::size_t n = h.size();
  std::vector<std::pair<std::size_t, double>> w;
  if (n == 2) {
    w = {{0, 0.5}, {1, 0.5}};
  } else if (n == 3) {
    if (i == 0)
      w = {{0, 3.0 / 8}, {1, 0.75}, {2, -1.0 / 8}};
    else
      w = {{0, -1.0 / 8}, {1, 0.75}, {2, 3.0 / 8}};
  } else if (i == 0) {
    w = {{0, 5.0 / 16}, {1, 15.0 / 16}, {2, -5.0 / 16}, {3, 1.0 / 16}};
  } else if (i + 2 == n) {
    w = {{n - 4, 1.0 / 16}, {n - 3, -5.0 / 16}, {n - 2, 15.0 / 16}, {n - 1, 5.0 / 16}};
  } else {
    w = {{i - 1, -1.0 / 16}, {i, 9.0 / 16}, {i + 1, 9.0 / 16}, {i + 2, -1.0 / 16}};
  }
  Spectrum out(h.u_hat[0].torus(), h.u_hat[0].components());
  for (const auto& [idx, c] : w) out.add_scaled(h.u_hat[idx], c);
  return out;
}

struct Characteristic {
  double x[3];
  double D[9];
};

// (dX/dt, dDX/dt) at time level interpolated by `ip`.
void flow_rhs(const SpectralInterpolator& ip, int d, const Characteristic& s, Characteristic& out) {
  Point p{s.x[0], s.x[1], s.x[2]};
  double u[3], g[9];
  ip.evaluate(p, u, g);
  for (int a = 0; a < d; ++a) out.x[a] = u[a];
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      double acc = 0.0;
      for (int k = 0; k < d; ++k) acc += g[i * d + k] * s.D[k * d + j];
      out.D[i * d + j] = acc;
    }
}

void axpy(const Characteristic& base, double h, const Characteristic& k, Characteristic& out, int d) {
  for (int a = 0; a < d; ++a) out.x[a] = base.x[a] + h * k.x[a];
  for (int a = 0; a < d * d; ++a) out.D[a] = base.D[a] + h * k.D[a];
  for (int a = d; a < 3; ++a) out.x[a] = 0.0;
}

bool finite(const Characteristic& c, int d) {
  for (int a = 0; a < d; ++a)
    if (!std::isfinite(c.x[a])) return false;
  for (int a = 0; a < d * d; ++a)
    if (!std::isfinite(c.D[a])) return false;
  return true;
}

double grad_sup(const Spectrum& uh) {
  return lp_norm(inverse(spectral_gradient(uh)), kInfinity);
}

}  // namespace

SpectralInterpolator::SpectralInterpolator(const Spectrum& s)
    : dim_(s.torus().dim()), components_(s.components()), kmax_(0), base_(s.torus().base_frequency()) {
  const Torus& t = s.torus();
  double peak = 0.0;
  for (const auto& z : s.coefficients()) peak = std::max(peak, std::abs(z));
  const double cut = 1e-14 * peak;
  const double norm = 1.0 / static_cast<double>(t.num_points());
  for (std::size_t m = 0; m < t.num_modes(); ++m) {
    if (t.is_nyquist(m)) continue;
    bool active = false;
    for (int c = 0; c < components_; ++c)
      if (std::abs(s.component(c)[m]) > cut) active = true;
    if (!active || peak == 0.0) continue;
    const auto k = t.wavevector(m);
    for (int a = 0; a < dim_; ++a) kmax_ = std::max(kmax_, std::abs(k[static_cast<std::size_t>(a)]));
    k_.push_back(k);
    const double w = t.hermitian_weight(m) * norm;
    for (int c = 0; c < components_; ++c) coeff_.push_back(w * s.component(c)[m]);
  }
}

void SpectralInterpolator::evaluate(const Point& x, double* values) const {
  std::vector<double> unused(static_cast<std::size_t>(components_ * dim_));
  evaluate(x, values, unused.data());
}

void SpectralInterpolator::evaluate(const Point& x, double* values, double* gradient) const {
  const int width = 2 * kmax_ + 1;
  thread_local std::vector<cplx> ex;
  ex.assign(static_cast<std::size_t>(3 * width), cplx{1.0, 0.0});
  for (int a = 0; a < dim_; ++a)
    for (int j = -kmax_; j <= kmax_; ++j)
      ex[static_cast<std::size_t>(a * width + j + kmax_)] = std::polar(1.0, base_ * j * x[static_cast<std::size_t>(a)]);
  for (int c = 0; c < components_; ++c) {
    values[c] = 0.0;
    for (int j = 0; j < dim_; ++j) gradient[c * dim_ + j] = 0.0;
  }
  for (std::size_t m = 0; m < k_.size(); ++m) {
    const auto& k = k_[m];
    cplx e = ex[static_cast<std::size_t>(k[0] + kmax_)] * ex[static_cast<std::size_t>(width + k[1] + kmax_)];
    if (dim_ == 3) e *= ex[static_cast<std::size_t>(2 * width + k[2] + kmax_)];
    for (int c = 0; c < components_; ++c) {
      const cplx z = coeff_[m * static_cast<std::size_t>(components_) + static_cast<std::size_t>(c)] * e;
      values[c] += z.real();
      for (int j = 0; j < dim_; ++j) gradient[c * dim_ + j] -= base_ * k[static_cast<std::size_t>(j)] * z.imag();
    }
  }
}

VelocityHistory VelocityHistory::from_fields(std::vector<double> times, const std::vector<Field>& u) {
  if (times.size() != u.size() || times.size() < 2)
    throw InvalidArgument("velocity history needs at least two snapshots with matching times");
  VelocityHistory h;
  h.times = std::move(times);
  for (const auto& f : u) {
    if (f.components() != f.torus().dim()) throw InvalidArgument("velocity history needs vector fields");
    h.u_hat.push_back(forward(f));
  }
  return h;
}

VelocityHistory VelocityHistory::steady(const Field& u, double T, double dt) {
  const long steps = std::lround(T / dt);
  if (steps < 1) throw InvalidArgument("steady history needs T >= dt");
  VelocityHistory h;
  const Spectrum s = forward(u);
  for (long n = 0; n <= steps; ++n) {
    h.times.push_back(static_cast<double>(n) * dt);
    h.u_hat.push_back(s);
  }
  return h;
}

VelocityHistory VelocityHistory::reversed() const {
  VelocityHistory r;
  const double T = times.back();
  for (std::size_t i = times.size(); i-- > 0;) {
    r.times.push_back(T - times[i]);
    Spectrum s = u_hat[i];
    s *= -1.0;
    r.u_hat.push_back(std::move(s));
  }
  return r;
}

double VelocityHistory::dt() const {
  if (times.size() < 2) throw InvalidArgument("velocity history needs at least two snapshots");
  const double h = times[1] - times[0];
  for (std::size_t i = 1; i < times.size(); ++i)
    if (std::abs(times[i] - times[i - 1] - h) > 1e-9 * h) throw InvalidArgument("velocity history must be uniform in time");
  return h;
}

Point FlowMap::position(std::size_t ti, std::size_t label) const {
  Point p{0.0, 0.0, 0.0};
  const std::size_t base = (ti * labels.size() + label) * static_cast<std::size_t>(dim);
  for (int a = 0; a < dim; ++a) p[static_cast<std::size_t>(a)] = X[base + static_cast<std::size_t>(a)];
  return p;
}

Point FlowMap::wrapped_position(std::size_t ti, std::size_t label, double side) const {
  Point p = position(ti, label);
  for (int a = 0; a < dim; ++a) {
    double& v = p[static_cast<std::size_t>(a)];
    v -= side * std::floor(v / side);
  }
  return p;
}

Matrix FlowMap::jacobian(std::size_t ti, std::size_t label) const {
  Matrix m{};
  const std::size_t dd = static_cast<std::size_t>(dim * dim);
  const std::size_t base = (ti * labels.size() + label) * dd;
  for (std::size_t a = 0; a < dd; ++a) m[a] = DX[base + a];
  return m;
}

Matrix FlowMap::inverse_jacobian(std::size_t ti, std::size_t label) const { return invert(jacobian(ti, label), dim); }

Matrix FlowMap::adjugate(std::size_t ti, std::size_t label) const { return pgl::adjugate(jacobian(ti, label), dim); }

double determinant(const Matrix& m, int dim) {
  if (dim == 2) return m[0] * m[3] - m[1] * m[2];
  return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) + m[2] * (m[3] * m[7] - m[4] * m[6]);
}

Matrix adjugate(const Matrix& m, int dim) {
  Matrix a{};
  if (dim == 2) {
    a[0] = m[3];
    a[1] = -m[1];
    a[2] = -m[2];
    a[3] = m[0];
    return a;
  }
  a[0] = m[4] * m[8] - m[5] * m[7];
  a[1] = m[2] * m[7] - m[1] * m[8];
  a[2] = m[1] * m[5] - m[2] * m[4];
  a[3] = m[5] * m[6] - m[3] * m[8];
  a[4] = m[0] * m[8] - m[2] * m[6];
  a[5] = m[2] * m[3] - m[0] * m[5];
  a[6] = m[3] * m[7] - m[4] * m[6];
  a[7] = m[1] * m[6] - m[0] * m[7];
  a[8] = m[0] * m[4] - m[1] * m[3];
  return a;
}

Matrix invert(const Matrix& m, int dim) {
  const double det = determinant(m, dim);
  if (det == 0.0 || !std::isfinite(det)) throw NumericalAbort("singular flow Jacobian");
  Matrix a = adjugate(m, dim);
  for (int i = 0; i < dim * dim; ++i) a[static_cast<std::size_t>(i)] /= det;
  return a;
}

std::vector<Point> grid_labels(const Torus& torus, int stride) {
  if (stride < 1 || torus.n() % stride != 0) throw InvalidArgument("label stride must divide N");
  std::vector<Point> out;
  const int m = torus.n() / stride;
  const double h = torus.spacing() * stride;
  if (torus.dim() == 2) {
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) out.push_back({i * h, j * h, 0.0});
  } else {
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) out.push_back({i * h, j * h, k * h});
  }
  return out;
}

FlowMap integrate_flow(const VelocityHistory& u, const std::vector<Point>& labels, double T, double dt) {
  const double h = u.dt();
  if (!(dt > 0.0) || std::abs(dt - h) > 1e-9 * h) throw InvalidArgument("flow dt must equal the velocity history spacing");
  const long steps = std::lround(T / dt);
  if (steps < 1 || std::abs(static_cast<double>(steps) * dt - T) > 1e-9 * std::max(1.0, T))
    throw InvalidArgument("flow horizon must be a positive multiple of dt");
  if (static_cast<std::size_t>(steps) + 1 > u.size()) throw InvalidArgument("velocity history is shorter than the flow horizon");
  if (labels.empty()) throw InvalidArgument("flow needs at least one label");

  FlowMap flow;
  const int d = u.u_hat[0].torus().dim();
  const std::size_t nl = labels.size();
  const std::size_t dd = static_cast<std::size_t>(d * d);
  flow.dim = d;
  flow.labels = labels;
  std::vector<Characteristic> state(nl);
  for (std::size_t l = 0; l < nl; ++l) {
    Characteristic& c = state[l];
    std::memset(&c, 0, sizeof c);
    for (int a = 0; a < d; ++a) {
      c.x[a] = labels[l][static_cast<std::size_t>(a)];
      c.D[a * d + a] = 1.0;
    }
  }
  auto record = [&](double t) {
    flow.times.push_back(t);
    for (std::size_t l = 0; l < nl; ++l) {
      for (int a = 0; a < d; ++a) flow.X.push_back(state[l].x[a]);
      Matrix m{};
      for (std::size_t a = 0; a < dd; ++a) {
        flow.DX.push_back(state[l].D[a]);
        m[a] = state[l].D[a];
      }
      flow.J.push_back(determinant(m, d));
    }
  };
  record(u.times[0]);

  SpectralInterpolator now(u.u_hat[0]);
  for (long n = 0; n < steps; ++n) {
    const auto i = static_cast<std::size_t>(n);
    const SpectralInterpolator mid(midpoint_spectrum(u, i));
    SpectralInterpolator next(u.u_hat[i + 1]);
    for (std::size_t l = 0; l < nl; ++l) {
      Characteristic& s = state[l];
      Characteristic k1, k2, k3, k4, tmp;
      flow_rhs(now, d, s, k1);
      axpy(s, 0.5 * dt, k1, tmp, d);
      flow_rhs(mid, d, tmp, k2);
      axpy(s, 0.5 * dt, k2, tmp, d);
      flow_rhs(mid, d, tmp, k3);
      axpy(s, dt, k3, tmp, d);
      flow_rhs(next, d, tmp, k4);
      for (int a = 0; a < d; ++a) s.x[a] += dt / 6.0 * (k1.x[a] + 2.0 * (k2.x[a] + k3.x[a]) + k4.x[a]);
      for (std::size_t a = 0; a < dd; ++a) s.D[a] += dt / 6.0 * (k1.D[a] + 2.0 * (k2.D[a] + k3.D[a]) + k4.D[a]);
      if (!finite(s, d))
        throw NumericalAbort("flow integration produced non-finite values for label " + std::to_string(l) +
                             " at step " + std::to_string(n + 1));
    }
    record(u.times[i + 1]);
    now = std::move(next);
  }
  return flow;
}

double mass_identity_check(const FlowMap& flow, const std::vector<Field>& rho, const Field& rho0) {
  if (rho.size() != flow.times.size()) throw InvalidArgument("density history and flow have mismatched time grids");
  const SpectralInterpolator ip0(forward(rho0));
  double scale = 0.0;
  for (double v : rho0.values()) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) throw InvalidArgument("mass identity needs a nonzero initial density");
  std::vector<double> r0(flow.num_labels());
  for (std::size_t l = 0; l < flow.num_labels(); ++l) ip0.evaluate(flow.labels[l], &r0[l]);
  double worst = 0.0;
  for (std::size_t ti = 0; ti < flow.times.size(); ++ti) {
    const SpectralInterpolator ip(forward(rho[ti]));
    for (std::size_t l = 0; l < flow.num_labels(); ++l) {
      double r = 0.0;
      ip.evaluate(flow.position(ti, l), &r);
      worst = std::max(worst, std::abs(r * flow.det(ti, l) - r0[l]));
    }
  }
  return worst / scale;
}

UniquenessGap uniqueness_gap(const VelocityHistory& a, const Field& rho0_a, const VelocityHistory& b,
                             const Field& rho0_b, int stride, bool allow_different_data) {
  const Torus& torus = rho0_a.torus();
  const int d = torus.dim();
  if (b.u_hat.empty() || b.u_hat[0].torus().dim() != d) throw InvalidArgument("uniqueness gap needs runs of equal dimension");
  if (!same_time(a.times.front(), b.times.front())) throw InvalidArgument("uniqueness gap needs runs with a common start");
  const auto labels = grid_labels(torus, stride);
  const std::size_t nl = labels.size();
  const double weight = std::pow(torus.spacing() * stride, d);

  const SpectralInterpolator ra(forward(rho0_a)), rb(forward(rho0_b));
  std::vector<double> rho0(nl);
  {
    const SpectralInterpolator ua(a.u_hat[0]), ub(b.u_hat[0]);
    double diff = 0.0, scale = 0.0;
    for (std::size_t l = 0; l < nl; ++l) {
      double va[3], vb[3], x = 0.0, y = 0.0;
      ra.evaluate(labels[l], &x);
      rb.evaluate(labels[l], &y);
      rho0[l] = x;
      diff = std::max(diff, std::abs(x - y));
      scale = std::max(scale, std::abs(x));
      ua.evaluate(labels[l], va);
      ub.evaluate(labels[l], vb);
      for (int c = 0; c < d; ++c) {
        diff = std::max(diff, std::abs(va[c] - vb[c]));
        scale = std::max(scale, std::abs(va[c]));
      }
    }
    if (!allow_different_data && diff > 1e-10 * std::max(scale, 1e-300))
      throw InvalidArgument("uniqueness gap needs identical initial data");
  }

  const double T = a.times.back() - a.times.front();
  const FlowMap fa = integrate_flow(a, labels, T, a.dt());
  const FlowMap fb = integrate_flow(b, labels, T, b.dt());

  UniquenessGap out;
  std::vector<double> times, gap, grad_gap, ga, gb;
  std::size_t jb = 0;
  for (std::size_t ia = 0; ia < fa.times.size(); ++ia) {
    const double t = fa.times[ia];
    while (jb < fb.times.size() && !same_time(fb.times[jb], t) && fb.times[jb] < t) ++jb;
    if (jb == fb.times.size() || !same_time(fb.times[jb], t))
      throw InvalidArgument("uniqueness gap needs the times of run a among the times of run b");
    const SpectralInterpolator ia_ip(a.u_hat[ia]), ib_ip(b.u_hat[jb]);
    double g2 = 0.0, dg2 = 0.0;
    for (std::size_t l = 0; l < nl; ++l) {
      double va[3], vb[3], Ga[9], Gb[9];
      ia_ip.evaluate(fa.position(ia, l), va, Ga);
      ib_ip.evaluate(fb.position(jb, l), vb, Gb);
      const Matrix Da = fa.jacobian(ia, l), Db = fb.jacobian(jb, l);
      for (int c = 0; c < d; ++c) {
        g2 += rho0[l] * (vb[c] - va[c]) * (vb[c] - va[c]);
        for (int j = 0; j < d; ++j) {
          double lag_a = 0.0, lag_b = 0.0;
          for (int k = 0; k < d; ++k) {
            lag_a += Ga[c * d + k] * Da[static_cast<std::size_t>(k * d + j)];
            lag_b += Gb[c * d + k] * Db[static_cast<std::size_t>(k * d + j)];
          }
          dg2 += (lag_b - lag_a) * (lag_b - lag_a);
        }
      }
    }
    times.push_back(t);
    gap.push_back(std::sqrt(std::max(g2, 0.0) * weight));
    grad_gap.push_back(dg2 * weight);
    ga.push_back(grad_sup(a.u_hat[ia]));
    gb.push_back(grad_sup(b.u_hat[jb]));
  }
  out.gap = TimeSeries(times, gap);
  if (times.size() >= 2) {
    out.grad_gap_integral = integrate(TimeSeries(times, grad_gap));
    const TimeSeries sa(times, ga), sb(times, gb);
    out.grad_integral_a = integrate(sa);
    out.grad_integral_b = integrate(sb);
    out.weighted_grad_a = std::sqrt(integrate(sa.map([](double t, double g) { return t * g * g; })));
    out.weighted_grad_b = std::sqrt(integrate(sb.map([](double t, double g) { return t * g * g; })));
  }
  return out;
}

WeightedGradientNorms weighted_gradient_norms(const TimeSeries& grad_u_inf, const TimeSeries& t_hess_u_L4,
                                              const TimeSeries& hess_u_L43) {
  WeightedGradientNorms out;
  if (grad_u_inf.size() >= 2) {
    out.I1 = integrate(grad_u_inf);
    out.I2 = integrate(grad_u_inf.map([](double t, double g) { return t * g * g; }));
  }
  if (!t_hess_u_L4.empty() && !hess_u_L43.empty())
    out.rhs = std::sqrt(lorentz_norm(t_hess_u_L4, {4.0, 1.0})) * std::sqrt(lorentz_norm(hess_u_L43, {4.0 / 3.0, 1.0}));
  return out;
}

double neumann_ratio(const FlowMap& flow, const TimeSeries& grad_u_inf) {
  if (grad_u_inf.size() != flow.times.size()) throw InvalidArgument("gradient series and flow have mismatched time grids");
  for (std::size_t i = 0; i < flow.times.size(); ++i)
    if (!same_time(grad_u_inf.times()[i], flow.times[i]))
      throw InvalidArgument("gradient series and flow have mismatched time grids");
  const auto cum = cumulative_integral(grad_u_inf);
  double worst = 0.0;
  for (std::size_t ti = 1; ti < flow.times.size(); ++ti) {
    if (!(cum[ti] > 0.0)) continue;
    for (std::size_t l = 0; l < flow.num_labels(); ++l)
      worst = std::max(worst, frobenius_distance_to_identity(flow.inverse_jacobian(ti, l), flow.dim) / cum[ti]);
  }
  return worst;
}

double liouville_residual(const FlowMap& flow, const VelocityHistory& u) {
  const int d = flow.dim;
  std::size_t offset = 0;
  while (offset < u.size() && !same_time(u.times[offset], flow.times.front())) ++offset;
  if (offset + flow.times.size() > u.size()) throw InvalidArgument("velocity history does not cover the flow times");
  if (flow.times.size() < 5) throw InvalidArgument("Liouville residual needs at least five flow times");
  const double dt = flow.times[1] - flow.times[0];
  double num = 0.0, scale = 0.0;
  for (std::size_t ti = 2; ti + 2 < flow.times.size(); ++ti) {
    const SpectralInterpolator ip(u.u_hat[offset + ti]);
    for (std::size_t l = 0; l < flow.num_labels(); ++l) {
      double v[3], g[9];
      ip.evaluate(flow.position(ti, l), v, g);
      double div = 0.0, gn = 0.0;
      for (int a = 0; a < d; ++a) div += g[a * d + a];
      for (int a = 0; a < d * d; ++a) gn += g[a] * g[a];
      const double J = flow.det(ti, l);
      const double dJ = (8.0 * (flow.det(ti + 1, l) - flow.det(ti - 1, l)) - flow.det(ti + 2, l) + flow.det(ti - 2, l)) /
                        (12.0 * dt);
      num = std::max(num, std::abs(dJ - div * J));
      scale = std::max(scale, std::sqrt(gn) * std::abs(J));
    }
  }
  return scale == 0.0 ? num : num / scale;
}

void write_flow(std::ostream& out, const Field& field, const FlowMap& flow) {
  write_field(out, field);
  out.write("FLOW", 4);
  io::write_u32(out, static_cast<std::uint32_t>(flow.dim));
  io::write_u32(out, static_cast<std::uint32_t>(flow.num_labels()));
  io::write_u32(out, static_cast<std::uint32_t>(flow.times.size()));
  for (double t : flow.times) io::write_f64(out, t);
  for (const auto& p : flow.labels)
    for (int a = 0; a < flow.dim; ++a) io::write_f64(out, p[static_cast<std::size_t>(a)]);
  for (double v : flow.X) io::write_f64(out, v);
  for (double v : flow.DX) io::write_f64(out, v);
  for (double v : flow.J) io::write_f64(out, v);
  if (!out) throw Error("failed to write flow snapshot");
}

FlowMap read_flow(std::istream& in, Field* field) {
  Field f = read_field(in);
  if (field) *field = std::move(f);
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, "FLOW", 4) != 0) throw Error("snapshot has no FLOW section");
  FlowMap flow;
  flow.dim = static_cast<int>(io::read_u32(in));
  if (flow.dim != 2 && flow.dim != 3) throw Error("FLOW section has an invalid dimension");
  const std::size_t nl = io::read_u32(in);
  const std::size_t nt = io::read_u32(in);
  const auto d = static_cast<std::size_t>(flow.dim);
  for (std::size_t i = 0; i < nt; ++i) flow.times.push_back(io::read_f64(in));
  for (std::size_t l = 0; l < nl; ++l) {
    Point p{0.0, 0.0, 0.0};
    for (std::size_t a = 0; a < d; ++a) p[a] = io::read_f64(in);
    flow.labels.push_back(p);
  }
  for (std::size_t i = 0; i < nt * nl * d; ++i) flow.X.push_back(io::read_f64(in));
  for (std::size_t i = 0; i < nt * nl * d * d; ++i) flow.DX.push_back(io::read_f64(in));
  for (std::size_t i = 0; i < nt * nl; ++i) flow.J.push_back(io::read_f64(in));
  return flow;
}

void save_flow(const std::string& path, const Field& field, const FlowMap& flow) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  write_flow(out, field, flow);
}

FlowMap load_flow(const std::string& path, Field* field) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return read_flow(in, field);
}

}  // namespace pgl
