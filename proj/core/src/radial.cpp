#include "translators/radial.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "translators/error.hpp"

namespace translators {

namespace {

constexpr double kSlopeBound = 0.999;

double source(double y, double lambda, RadialAxis axis) {
  const double g = 1.0 / std::sqrt(1.0 - y * y);
  return axis == RadialAxis::TimelikeAxis ? g - lambda : -g - lambda;
}

}  // namespace

double phi(double y, double lambda, RadialAxis axis) {
  if (!(std::abs(y) < 1.0)) throw DomainError("phi: requires |y| < 1");
  return source(y, lambda, axis);
}

double f(double y) {
  if (!(std::abs(y) < 1.0)) throw DomainError("f: requires |y| < 1");
  return y / std::sqrt(1.0 - y * y);
}

double f_inv(double y) { return y / std::sqrt(1.0 + y * y); }

std::vector<double> cumulative_simpson(std::span<const double> y, double h) {
  const std::size_t n = y.size();
  std::vector<double> I(n, 0.0);
  if (n < 2) return I;
  if (n == 2) {
    I[1] = 0.5 * h * (y[0] + y[1]);
    return I;
  }
  // First panel from the quadratic through nodes 0..2.
  I[1] = h * (5.0 * y[0] + 8.0 * y[1] - y[2]) / 12.0;
  for (std::size_t i = 2; i < n; ++i) {
    if (i % 2 == 0)
      I[i] = I[i - 2] + h / 3.0 * (y[i - 2] + 4.0 * y[i - 1] + y[i]);
    else if (i >= 3)
      I[i] = I[i - 3] + 3.0 * h / 8.0 * (y[i - 3] + 3.0 * y[i - 2] + 3.0 * y[i - 1] + y[i]);
  }
  return I;
}

std::vector<double> apply_T(std::span<const double> w, double lambda, double R, RadialAxis axis) {
  const std::size_t n = w.size();
  if (n < 3) throw DomainError("apply_T: need at least 3 grid points");
  if (!(R > 0.0)) throw DomainError("apply_T: R must be > 0");
  const double h = R / static_cast<double>(n - 1);
  std::vector<double> integrand(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(std::abs(w[i]) < 1.0)) throw DomainError("apply_T: slope bound |w| < 1 violated");
    integrand[i] = static_cast<double>(i) * h * source(w[i], lambda, axis);
  }
  const auto I = cumulative_simpson(integrand, h);
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) out[i] = f_inv(2.0 * I[i] / (static_cast<double>(i) * h));
  return out;
}

double initial_radius(double lambda, RadialAxis axis) {
  const double p0 = std::abs(source(0.0, lambda, axis));
  if (p0 == 0.0) return 0.5;
  // Positive root of R^2/2 + R - 1/(2 p0) = 0.
  const double R = -1.0 + std::sqrt(1.0 + 1.0 / p0);
  return std::min(0.5, R);
}

RadialSolution solve_radial(double lambda, RadialAxis axis, const RadialConfig& cfg) {
  if (axis == RadialAxis::TimelikeAxis ? !(lambda > 0.0) : !(lambda >= 0.0))
    throw DomainError("solve_radial: lambda must be > 0 (>= 0 for a spacelike axis)");
  if (cfg.n_grid < 9 || cfg.n_grid % 2 == 0) throw DomainError("solve_radial: n_grid must be odd and >= 9");
  if (!(cfg.tol_fp > 0.0) || cfg.max_iter < 1) throw DomainError("solve_radial: invalid tolerance or iteration budget");
  double R = cfg.R > 0.0 ? cfg.R : initial_radius(lambda, axis);
  const std::size_t n = static_cast<std::size_t>(cfg.n_grid);

  for (int halving = 0; halving <= cfg.max_halvings; ++halving, R *= 0.5) {
    RadialSolution sol;
    sol.diagnostics.R_used = R;
    sol.diagnostics.halvings = halving;
    std::vector<double> w(n, 0.0);
    bool ok = false;
    for (int k = 0; k < cfg.max_iter; ++k) {
      std::vector<double> next = apply_T(w, lambda, R, axis);
      double d = 0.0, wmax = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        d = std::max(d, std::abs(next[i] - w[i]));
        wmax = std::max(wmax, std::abs(next[i]));
      }
      w.swap(next);
      sol.diagnostics.d.push_back(d);
      sol.diagnostics.iterations = k + 1;
      if (!std::isfinite(d) || wmax > kSlopeBound) break;
      if (d <= cfg.tol_fp) {
        ok = true;
        break;
      }
    }
    if (!ok) continue;
    const auto& dk = sol.diagnostics.d;
    for (std::size_t k = 1; k < dk.size(); ++k)
      if (dk[k - 1] > 1e2 * cfg.tol_fp && dk[k] > 0.0)
        sol.diagnostics.q = dk[k] / dk[k - 1];
    sol.diagnostics.converged = true;
    auto& p = sol.profile;
    p.lambda = lambda;
    p.axis = axis;
    p.R = R;
    p.r.resize(n);
    const double h = R / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) p.r[i] = static_cast<double>(i) * h;
    p.u = cumulative_simpson(w, h);
    p.w = std::move(w);
    return sol;
  }
  throw NumericError("solve_radial: no contraction after the allowed R halvings");
}

double second_deriv_at_origin(const RadialProfile& p) {
  if (p.r.size() != p.u.size() || p.r.size() < 8) throw DomainError("second_deriv_at_origin: profile not converged");
  const double rmax = p.R / 4.0;
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < p.r.size() && p.r[i] <= rmax * (1.0 + 1e-12); ++i) idx.push_back(i);
  if (idx.size() < 8) throw DomainError("second_deriv_at_origin: fewer than 8 nodes in [0, R/4]");
  Eigen::MatrixXd A(idx.size(), 2);
  Eigen::VectorXd b(idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const double x = p.r[idx[k]] / rmax;
    A(k, 0) = x * x;
    A(k, 1) = x * x * x * x;
    b(k) = p.u[idx[k]];
  }
  const Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
  return 2.0 * c(0) / (rmax * rmax);
}

RotCase radial_case(RadialAxis axis) { return axis == RadialAxis::TimelikeAxis ? RotCase::TA_S : RotCase::SA_T; }

OrbitState handoff_to_phase_plane(const RadialProfile& p, double r_h) {
  if (p.r.empty()) throw DomainError("handoff_to_phase_plane: empty profile");
  if (!(r_h > 1e-5) || r_h > p.R * (1.0 + 1e-12)) throw DomainError("handoff_to_phase_plane: r_h outside (10 eps_axis, R]");
  const double h = p.R / static_cast<double>(p.r.size() - 1);
  const std::size_t i = std::min(p.r.size() - 1, static_cast<std::size_t>(std::lround(r_h / h)));
  if (i == 0) throw DomainError("handoff_to_phase_plane: r_h rounds to the axis node");
  std::vector<double> ds(p.w.size());
  for (std::size_t k = 0; k < ds.size(); ++k) ds[k] = std::sqrt(1.0 - p.w[k] * p.w[k]);
  const auto s = cumulative_simpson(std::span<const double>(ds).first(i + 1), h);
  return {p.r[i], std::atanh(p.w[i]), s[i], p.u[i]};
}

Orbit radial_orbit(const RadialProfile& p, double r_h, const StopPolicy& policy) {
  const OrbitState hand = handoff_to_phase_plane(p, r_h);
  Orbit o;
  o.cas = radial_case(p.axis);
  o.lambda = p.lambda;
  const double h = p.R / static_cast<double>(p.r.size() - 1);
  std::vector<double> ds(p.w.size());
  for (std::size_t k = 0; k < ds.size(); ++k) ds[k] = std::sqrt(1.0 - p.w[k] * p.w[k]);
  const auto s = cumulative_simpson(ds, h);
  for (std::size_t i = 1; i < p.r.size() && p.r[i] < hand.r; ++i) o.samples.push_back({p.r[i], std::atanh(p.w[i]), s[i], p.u[i]});
  HalfOrbit fwd = integrate_orbit(o.cas, hand, p.lambda, +1, policy);
  o.samples.insert(o.samples.end(), fwd.samples.begin(), fwd.samples.end());
  o.forward_end = fwd.end;
  o.backward_end.kind = EndKind::RadialOrigin;
  o.backward_end.slope_at_axis = 0.0;
  o.backward_end.detail = "orthogonal arrival at the axis (radial profile)";
  return o;
}

ChartJet radial_graph_jet(RadialAxis axis, double r, double u, double w, double w_prime, double t) {
  ChartJet j;
  if (axis == RadialAxis::TimelikeAxis) {
    const double c = std::cos(t), n = std::sin(t);
    j.p = {r * c, r * n, u};
    j.ps = {c, n, w};
    j.pt = {-r * n, r * c, 0.0};
    j.pss = {0.0, 0.0, w_prime};
    j.pst = {-n, c, 0.0};
    j.ptt = {-r * c, -r * n, 0.0};
  } else {
    const double c = std::cosh(t), n = std::sinh(t);
    j.p = {u, r * n, r * c};
    j.ps = {w, n, c};
    j.pt = {0.0, r * c, r * n};
    j.pss = {w_prime, 0.0, 0.0};
    j.pst = {0.0, c, n};
    j.ptt = {0.0, r * n, r * c};
  }
  return j;
}

double radial_residual(const RadialProfile& p) {
  const std::size_t n = p.r.size();
  if (n < 9) throw DomainError("radial_residual: profile too short");
  const double h = p.R / static_cast<double>(n - 1);
  const double sgn = p.axis == RadialAxis::TimelikeAxis ? 1.0 : -1.0;
  double worst = 0.0;
  for (std::size_t i = 2; i + 2 < n; ++i) {
    if (p.r[i] < p.R / 20.0) continue;
    const double w = p.w[i];
    const double wp = (-p.w[i + 2] + 8.0 * p.w[i + 1] - 8.0 * p.w[i - 1] + p.w[i - 2]) / (12.0 * h);
    const double g = 1.0 - w * w;
    const double H = -0.5 * (wp / std::pow(g, 1.5) + w / (p.r[i] * std::sqrt(g)));
    // <N, v> = -1/sqrt(1-w^2) for the timelike axis (v = e3), +1/sqrt(1-w^2) for the spacelike axis (v = e1).
    const double nv = -sgn / std::sqrt(g);
    worst = std::max(worst, std::abs(H - nv - p.lambda));
  }
  return worst;
}

}  // namespace translators
