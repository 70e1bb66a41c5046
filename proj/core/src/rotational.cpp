#include "translators/rotational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

#include "ode_support.hpp"
#include "translators/curvature.hpp"
#include "translators/error.hpp"

namespace translators {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int sgn(double v) { return (v > 0.0) - (v < 0.0); }

bool timelike_axis(RotCase c) { return c == RotCase::TA_S || c == RotCase::TA_T; }

void check_lambda(RotCase c, double lambda) {
  if (!std::isfinite(lambda)) throw DomainError("rotational: lambda must be finite");
  // lambda = 0 is the translating-soliton limit, meaningful for the spacelike axis.
  if (timelike_axis(c) ? !(lambda > 0.0) : !(lambda >= 0.0))
    throw DomainError("rotational: lambda must be > 0 (>= 0 for a spacelike axis)");
}

// (r', theta', height') without the r > 0 check; y = (r, theta, height).
detail::State<3> raw_rhs(RotCase c, double lambda, const detail::State<3>& y) {
  const double r = y[0], ch = std::cosh(y[1]), sh = std::sinh(y[1]);
  switch (c) {
    case RotCase::TA_S: return {ch, 2.0 * (ch - lambda) - sh / r, sh};
    case RotCase::TA_T: return {sh, 2.0 * (sh - lambda) - ch / r, ch};
    case RotCase::SA_S: return {sh, -2.0 * (sh + lambda) - ch / r, ch};
    case RotCase::SA_T: return {ch, -2.0 * (ch + lambda) - sh / r, sh};
  }
  return {};
}

}  // namespace

std::string_view to_string(RotCase c) {
  switch (c) {
    case RotCase::TA_S: return "TA_S";
    case RotCase::TA_T: return "TA_T";
    case RotCase::SA_S: return "SA_S";
    case RotCase::SA_T: return "SA_T";
  }
  return "?";
}

std::optional<RotCase> parse_rot_case(std::string_view s) {
  for (RotCase c : {RotCase::TA_S, RotCase::TA_T, RotCase::SA_S, RotCase::SA_T})
    if (to_string(c) == s) return c;
  return std::nullopt;
}

std::string_view to_string(EndKind k) {
  switch (k) {
    case EndKind::AxisCusp: return "AxisCusp";
    case EndKind::RadialOrigin: return "RadialOrigin";
    case EndKind::ThetaAsymptote: return "ThetaAsymptote";
    case EndKind::Unbounded: return "Unbounded";
    case EndKind::TrivialLine: return "TrivialLine";
    case EndKind::Truncated: return "Truncated";
  }
  return "?";
}

LVec3 axis_direction(RotCase c) { return timelike_axis(c) ? e3 : e1; }

CausalClass surface_causality(RotCase c) {
  return (c == RotCase::TA_S || c == RotCase::SA_S) ? CausalClass::Spacelike : CausalClass::Timelike;
}

bool radial_is_cosh(RotCase c) { return c == RotCase::TA_S || c == RotCase::SA_T; }

PhaseVelocity system_rhs(RotCase c, const OrbitState& st, double lambda) {
  if (!(st.r > 0.0)) throw SingularityError("system_rhs: r must be > 0 (the axis is singular)");
  const auto d = raw_rhs(c, lambda, {st.r, st.theta, st.height});
  return {d[0], d[1], d[2]};
}

std::pair<double, double> principal_curvatures(RotCase c, const OrbitState& st, double lambda) {
  const PhaseVelocity d = system_rhs(c, st, lambda);
  return {-d.theta, -d.height / st.r};
}

std::optional<double> gamma(RotCase c, double theta, double lambda) {
  double g = 0.0;
  if (std::isinf(theta)) {
    const bool toward = (c == RotCase::TA_S || c == RotCase::TA_T) ? theta > 0 : theta < 0;
    if (!toward) return std::nullopt;
    return 0.5;
  }
  const double ch = std::cosh(theta), sh = std::sinh(theta);
  switch (c) {
    case RotCase::TA_S: g = sh / (2.0 * (ch - lambda)); break;
    case RotCase::TA_T: g = ch / (2.0 * (sh - lambda)); break;
    case RotCase::SA_S: g = -ch / (2.0 * (sh + lambda)); break;
    case RotCase::SA_T: g = -sh / (2.0 * (ch + lambda)); break;
  }
  // theta = 0 with lambda < 1 in TA_S is the boundary endpoint (0, 0).
  if (c == RotCase::TA_S && theta == 0.0 && lambda < 1.0) return 0.0;
  if (!std::isfinite(g) || !(g > 0.0)) return std::nullopt;
  return g;
}

GammaAsymptotes gamma_asymptotes(RotCase c, double lambda) {
  check_lambda(c, lambda);
  GammaAsymptotes a;
  switch (c) {
    case RotCase::TA_S:
      if (lambda > 1.0) {
        const double t0 = std::acosh(lambda);
        a.vertical = {-t0, t0};
      } else if (lambda == 1.0) {
        a.pole_at_zero = true;
      }
      break;
    case RotCase::TA_T: a.vertical = {std::asinh(lambda)}; break;
    case RotCase::SA_S: a.vertical = {-std::asinh(lambda)}; break;
    case RotCase::SA_T: break;
  }
  return a;
}

std::vector<std::pair<double, double>> gamma_domain(RotCase c, double lambda) {
  check_lambda(c, lambda);
  switch (c) {
    case RotCase::TA_S:
      if (lambda > 1.0) {
        const double t0 = std::acosh(lambda);
        return {{-t0, 0.0}, {t0, kInf}};
      }
      return {{0.0, kInf}};
    case RotCase::TA_T: return {{std::asinh(lambda), kInf}};
    case RotCase::SA_S: return {{-kInf, -std::asinh(lambda)}};
    case RotCase::SA_T: return {{-kInf, 0.0}};
  }
  return {};
}

namespace {

// Least-squares theta(r) ~ c0 + c1/r + c2/r^2 + c3/r^3 over samples with r >= r_min.
std::optional<std::pair<double, double>> tail_fit(const std::vector<OrbitState>& samples, double r_min) {
  std::vector<const OrbitState*> pts;
  double rlo = kInf, rhi = 0.0;
  for (const auto& s : samples)
    if (s.r >= r_min) {
      pts.push_back(&s);
      rlo = std::min(rlo, s.r);
      rhi = std::max(rhi, s.r);
    }
  if (pts.size() < 8 || rhi < 3.0 * rlo) return std::nullopt;
  Eigen::MatrixXd A(pts.size(), 4);
  Eigen::VectorXd b(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double u = rlo / pts[i]->r;  // scaled 1/r keeps the columns comparable
    A(i, 0) = 1.0;
    A(i, 1) = u;
    A(i, 2) = u * u;
    A(i, 3) = u * u * u;
    b(i) = pts[i]->theta;
  }
  const Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
  return std::make_pair(c(0), c(1) * rlo);
}

class AxisContinuation {
 public:
  AxisContinuation(RotCase c, double lambda, double sigma) : c_(c), lambda_(lambda), sigma_(sigma) {}

  // d(Q, height, s)/dr with Q = r sinh theta (cosh cases) or r cosh theta.
  detail::State<3> derivative(double r, const detail::State<3>& y) const {
    const double Q = y[0];
    if (radial_is_cosh(c_)) {
      const double rho = std::hypot(r, Q);
      const double dq = c_ == RotCase::TA_S ? 2.0 * (rho - lambda_ * r) : -2.0 * (rho + lambda_ * r);
      if (rho == 0.0) return {dq, 0.0, 0.0};
      return {dq, Q / rho, r / rho};
    }
    const double w = sigma_ * std::sqrt(std::max(Q * Q - r * r, 0.0));
    const double dp = c_ == RotCase::TA_T ? 2.0 * (w - lambda_ * r) : -2.0 * (w + lambda_ * r);
    return {dp, Q / w, r / w};
  }

  double theta(double r, double Q) const {
    if (radial_is_cosh(c_)) return std::asinh(Q / r);
    return sigma_ * std::acosh(std::max(Q / r, 1.0));
  }

 private:
  RotCase c_;
  double lambda_;
  double sigma_;
};

// Integrates the regularized system between r_from and r_to, recording
// samples with r >= eps_axis. y = (Q, height, s).
detail::State<3> regularized_leg(const AxisContinuation& sys, double r_from, double r_to, detail::State<3> y,
                                 double eps_axis, const StopPolicy& pol, std::vector<OrbitState>* out) {
  const double dir = r_to > r_from ? 1.0 : -1.0;
  const double span = std::abs(r_to - r_from);
  auto rhs = [&](const detail::State<3>& st, detail::State<3>& d, double tau) {
    d = sys.derivative(r_from + dir * tau, st);
    for (double& v : d) v *= dir;
  };
  auto stepper = detail::make_stepper<3>(pol.abs_tol, pol.rel_tol, span / 64.0);
  stepper.initialize(y, 0.0, span / 1024.0);
  while (stepper.current_time() < span) {
    const auto [t0, t1] = stepper.do_step(rhs);
    const double tau = std::min(t1, span);
    detail::State<3> cur;
    if (t1 >= span)
      stepper.calc_state(span, cur);
    else
      cur = stepper.current_state();
    if (!detail::all_finite<3>(cur)) throw NumericError("axis continuation: non-finite state");
    const double r = r_from + dir * tau;
    if (out) {
      // Pin a sample at eps_axis itself when a step crosses it.
      const double tau_eps = dir * (eps_axis - r_from);
      const double r_prev = r_from + dir * t0;
      if (dir > 0 ? (r_prev < eps_axis && r >= eps_axis) : (r_prev > eps_axis && r < eps_axis)) {
        detail::State<3> at;
        stepper.calc_state(tau_eps, at);
        out->push_back({eps_axis, sys.theta(eps_axis, at[0]), at[2], at[1]});
      }
      if (r > eps_axis) out->push_back({r, sys.theta(r, cur[0]), cur[2], cur[1]});
    }
    if (t1 >= span) return cur;
  }
  return stepper.current_state();
}

void finish_far(RotCase c, double lambda, const StopPolicy& pol, HalfOrbit& h, EndKind fallback,
                const std::string& why) {
  const OrbitState& last = h.samples.back();
  h.end.kind = fallback;
  h.end.detail = why;
  if (last.r >= 50.0) {
    if (auto fit = tail_fit(h.samples, last.r / 10.0)) {
      h.end.fitted_limit = fit->first;
      for (double root : gamma_asymptotes(c, lambda).vertical) {
        if (std::abs(fit->first - root) <= pol.asym_tol) {
          h.end.kind = EndKind::ThetaAsymptote;
          h.end.asymptote = root;
          h.end.detail = "tail fit of theta(r) matches the Gamma asymptote";
        }
      }
    }
  }
}

void fill_end_state(HalfOrbit& h) {
  const OrbitState& last = h.samples.back();
  h.end.s = last.s;
  h.end.r = last.r;
  h.end.theta = last.theta;
  h.end.height = last.height;
}

}  // namespace

HalfOrbit integrate_orbit(RotCase c, const OrbitState& start, double lambda, int direction, const StopPolicy& pol) {
  check_lambda(c, lambda);
  if (!(start.r > 0.0) || !std::isfinite(start.r) || !std::isfinite(start.theta))
    throw DomainError("integrate_orbit: start must lie in the phase plane (r > 0, finite theta)");
  if (direction != 1 && direction != -1) throw DomainError("integrate_orbit: direction must be +1 or -1");
  const double dir = direction;
  const bool trivial = c == RotCase::TA_S && lambda == 1.0 && start.theta == 0.0;

  HalfOrbit h;
  h.samples.push_back(start);
  auto rhs = [&](const detail::State<3>& y, detail::State<3>& d, double) {
    d = raw_rhs(c, lambda, y);
    for (double& v : d) v *= dir;
  };
  auto stepper = detail::make_stepper<3>(pol.abs_tol, pol.rel_tol, pol.max_step);
  detail::State<3> good{start.r, start.theta, start.height};
  double good_tau = 0.0;
  double dt = std::min(1e-3, pol.max_step);
  stepper.initialize(good, 0.0, dt);
  int failures = 0;

  auto mark_trivial = [&]() {
    if (trivial) {
      bool flat = true;
      for (const auto& s : h.samples) flat = flat && std::abs(s.theta) <= 1e-10;
      if (flat) {
        h.end.kind = EndKind::TrivialLine;
        h.end.detail = "theta = 0 is invariant for lambda = 1";
      }
    }
    return h;
  };
  auto finalize = [&]() {
    fill_end_state(h);
    return mark_trivial();
  };

  while (good_tau < pol.s_budget) {
    std::pair<double, double> step;
    try {
      step = stepper.do_step(rhs);
    } catch (const boost::numeric::odeint::odeint_error& e) {
      throw NumericError(std::string("integrate_orbit: step rejected: ") + e.what());
    }
    const auto cur = stepper.current_state();
    if (!detail::all_finite<3>(cur) || !(cur[0] > 0.0)) {
      // Overshot the axis or blew up inside a step: retry from the last accepted state.
      if (++failures > 60) throw NumericError("integrate_orbit: cannot advance near the singular set");
      dt = std::max((step.second - step.first) / 16.0, 1e-300);
      stepper.initialize(good, good_tau, dt);
      continue;
    }
    failures = 0;
    const double r = cur[0], th = cur[1];
    if (step.second - step.first < 1e-14 * std::max(1.0, step.second) && r > pol.axis_switch_r) {
      // Finite-s blow-up: theta and r' diverge together.
      if (h.samples.size() < 2) throw NumericError("integrate_orbit: immediate blow-up");
      h.end.kind = EndKind::Unbounded;
      h.end.detail = "step underflow (finite-s blow-up)";
      return finalize();
    }
    good = cur;
    good_tau = step.second;
    const OrbitState st{r, th, start.s + dir * good_tau, cur[2]};
    h.samples.push_back(st);

    const auto d = raw_rhs(c, lambda, cur);
    const bool inward = dir * d[0] < 0.0;
    if (inward && r < pol.axis_switch_r && (radial_is_cosh(c) || std::abs(std::sinh(th)) >= 1.0)) {
      const double sigma = th >= 0.0 ? 1.0 : -1.0;
      const AxisContinuation sys(c, lambda, sigma);
      const double Q0 = radial_is_cosh(c) ? r * std::sinh(th) : r * std::cosh(th);
      const auto fin = regularized_leg(sys, r, 0.0, {Q0, st.height, st.s}, pol.eps_axis, pol, &h.samples);
      fill_end_state(h);
      h.end.r = 0.0;
      h.end.s = fin[2];
      h.end.height = fin[1];
      h.end.axis_constant = fin[0];
      if (radial_is_cosh(c) && std::abs(fin[0]) <= pol.radial_tol) {
        h.end.kind = EndKind::RadialOrigin;
        h.end.slope_at_axis = 0.0;
        h.end.detail = "orthogonal arrival at the axis";
      } else {
        h.end.kind = EndKind::AxisCusp;
        h.end.slope_at_axis = radial_is_cosh(c) ? static_cast<double>(sgn(fin[0])) : sigma;
        h.end.detail = "cusp: |theta| diverges, r sinh(theta) or r cosh(theta) converges";
      }
      return mark_trivial();
    }
    if (r < pol.eps_axis) {
      h.end.kind = EndKind::AxisCusp;
      h.end.axis_constant = radial_is_cosh(c) ? r * std::sinh(th) : r * std::cosh(th);
      h.end.detail = "reached eps_axis without regularized continuation";
      return finalize();
    }
    if (std::abs(th) > pol.theta_cap) {
      h.end.kind = EndKind::Unbounded;
      h.end.detail = "theta cap";
      return finalize();
    }
    if (r > pol.r_cap) {
      fill_end_state(h);
      finish_far(c, lambda, pol, h, EndKind::Unbounded, "r cap");
      return finalize();
    }
  }
  fill_end_state(h);
  finish_far(c, lambda, pol, h, EndKind::Truncated, "s budget exhausted");
  return finalize();
}

Orbit trace_orbit(RotCase c, const OrbitState& start, double lambda, const StopPolicy& pol) {
  HalfOrbit fwd = integrate_orbit(c, start, lambda, +1, pol);
  HalfOrbit bwd = integrate_orbit(c, start, lambda, -1, pol);
  Orbit o;
  o.cas = c;
  o.lambda = lambda;
  o.samples.assign(bwd.samples.rbegin(), bwd.samples.rend());
  o.samples.insert(o.samples.end(), fwd.samples.begin() + 1, fwd.samples.end());
  o.forward_end = fwd.end;
  o.backward_end = bwd.end;
  return o;
}

HalfOrbit integrate_from_axis(RotCase c, double axis_constant, double lambda, const StopPolicy& pol,
                              double theta_sign) {
  check_lambda(c, lambda);
  const double sigma = theta_sign >= 0.0 ? 1.0 : -1.0;
  if (!radial_is_cosh(c) && !(axis_constant > 0.0))
    throw DomainError("integrate_from_axis: r cosh(theta) at the axis must be > 0");
  const AxisContinuation sys(c, lambda, sigma);
  HalfOrbit h;
  const double r1 = pol.axis_switch_r;
  const auto y = regularized_leg(sys, 0.0, r1, {axis_constant, 0.0, 0.0}, pol.eps_axis, pol, &h.samples);
  const OrbitState sw{r1, sys.theta(r1, y[0]), y[2], y[1]};
  const int dir = radial_is_cosh(c) ? 1 : static_cast<int>(sigma);
  HalfOrbit rest = integrate_orbit(c, sw, lambda, dir, pol);
  h.samples.insert(h.samples.end(), rest.samples.begin() + 1, rest.samples.end());
  h.end = rest.end;
  return h;
}

std::vector<double> theta_at_radii(RotCase c, double lambda, double r0, double theta0, std::span<const double> radii,
                                   double rel_tol, double abs_tol) {
  if (!radial_is_cosh(c)) throw DomainError("theta_at_radii: needs r' = cosh(theta) (TA_S or SA_T)");
  if (!(r0 > 0.0)) throw DomainError("theta_at_radii: r0 must be > 0");
  std::vector<double> out;
  if (radii.empty()) return out;
  const double dir = radii.back() >= r0 ? 1.0 : -1.0;
  auto rhs = [&](const detail::State<1>& y, detail::State<1>& d, double tau) {
    const double r = r0 + dir * tau;
    const auto full = raw_rhs(c, lambda, {r, y[0], 0.0});
    d[0] = dir * full[1] / full[0];
  };
  const double span = std::abs(radii.back() - r0);
  auto stepper = detail::make_stepper<1>(abs_tol, rel_tol, std::max(span / 16.0, 1e-6));
  stepper.initialize(detail::State<1>{theta0}, 0.0, std::min(1e-4, std::max(span, 1e-12)));
  for (double rr : radii) {
    const double tau = dir * (rr - r0);
    if (tau < -1e-14) throw DomainError("theta_at_radii: radii must move monotonically away from r0");
    while (stepper.current_time() < tau) stepper.do_step(rhs);
    detail::State<1> st;
    if (tau <= 0.0)
      st = {theta0};
    else
      stepper.calc_state(tau, st);
    out.push_back(st[0]);
  }
  return out;
}

OrbitState state_at(RotCase c, double lambda, const OrbitState& from, double s_target) {
  const double span = std::abs(s_target - from.s);
  if (span == 0.0) return from;
  const double dir = s_target > from.s ? 1.0 : -1.0;
  auto rhs = [&](const detail::State<3>& y, detail::State<3>& d, double) {
    d = raw_rhs(c, lambda, y);
    for (double& v : d) v *= dir;
  };
  auto stepper = detail::make_stepper<3>(1e-14, 1e-12, span);
  stepper.initialize(detail::State<3>{from.r, from.theta, from.height}, 0.0, span / 8.0);
  while (stepper.current_time() < span) stepper.do_step(rhs);
  detail::State<3> y;
  stepper.calc_state(span, y);
  return {y[0], y[1], s_target, y[2]};
}

namespace {

// Sign changes of g along the samples, localized by bisection on re-integrated states.
template <class G>
std::vector<double> sign_changes(const Orbit& o, G g) {
  std::vector<double> roots;
  int last_sign = 0;
  std::size_t last_idx = 0;
  for (std::size_t i = 0; i < o.samples.size(); ++i) {
    const OrbitState& st = o.samples[i];
    if (!(st.r > 0.0)) continue;
    const int sg = sgn(g(st));
    if (sg == 0) continue;
    if (last_sign != 0 && sg != last_sign) {
      // An exact zero at an intermediate sample is the root itself.
      std::optional<double> exact;
      for (std::size_t k = last_idx + 1; k < i; ++k)
        if (o.samples[k].r > 0.0 && g(o.samples[k]) == 0.0) exact = o.samples[k].s;
      if (exact) {
        roots.push_back(*exact);
      } else {
        const OrbitState from = o.samples[last_idx];
        auto f = [&](double s) { return g(state_at(o.cas, o.lambda, from, s)); };
        roots.push_back(detail::bisect(f, from.s, st.s, 1e-10));
      }
    }
    last_sign = sg;
    last_idx = i;
  }
  return roots;
}

std::vector<Extremum> extrema(const Orbit& o, int which) {
  // which: 0 -> r, 1 -> height.
  auto deriv = [&](const OrbitState& st) {
    const auto d = raw_rhs(o.cas, o.lambda, {st.r, st.theta, st.height});
    return which == 0 ? d[0] : d[2];
  };
  std::vector<Extremum> out;
  for (double s : sign_changes(o, deriv)) {
    // Locate the sample preceding s and evaluate there.
    std::size_t k = 0;
    while (k + 1 < o.samples.size() && o.samples[k + 1].s <= s) ++k;
    const OrbitState at = state_at(o.cas, o.lambda, o.samples[k], s);
    const OrbitState before = o.samples[k].s < s ? o.samples[k] : o.samples[k > 0 ? k - 1 : 0];
    out.push_back({s, which == 0 ? at.r : at.height, deriv(before) > 0.0});
  }
  return out;
}

}  // namespace

ClassificationReport classify_orbit(const Orbit& o) {
  if (o.samples.empty()) throw DomainError("classify_orbit: empty orbit");
  ClassificationReport rep;
  rep.cas = o.cas;
  rep.lambda = o.lambda;
  rep.forward_kind = o.forward_end.kind;
  rep.backward_kind = o.backward_end.kind;
  rep.forward_cusp_slope = o.forward_end.slope_at_axis;
  rep.backward_cusp_slope = o.backward_end.slope_at_axis;

  auto dtheta = [&](const OrbitState& st) { return raw_rhs(o.cas, o.lambda, {st.r, st.theta, st.height})[1]; };
  auto gauss = [&](const OrbitState& st) {
    const auto d = raw_rhs(o.cas, o.lambda, {st.r, st.theta, st.height});
    return (-d[1]) * (-d[2] / st.r);
  };
  auto theta = [](const OrbitState& st) { return st.theta; };

  int hs_all = 0;
  bool hs_const = true, r_pos = true, k_pos = true;
  for (const auto& st : o.samples) {
    if (!(st.r > 0.0)) continue;
    const auto d = raw_rhs(o.cas, o.lambda, {st.r, st.theta, st.height});
    const SignSegment cur{st.s, st.s, sgn(d[0]), sgn(d[1]), sgn(d[2])};
    if (rep.signature.empty() || rep.signature.back().r_sign != cur.r_sign ||
        rep.signature.back().theta_sign != cur.theta_sign || rep.signature.back().height_sign != cur.height_sign)
      rep.signature.push_back(cur);
    else
      rep.signature.back().s_end = st.s;
    if (hs_all == 0) hs_all = sgn(d[2]);
    hs_const = hs_const && sgn(d[2]) == hs_all && hs_all != 0;
    r_pos = r_pos && d[0] > 0.0;
    k_pos = k_pos && (-d[1]) * (-d[2] / st.r) > 0.0;
  }
  rep.height_monotone = hs_const ? hs_all : 0;
  rep.strictly_convex = k_pos;
  rep.entire_graph = r_pos && o.backward_end.kind == EndKind::RadialOrigin &&
                     (o.forward_end.kind == EndKind::Unbounded || o.forward_end.kind == EndKind::ThetaAsymptote);

  rep.gamma_crossings = sign_changes(o, dtheta);
  rep.theta_zero_crossings = sign_changes(o, theta);
  rep.gauss_sign_changes = sign_changes(o, gauss);
  for (const auto& st : o.samples) {
    if (!(st.r > 0.0)) continue;
    const int sg = sgn(gauss(st));
    if (sg != 0) {
      rep.gauss_signs.push_back(sg);
      break;
    }
  }
  for (std::size_t i = 0; i < rep.gauss_sign_changes.size() && !rep.gauss_signs.empty(); ++i)
    rep.gauss_signs.push_back(-rep.gauss_signs.back());
  rep.r_extrema = extrema(o, 0);
  rep.height_extrema = extrema(o, 1);
  return rep;
}

namespace {

double axis_constant_backward(double lambda, const OrbitState& seed, const StopPolicy& pol) {
  const HalfOrbit h = integrate_orbit(RotCase::TA_S, seed, lambda, -1, pol);
  if (h.end.kind != EndKind::AxisCusp)
    throw NumericError("separatrix_bracket: backward orbit did not reach the axis (" + std::string(to_string(h.end.kind)) +
                       ")");
  return h.end.axis_constant;
}

// theta on the upper Gamma branch with Gamma(theta) = x, x > 1/2.
double gamma_upper_inverse(double lambda, double x) {
  const double t0 = std::acosh(lambda);
  auto g = [&](double th) { return std::sinh(th) / (2.0 * (std::cosh(th) - lambda)) - x; };
  double lo = t0 + 1e-15 * (1.0 + t0), hi = t0 + 1.0;
  while (g(hi) > 0.0) hi += 1.0;
  while (!(g(lo) > 0.0)) lo = t0 + 0.5 * (lo - t0) + 1e-300;
  return detail::bisect(g, lo, hi, 1e-15);
}

}  // namespace

SeparatrixBracket separatrix_bracket(double lambda, double x_max, const StopPolicy& pol, double monotone_tol) {
  if (!(lambda > 1.0)) throw DomainError("separatrix_bracket: needs lambda > 1");
  if (!(x_max > 1.0)) throw DomainError("separatrix_bracket: x_max must exceed 1");
  SeparatrixBracket b;
  b.lambda = lambda;
  const double t0 = std::acosh(lambda);
  const double kappa = 2.0 * std::tanh(t0);  // growth rate off the asymptote
  StopPolicy p = pol;
  p.r_cap = std::max(pol.r_cap, 4.0 * x_max);
  p.s_budget = std::max(pol.s_budget, 8.0 * x_max);

  constexpr int kSeeds = 20;
  for (int k = 1; k <= kSeeds; ++k) {
    const double x = x_max * k / kSeeds;
    b.x0_sequence.emplace_back(x, axis_constant_backward(lambda, {x, 0.0, 0.0, 0.0}, p));
    b.x1_sequence.emplace_back(x, axis_constant_backward(lambda, {x, gamma_upper_inverse(lambda, x), 0.0, 0.0}, p));
  }
  for (int k = 1; k < kSeeds; ++k) {
    if (b.x0_sequence[k].second < b.x0_sequence[k - 1].second - monotone_tol)
      throw NumericError("separatrix_bracket: x0 sequence not nondecreasing (tighten the integrator tolerance)");
    if (b.x1_sequence[k].second > b.x1_sequence[k - 1].second + monotone_tol)
      throw NumericError("separatrix_bracket: x1 sequence not nonincreasing (tighten the integrator tolerance)");
  }
  b.lower = b.x0_sequence.back().second;
  b.upper = b.x1_sequence.back().second;
  for (const auto& [x, q] : b.x0_sequence) b.lower = std::max(b.lower, q);
  for (const auto& [x, q] : b.x1_sequence) b.upper = std::min(b.upper, q);
  if (b.lower > b.upper + monotone_tol)
    throw NumericError("separatrix_bracket: x0 limit exceeds x1 limit beyond tolerance");
  if (b.upper - b.lower <= monotone_tol) {
    b.degenerate = true;
    const double m = 0.5 * (b.lower + b.upper);
    if (b.lower > b.upper) b.lower = b.upper = m;
  }
  b.midpoint = 0.5 * (b.lower + b.upper);

  // Far-field separatrix: backward in s is the stable direction of +theta0.
  const double X = std::max(400.0, 40.0 / kappa);
  StopPolicy far = p;
  far.r_cap = 2.0 * X;
  far.s_budget = 4.0 * X;
  const OrbitState seed{X, t0 + 0.5 / X, 0.0, 0.0};
  const HalfOrbit sep = integrate_orbit(RotCase::TA_S, seed, lambda, -1, far);
  if (sep.end.kind != EndKind::AxisCusp) throw NumericError("separatrix_bracket: far-field separatrix missed the axis");
  b.far_field_constant = sep.end.axis_constant;
  {
    std::vector<OrbitState> window;
    for (const auto& s : sep.samples)
      if (s.r >= X / 40.0 && s.r <= X / 4.0) window.push_back(s);
    if (auto fit = tail_fit(window, X / 40.0)) b.separatrix_limit_fit = fit->first;
  }

  // Shadowing of the separatrix by the orbit leaving the axis at the midpoint.
  // Axis-constant errors of ~1e-12 grow like exp(kappa r); a 1e4 amplification window keeps
  // the comparison above roundoff.
  b.shadow_radius = std::min(std::log(1e4) / kappa, X / 8.0);
  std::vector<double> radii_up, radii_down;
  for (int i = 0; i <= 200; ++i) radii_up.push_back(1.0 + (b.shadow_radius - 1.0) * i / 200.0);
  radii_down.assign(radii_up.rbegin(), radii_up.rend());
  const auto th_sep_rev = theta_at_radii(RotCase::TA_S, lambda, seed.r, seed.theta, radii_down, 1e-13, 1e-15);
  StopPolicy mid_pol = p;
  mid_pol.r_cap = 2.0 * pol.axis_switch_r;  // stop right after leaving the axis region
  mid_pol.rel_tol = 1e-13;
  mid_pol.abs_tol = 1e-15;
  const HalfOrbit mid = integrate_from_axis(RotCase::TA_S, b.midpoint, lambda, mid_pol);
  const OrbitState& m0 = mid.samples[0].r > 0.0 ? *std::find_if(mid.samples.begin(), mid.samples.end(),
                                                                 [&](const OrbitState& s) { return s.r >= pol.axis_switch_r; })
                                                : mid.samples[0];
  const auto th_mid = theta_at_radii(RotCase::TA_S, lambda, m0.r, m0.theta, radii_up, 1e-13, 1e-15);
  b.shadow_error = 0.0;
  for (std::size_t i = 0; i < radii_up.size(); ++i)
    b.shadow_error = std::max(b.shadow_error, std::abs(th_mid[i] - th_sep_rev[radii_up.size() - 1 - i]));
  const double tol_q = std::max(monotone_tol, 1e-9);
  b.midpoint_converges = b.shadow_error <= 1e-6 && std::abs(b.separatrix_limit_fit - t0) <= pol.asym_tol &&
                         b.far_field_constant >= b.lower - tol_q && b.far_field_constant <= b.upper + tol_q;
  return b;
}

ChartJet revolution_jet(RotCase c, const OrbitState& st, double theta_prime, double t) {
  const double ch = std::cosh(st.theta), sh = std::sinh(st.theta);
  const bool q = radial_is_cosh(c);
  const detail::State<3> d{q ? ch : sh, theta_prime, q ? sh : ch};
  // Second derivatives of (r, height) along the profile.
  const double r2 = (q ? sh : ch) * d[1];
  const double h2 = (q ? ch : sh) * d[1];
  ChartJet j;
  if (timelike_axis(c)) {
    const double ct = std::cos(t), stt = std::sin(t);
    j.p = {st.r * ct, st.r * stt, st.height};
    j.ps = {d[0] * ct, d[0] * stt, d[2]};
    j.pt = {-st.r * stt, st.r * ct, 0.0};
    j.pss = {r2 * ct, r2 * stt, h2};
    j.pst = {-d[0] * stt, d[0] * ct, 0.0};
    j.ptt = {-st.r * ct, -st.r * stt, 0.0};
  } else {
    const double cht = std::cosh(t), sht = std::sinh(t);
    j.p = {st.height, st.r * sht, st.r * cht};
    j.ps = {d[2], d[0] * sht, d[0] * cht};
    j.pt = {0.0, st.r * cht, st.r * sht};
    j.pss = {h2, r2 * sht, r2 * cht};
    j.pst = {0.0, d[0] * cht, d[0] * sht};
    j.ptt = {0.0, st.r * sht, st.r * cht};
  }
  return j;
}

SurfaceMesh build_surface(const Orbit& orbit, double t_lo, double t_hi, std::size_t nt, double eps_axis,
                          double theta_max) {
  if (orbit.samples.empty()) throw DomainError("build_surface: empty orbit");
  if (nt < 2) throw DomainError("build_surface: need nt >= 2");
  SurfaceMesh m;
  m.nt = nt;
  m.orientation = 1;
  m.velocity = axis_direction(orbit.cas);
  m.lambda = orbit.lambda;
  for (const auto& st : orbit.samples) {
    if (!(st.r > eps_axis) || !(std::abs(st.theta) <= theta_max)) continue;
    ++m.ns;
    for (std::size_t j = 0; j < nt; ++j) {
      const double t = t_lo + (t_hi - t_lo) * static_cast<double>(j) / static_cast<double>(nt - 1);
      const ChartJet jet = revolution_jet(orbit.cas, st, raw_rhs(orbit.cas, orbit.lambda, {st.r, st.theta, st.height})[1], t);
      m.vertices.push_back(jet.p);
      m.jets.push_back(jet);
    }
  }
  if (m.ns == 0) throw DomainError("build_surface: no samples beyond eps_axis");
  m.quads = grid_quads(m.ns, m.nt);
  return m;
}

double parallel_axis_falsifier(RotCase c, const LVec3& v, double lambda, const OrbitState& at, std::size_t nt) {
  if (nt < 2) throw DomainError("parallel_axis_falsifier: need nt >= 2");
  const bool ta = timelike_axis(c);
  const double t_lo = ta ? 0.0 : -2.0, t_hi = ta ? 2.0 * std::numbers::pi : 2.0;
  double lo = kInf, hi = -kInf;
  for (std::size_t j = 0; j < nt; ++j) {
    const double t = t_lo + (t_hi - t_lo) * static_cast<double>(j) / static_cast<double>(nt - 1);
    const SurfaceSample s = curvature_from_jet(revolution_jet(c, at, raw_rhs(c, lambda, {at.r, at.theta, at.height})[1], t), 1, v, lambda);
    lo = std::min(lo, s.residual);
    hi = std::max(hi, s.residual);
  }
  return hi - lo;
}

double parallel_axis_falsifier(const LVec3& v, double lambda, RotCase c) {
  return parallel_axis_falsifier(c, v, lambda, OrbitState{1.0, 0.5, 0.0, 0.0});
}

}  // namespace translators
