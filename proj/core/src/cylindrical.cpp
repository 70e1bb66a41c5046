#include "translators/cylindrical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ode_support.hpp"
#include "translators/error.hpp"

namespace translators {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool nearly_equal(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); }

// arctanh continued to |y| > 1 as the real part of the principal branch.
double atanh_ext(double y) { return 0.5 * std::log(std::abs((1.0 + y) / (1.0 - y))); }

// atanh_ext(num / den) without forming the quotient, so den -> 0 gives the limit 0.
double atanh_ext_ratio(double num, double den) {
  return std::abs(num) < std::abs(den) ? std::atanh(num / den) : std::atanh(den / num);
}

bool is_ruling_e3(CylKind k) { return k == CylKind::RulingTimelikeVParallel || k == CylKind::RulingTimelikeGeneral; }

}  // namespace

CylCase CylCase::circle(double lambda) { return {CylKind::RulingTimelikeVParallel, lambda, 0.0, 1.0}; }

CylCase CylCase::timelike_ruling(double lambda, double v2, double v3) {
  return {CylKind::RulingTimelikeGeneral, lambda, v2, v3};
}

CylCase CylCase::spacelike_surface(double lambda, double v3, double v2) {
  return {CylKind::RulingSpacelikeSpacelike, lambda, v2, v3};
}

CylCase CylCase::timelike_surface(double lambda, double v3, double v2) {
  return {CylKind::RulingSpacelikeTimelike, lambda, v2, v3};
}

void CylCase::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("cylindrical: lambda must be > 0");
  switch (kind) {
    case CylKind::RulingTimelikeVParallel: break;
    case CylKind::RulingTimelikeGeneral:
      if (!(v2 > 0.0)) throw DomainError("cylindrical: case 1.2 requires v2 > 0");
      break;
    case CylKind::RulingSpacelikeSpacelike:
    case CylKind::RulingSpacelikeTimelike:
      if (!(v3 > 0.0)) throw DomainError("cylindrical: ruling e2 cases require v3 > 0");
      break;
  }
}

LVec3 CylCase::ruling() const { return is_ruling_e3(kind) ? e3 : e2; }

CausalClass CylCase::surface_causality() const {
  return kind == CylKind::RulingSpacelikeSpacelike ? CausalClass::Spacelike : CausalClass::Timelike;
}

LVec3 CylCase::velocity() const {
  switch (kind) {
    case CylKind::RulingTimelikeVParallel: return {0.0, 0.0, v3};
    case CylKind::RulingTimelikeGeneral:
    case CylKind::RulingSpacelikeSpacelike: return {0.0, v2, v3};
    case CylKind::RulingSpacelikeTimelike: return {0.0, v2, -v3};
  }
  return {};
}

int CylCase::normal_orientation() const { return kind == CylKind::RulingSpacelikeTimelike ? -1 : 1; }

double theta_rhs(const CylCase& c, double theta, int sigma) {
  const double sg = sigma < 0 ? -1.0 : 1.0;
  switch (c.kind) {
    case CylKind::RulingTimelikeVParallel:
      throw DomainError("theta_rhs: the v || e3 case is the circle of curvature 2 lambda; use circle_solution");
    case CylKind::RulingTimelikeGeneral: return 2.0 * (c.v2 * std::cos(theta) + c.lambda);
    case CylKind::RulingSpacelikeSpacelike: return 2.0 * (sg * c.v3 * std::cosh(theta) - c.lambda);
    case CylKind::RulingSpacelikeTimelike: return 2.0 * (c.lambda - sg * c.v3 * std::sinh(theta));
  }
  return 0.0;
}

BaseCurve circle_solution(double lambda, int n) {
  if (!(lambda > 0.0)) throw DomainError("circle_solution: lambda must be > 0");
  if (n < 2) throw DomainError("circle_solution: need at least 2 samples");
  BaseCurve bc;
  bc.cas = CylCase::circle(lambda);
  bc.causality = CausalClass::Timelike;
  const double r = 0.5 / lambda;
  const double len = 2.0 * std::numbers::pi * r;
  for (int i = 0; i < n; ++i) {
    const double s = len * i / (n - 1);
    const double th = 2.0 * lambda * s;
    bc.samples.push_back({s, {r * std::sin(th), -r * std::cos(th), 0.0}, th});
  }
  return bc;
}

std::vector<double> equilibrium_thetas(const CylCase& c) {
  c.validate();
  const double l = c.lambda;
  switch (c.kind) {
    case CylKind::RulingTimelikeVParallel: return {};
    case CylKind::RulingTimelikeGeneral: {
      if (l > c.v2 && !nearly_equal(l, c.v2)) return {};
      if (nearly_equal(l, c.v2)) return {std::numbers::pi};
      const double a = std::acos(-l / c.v2);
      return {-a, a};
    }
    case CylKind::RulingSpacelikeSpacelike: {
      if (nearly_equal(l, c.v3)) return {0.0};
      if (l < c.v3) return {};
      const double a = std::acosh(l / c.v3);
      return {-a, a};
    }
    case CylKind::RulingSpacelikeTimelike: return {std::asinh(l / c.v3)};
  }
  return {};
}

ClosedFormFamily::ClosedFormFamily(const CylCase& c) : c_(c) {
  c.validate();
  if (is_ruling_e3(c.kind)) throw DomainError("ClosedFormFamily: closed forms exist only for ruling e2 cases");
  const double l = c.lambda, v = c.v3;
  if (nearly_equal(l, v))
    sub_ = Subcase::LambdaEqual;
  else
    sub_ = l > v ? Subcase::LambdaAbove : Subcase::LambdaBelow;
  if (c.kind == CylKind::RulingSpacelikeSpacelike) {
    if (sub_ == Subcase::LambdaAbove) {
      a_ = std::sqrt(l * l - v * v);
      k_ = std::sqrt((l - v) / (l + v));
    } else if (sub_ == Subcase::LambdaBelow) {
      a_ = std::sqrt(v * v - l * l);
      k_ = std::sqrt((v - l) / (v + l));
    }
  } else {
    a_ = std::sqrt(v * v + l * l);
  }
}

std::vector<double> ClosedFormFamily::singular_points(double lo, double hi) const {
  std::vector<double> pts;
  auto keep = [&](double s) {
    if (s >= lo && s <= hi) pts.push_back(s);
  };
  const double v = c_.v3, l = c_.lambda;
  if (c_.kind == CylKind::RulingSpacelikeSpacelike) {
    switch (sub_) {
      case Subcase::LambdaAbove: {
        const double s1 = std::atanh(k_) / a_;
        keep(-s1);
        keep(s1);
        break;
      }
      case Subcase::LambdaEqual:
        keep(-0.5 / v);
        keep(0.5 / v);
        break;
      case Subcase::LambdaBelow: {
        const double period = std::numbers::pi / a_;
        const double u = std::atan(1.0 / k_) / a_;
        const double n0 = std::floor(lo / period) - 1.0, n1 = std::ceil(hi / period) + 1.0;
        for (double n = n0; n <= n1; n += 1.0) {
          keep(n * period - u);
          keep(n * period + u);
        }
        break;
      }
    }
  } else {
    if (sub_ == Subcase::LambdaEqual)
      keep(0.0);
    else
      keep(std::atanh((v - l) / a_) / a_);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

Interval ClosedFormFamily::component(double s) const {
  const double reach = sub_ == Subcase::LambdaBelow && c_.kind == CylKind::RulingSpacelikeSpacelike
                           ? std::numbers::pi / a_ + 1.0
                           : kInf;
  const auto pts = singular_points(std::isinf(reach) ? -kInf : s - reach, std::isinf(reach) ? kInf : s + reach);
  Interval iv{-kInf, kInf};
  for (double p : pts) {
    if (std::abs(p - s) <= 1e-15 * (1.0 + std::abs(p)))
      throw DomainError("closed_form: s is a singular point of the family");
    if (p < s) iv.lo = p;
    if (p > s) {
      iv.hi = p;
      break;
    }
  }
  return iv;
}

ClosedFormPoint ClosedFormFamily::evaluate(double s) const {
  const double v = c_.v3, l = c_.lambda;
  auto guard = [&](double p, const char* what) {
    if (std::abs(s - p) <= 1e-15 * (1.0 + std::abs(p)))
      throw DomainError(std::string("closed_form: s outside the maximal domain (") + what + ")");
  };
  ClosedFormPoint out;
  if (c_.kind == CylKind::RulingSpacelikeSpacelike) {
    switch (sub_) {
      case Subcase::LambdaAbove: {
        const double s1 = std::atanh(k_) / a_;
        guard(s1, "arctanh argument +-1");
        guard(-s1, "arctanh argument +-1");
        // y = k coth(a s); its pole at s = 0 is removable (theta -> 0).
        const double th = std::tanh(a_ * s);
        const double y = k_ / th;
        out.theta = -2.0 * atanh_ext_ratio(k_, th);
        out.x = l / v * s - atanh_ext(std::tanh(a_ * s) / k_) / v;
        out.z = -std::log(std::abs(1.0 - v / l * std::cosh(2.0 * a_ * s))) / (2.0 * v);
        out.sigma = std::abs(y) < 1.0 ? 1 : -1;
        break;
      }
      case Subcase::LambdaEqual: {
        guard(0.5 / v, "arctanh argument +-1");
        guard(-0.5 / v, "arctanh argument +-1");
        const double w = 2.0 * v * s;
        out.theta = -2.0 * atanh_ext_ratio(1.0, w);
        out.x = s - atanh_ext(w) / v;
        out.z = -std::log(std::abs(1.0 - w * w)) / (2.0 * v);
        out.sigma = std::abs(w) > 1.0 ? 1 : -1;
        break;
      }
      case Subcase::LambdaBelow: {
        const double period = std::numbers::pi / a_;
        const double u = std::atan(1.0 / k_) / a_;
        const double n = std::round(s / period);
        guard(n * period - u, "arctanh argument +-1");
        guard(n * period + u, "arctanh argument +-1");
        // The tan poles are removable: the continued arctanh tends to 0 there.
        const double sn = std::sin(a_ * s), cs = std::cos(a_ * s);
        const double y = k_ * sn / cs;
        const double ath = atanh_ext_ratio(k_ * sn, cs);
        out.theta = 2.0 * ath;
        out.x = l / v * s + ath / v;
        out.z = -std::log(std::abs(1.0 + v / l * std::cos(2.0 * a_ * s))) / (2.0 * v);
        out.sigma = std::abs(y) < 1.0 ? 1 : -1;
        break;
      }
    }
    return out;
  }
  if (sub_ == Subcase::LambdaEqual) {
    guard(0.0, "arctanh argument 1 at s = 0");
    const double r2 = std::numbers::sqrt2;
    const double t = std::tanh(r2 * l * s);
    const double y = 1.0 - r2 * t;
    out.theta = -2.0 * atanh_ext(y);
    out.x = s + atanh_ext(y) / l;
    out.z = (-atanh_ext(1.0 - 2.0 * t) + atanh_ext((r2 - 1.0) * (r2 - 1.0 - 2.0 * t))) / l;
    out.sigma = std::abs(y) < 1.0 ? 1 : -1;
    return out;
  }
  const double b = a_;
  guard(std::atanh((v - l) / b) / b, "arctanh argument -1 / logarithm pole");
  const double t = std::tanh(b * s);
  const double y = (-v + b * t) / l;
  out.theta = 2.0 * atanh_ext(y);
  out.x = l / v * s + std::log(std::abs((1.0 - b * t / (v + l)) / (1.0 + b * t / (l - v)))) / (2.0 * v);
  // z = -ln|lambda - v3 sinh theta| / (2 v3) + const, written in s.
  const double arg = (l * l - v * (v * std::cosh(2.0 * b * s) - b * std::sinh(2.0 * b * s))) / (l * (v * v + l * l));
  out.z = std::log(std::abs(arg)) / (2.0 * v);
  out.sigma = std::abs(y) < 1.0 ? 1 : -1;
  return out;
}

namespace {

// (position', theta') of the base curve; position is (x, y) for ruling e3 and (x, z) for ruling e2.
detail::State<3> curve_rhs(const CylCase& c, int sigma, const detail::State<3>& y) {
  const double th = y[2];
  const double sg = sigma < 0 ? -1.0 : 1.0;
  switch (c.kind) {
    case CylKind::RulingTimelikeVParallel: return {std::cos(th), std::sin(th), 2.0 * c.lambda};
    case CylKind::RulingTimelikeGeneral: return {std::cos(th), std::sin(th), theta_rhs(c, th, 1)};
    case CylKind::RulingSpacelikeSpacelike:
      return {sg * std::cosh(th), sg * std::sinh(th), theta_rhs(c, th, sigma)};
    case CylKind::RulingSpacelikeTimelike:
      return {sg * std::sinh(th), sg * std::cosh(th), theta_rhs(c, th, sigma)};
  }
  return {};
}

LVec3 embed(const CylCase& c, double a, double b) { return is_ruling_e3(c.kind) ? LVec3{a, b, 0.0} : LVec3{a, 0.0, b}; }

}  // namespace

BaseCurve integrate_base_curve(const CylCase& c, double theta_init, double s_begin, double s_end,
                               const IntegrationOptions& opt, int sigma, LVec3 start) {
  c.validate();
  if (!std::isfinite(s_begin) || !std::isfinite(s_end) || s_begin == s_end)
    throw DomainError("integrate_base_curve: invalid span");
  if (!(opt.rel_tol > 0.0) || !(opt.abs_tol > 0.0)) throw DomainError("integrate_base_curve: tolerances must be > 0");
  if (is_ruling_e3(c.kind) && sigma != 1) throw DomainError("integrate_base_curve: sigma = -1 only applies to ruling e2");

  const double dir = s_end > s_begin ? 1.0 : -1.0;
  const double span = std::abs(s_end - s_begin);
  const double h_min = 1e-14 * span;
  auto rhs = [&](const detail::State<3>& y, detail::State<3>& dy, double) {
    dy = curve_rhs(c, sigma, y);
    for (double& d : dy) d *= dir;
  };

  BaseCurve bc;
  bc.cas = c;
  bc.sigma = sigma;
  bc.causality = c.surface_causality();
  const bool e3r = is_ruling_e3(c.kind);
  detail::State<3> y{start.x, e3r ? start.y : start.z, theta_init};
  bc.samples.push_back({s_begin, embed(c, y[0], y[1]), y[2]});

  auto stepper = detail::make_stepper<3>(opt.abs_tol, opt.rel_tol, std::min(opt.max_step, span));
  stepper.initialize(y, 0.0, std::min(1e-3, span));
  auto push = [&](double tau, const detail::State<3>& st) {
    bc.samples.push_back({s_begin + dir * tau, embed(c, st[0], st[1]), st[2]});
  };
  try {
    while (stepper.current_time() < span) {
      const auto [t0, t1] = stepper.do_step(rhs);
      const auto& cur = stepper.current_state();
      if (!detail::all_finite<3>(cur)) {
        bc.truncated = true;
        bc.stop_reason = "non-finite state";
        break;
      }
      if (t1 >= span) {
        detail::State<3> end;
        stepper.calc_state(span, end);
        push(span, end);
        break;
      }
      push(t1, cur);
      if (std::abs(cur[2]) > opt.theta_cap) {
        bc.truncated = true;
        bc.stop_reason = "theta cap";
        break;
      }
      if (t1 - t0 < h_min) {
        bc.truncated = true;
        bc.stop_reason = "step underflow (blow-up)";
        break;
      }
    }
  } catch (const boost::numeric::odeint::odeint_error& e) {
    bc.truncated = true;
    bc.stop_reason = std::string("step rejected: ") + e.what();
  }
  if (bc.samples.size() < 2) throw NumericError("integrate_base_curve: immediate blow-up at the initial angle");
  if (dir < 0) std::reverse(bc.samples.begin(), bc.samples.end());
  return bc;
}

ChartJet extrusion_jet(const CylCase& c, int sigma, const LVec3& p, double theta, double theta_prime,
                       const LVec3& ruling, double t) {
  const double th = theta, d = theta_prime;
  const double sg = sigma < 0 ? -1.0 : 1.0;
  LVec3 ps, pss;
  // Tangent and its s-derivative: (cos, sin), sigma (cosh, sinh) or sigma (sinh, cosh).
  switch (c.kind) {
    case CylKind::RulingTimelikeVParallel:
    case CylKind::RulingTimelikeGeneral:
      ps = embed(c, std::cos(th), std::sin(th));
      pss = embed(c, -std::sin(th) * d, std::cos(th) * d);
      break;
    case CylKind::RulingSpacelikeSpacelike:
      ps = embed(c, sg * std::cosh(th), sg * std::sinh(th));
      pss = embed(c, sg * std::sinh(th) * d, sg * std::cosh(th) * d);
      break;
    case CylKind::RulingSpacelikeTimelike:
      ps = embed(c, sg * std::sinh(th), sg * std::cosh(th));
      pss = embed(c, sg * std::cosh(th) * d, sg * std::sinh(th) * d);
      break;
  }
  return {p + t * ruling, ps, ruling, pss, {}, {}};
}

SurfaceMesh extrude(const BaseCurve& base, const LVec3& ruling, double t_lo, double t_hi, std::size_t nt) {
  if (base.samples.empty()) throw DomainError("extrude: empty base curve");
  if (nt < 2) throw DomainError("extrude: need nt >= 2");
  const CylCase& c = base.cas;
  if (causal_character(ruling) != causal_character(c.ruling()))
    throw DomainError("extrude: ruling causality does not match the case");
  SurfaceMesh m;
  m.ns = base.samples.size();
  m.nt = nt;
  m.orientation = c.normal_orientation();
  m.velocity = c.velocity();
  m.lambda = c.lambda;
  for (const auto& smp : base.samples) {
    const double dth = curve_rhs(c, base.sigma, {0.0, 0.0, smp.theta})[2];
    for (std::size_t j = 0; j < nt; ++j) {
      const double t = t_lo + (t_hi - t_lo) * static_cast<double>(j) / static_cast<double>(nt - 1);
      const ChartJet jet = extrusion_jet(c, base.sigma, smp.p, smp.theta, dth, ruling, t);
      m.vertices.push_back(jet.p);
      m.jets.push_back(jet);
    }
  }
  m.quads = grid_quads(m.ns, m.nt);
  return m;
}

}  // namespace translators
