#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "translators/error.hpp"
#include "translators/rotational.hpp"

using namespace translators;
using translators::testing::rng;
using translators::testing::uniform;

namespace {

constexpr RotCase kAll[] = {RotCase::TA_S, RotCase::TA_T, RotCase::SA_S, RotCase::SA_T};

// Independent fixed-step RK4 on (r, theta, height), written out from the
// four systems rather than calling the library right-hand side.
std::array<double, 3> rk4_oracle(RotCase c, double lambda, std::array<double, 3> y, double span, int steps) {
  auto f = [&](const std::array<double, 3>& u) -> std::array<double, 3> {
    const double r = u[0], ch = std::cosh(u[1]), sh = std::sinh(u[1]);
    switch (c) {
      case RotCase::TA_S: return {ch, 2 * ch - 2 * lambda - sh / r, sh};
      case RotCase::TA_T: return {sh, 2 * sh - 2 * lambda - ch / r, ch};
      case RotCase::SA_S: return {sh, -2 * sh - 2 * lambda - ch / r, ch};
      case RotCase::SA_T: return {ch, -2 * ch - 2 * lambda - sh / r, sh};
    }
    return {};
  };
  const double h = span / steps;
  for (int i = 0; i < steps; ++i) {
    const auto k1 = f(y);
    std::array<double, 3> t;
    for (int j = 0; j < 3; ++j) t[j] = y[j] + 0.5 * h * k1[j];
    const auto k2 = f(t);
    for (int j = 0; j < 3; ++j) t[j] = y[j] + 0.5 * h * k2[j];
    const auto k3 = f(t);
    for (int j = 0; j < 3; ++j) t[j] = y[j] + h * k3[j];
    const auto k4 = f(t);
    for (int j = 0; j < 3; ++j) y[j] += h / 6 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
  }
  return y;
}

double max_relative_residual(const SurfaceMesh& m) {
  double w = 0.0;
  for (const auto& s : interior_samples(m)) w = std::max(w, std::abs(s.residual) / std::max(1.0, std::abs(s.H)));
  return w;
}

bool near_any(double s, const std::vector<double>& xs, double tol) {
  return std::any_of(xs.begin(), xs.end(), [&](double x) { return std::abs(x - s) <= tol; });
}

}  // namespace

TEST(RotationalSystem, Values) {
  const auto a = system_rhs(RotCase::TA_S, {1, 0, 0, 0}, 1.0);
  EXPECT_DOUBLE_EQ(a.r, 1.0);
  EXPECT_DOUBLE_EQ(a.theta, 0.0);
  EXPECT_DOUBLE_EQ(a.height, 0.0);
  EXPECT_DOUBLE_EQ(system_rhs(RotCase::TA_S, {1, 0, 0, 0}, 0.5).theta, 1.0);
  const auto b = system_rhs(RotCase::SA_T, {1, 0, 0, 0}, 1.0);
  EXPECT_DOUBLE_EQ(b.theta, -4.0);
  EXPECT_DOUBLE_EQ(b.r, 1.0);
  EXPECT_THROW(system_rhs(RotCase::TA_S, {0, 0, 0, 0}, 1.0), SingularityError);
  const auto [k1, k2] = principal_curvatures(RotCase::TA_S, {2, 0.3, 0, 0}, 0.5);
  EXPECT_DOUBLE_EQ(k1, -system_rhs(RotCase::TA_S, {2, 0.3, 0, 0}, 0.5).theta);
  EXPECT_DOUBLE_EQ(k2, -std::sinh(0.3) / 2);
}

TEST(RotationalSystem, LambdaDomain) {
  EXPECT_THROW(integrate_orbit(RotCase::TA_S, {1, 0, 0, 0}, 0.0, 1), DomainError);
  EXPECT_NO_THROW(integrate_orbit(RotCase::SA_T, {1, 0, 0, 0}, 0.0, 1));
  EXPECT_THROW(integrate_orbit(RotCase::TA_S, {-1, 0, 0, 0}, 1.0, 1), DomainError);
  EXPECT_THROW(integrate_orbit(RotCase::TA_S, {1, 0, 0, 0}, 1.0, 0), DomainError);
}

TEST(Gamma, Values) {
  EXPECT_EQ(gamma(RotCase::TA_S, 0.0, 0.5), 0.0);
  // -sinh(-1) / (2 (cosh 1 + 1)) evaluated directly.
  EXPECT_NEAR(*gamma(RotCase::SA_T, -1.0, 1.0), 0.23105857863000487, 1e-15);
  EXPECT_FALSE(gamma(RotCase::SA_T, 1.0, 1.0).has_value());
  EXPECT_FALSE(gamma(RotCase::TA_S, 0.5, 2.0).has_value());
  EXPECT_EQ(gamma(RotCase::TA_T, INFINITY, 0.5), 0.5);
}

TEST(Gamma, Asymptotes) {
  const auto a = gamma_asymptotes(RotCase::TA_S, 2.0);
  ASSERT_EQ(a.vertical.size(), 2u);
  EXPECT_NEAR(a.vertical[1], 1.3169578969248166, 1e-15);
  EXPECT_TRUE(gamma_asymptotes(RotCase::TA_S, 0.5).vertical.empty());
  EXPECT_TRUE(gamma_asymptotes(RotCase::TA_S, 1.0).pole_at_zero);
  EXPECT_TRUE(gamma_asymptotes(RotCase::SA_T, 1.0).vertical.empty());
  EXPECT_NEAR(gamma_asymptotes(RotCase::TA_T, 0.5).vertical.at(0), std::asinh(0.5), 1e-15);
  EXPECT_NEAR(gamma_asymptotes(RotCase::SA_S, 0.5).vertical.at(0), -std::asinh(0.5), 1e-15);
  EXPECT_EQ(gamma_domain(RotCase::TA_S, 2.0).size(), 2u);
}

// Property: theta' vanishes on Gamma throughout its domain.
TEST(GammaProperty, IsNullcline) {
  auto g = rng(30);
  for (RotCase c : kAll)
    for (double lambda : {0.5, 1.0, 2.0})
      for (const auto& [lo, hi] : gamma_domain(c, lambda)) {
        const double a = std::max(lo, -6.0), b = std::min(hi, 6.0);
        for (int k = 0; k < 100; ++k) {
          const double th = uniform(g, a, b);
          const auto r = gamma(c, th, lambda);
          if (!r) continue;
          const auto d = system_rhs(c, {*r, th, 0, 0}, lambda);
          ASSERT_LE(std::abs(d.theta), 1e-9 * std::max(1.0, std::cosh(th))) << to_string(c) << " theta " << th;
        }
      }
}

TEST(Orbit, MatchesIndependentRk4) {
  for (RotCase c : kAll) {
    const OrbitState seed{1.0, 0.2, 0.0, 0.0};
    const auto st = state_at(c, 0.7, seed, 0.4);
    const auto ref = rk4_oracle(c, 0.7, {1.0, 0.2, 0.0}, 0.4, 4000);
    EXPECT_NEAR(st.r, ref[0], 1e-10) << to_string(c);
    EXPECT_NEAR(st.theta, ref[1], 1e-10) << to_string(c);
    EXPECT_NEAR(st.height, ref[2], 1e-10) << to_string(c);
    const auto half = integrate_orbit(c, seed, 0.7, 1);
    for (const auto& s : half.samples) {
      if (s.s > 0.4 || s.s == 0.0) continue;
      const auto r = rk4_oracle(c, 0.7, {1.0, 0.2, 0.0}, s.s, 2000);
      ASSERT_NEAR(s.theta, r[1], 1e-8) << to_string(c) << " s " << s.s;
    }
  }
}

TEST(Orbit, TrivialLine) {
  const auto o = trace_orbit(RotCase::TA_S, {1, 0, 0, 0}, 1.0);
  EXPECT_EQ(o.forward_end.kind, EndKind::TrivialLine);
  EXPECT_EQ(o.backward_end.kind, EndKind::TrivialLine);
  for (const auto& s : o.samples) ASSERT_LE(std::abs(s.theta), 1e-10);
}

TEST(Orbit, BelowOneEnds) {
  const auto o = trace_orbit(RotCase::TA_S, {1, 0, 0, 0}, 0.5);
  EXPECT_EQ(o.backward_end.kind, EndKind::AxisCusp);
  EXPECT_EQ(o.forward_end.kind, EndKind::Unbounded);
  EXPECT_LT(o.backward_end.axis_constant, 0.0);
  EXPECT_GT(o.samples.back().theta, 10.0);
  EXPECT_EQ(o.backward_end.r, 0.0);
}

TEST(Orbit, AboveOneForwardAsymptote) {
  const auto o = trace_orbit(RotCase::TA_S, {1, 0, 0, 0}, 2.0);
  EXPECT_EQ(o.forward_end.kind, EndKind::ThetaAsymptote);
  EXPECT_NEAR(o.forward_end.asymptote, -std::acosh(2.0), 1e-15);
  EXPECT_NEAR(o.forward_end.fitted_limit, -std::acosh(2.0), 1e-5);
}

// Property: every axis cusp has |dh/dr| -> 1 on approach and a finite axis constant.
TEST(OrbitProperty, CuspSlopeIsUnit) {
  auto g = rng(31);
  for (RotCase c : kAll) {
    for (int k = 0; k < 6; ++k) {
      const OrbitState seed{uniform(g, 0.3, 2.0), uniform(g, -1.0, 1.0), 0, 0};
      const double lambda = uniform(g, 0.2, 2.5);
      const auto o = trace_orbit(c, seed, lambda);
      for (const auto* end : {&o.forward_end, &o.backward_end}) {
        if (end->kind != EndKind::AxisCusp) continue;
        ASSERT_TRUE(end->slope_at_axis.has_value());
        EXPECT_EQ(std::abs(*end->slope_at_axis), 1.0);
        EXPECT_TRUE(std::isfinite(end->axis_constant));
        // Samples closest to the axis: dh/dr = tanh or coth of theta.
        const auto& near = end == &o.forward_end ? o.samples.back() : o.samples.front();
        ASSERT_EQ(near.r, StopPolicy{}.eps_axis) << to_string(c);
        const double slope = radial_is_cosh(c) ? std::tanh(near.theta) : 1.0 / std::tanh(near.theta);
        EXPECT_NEAR(std::abs(slope), 1.0, 1e-6) << to_string(c);
      }
    }
  }
}

// Property: the arclength bookkeeping matches the Lorentzian length of the
// recorded profile, |r'^2 - h'^2| = 1.
TEST(OrbitProperty, UnitSpeedProfile) {
  for (RotCase c : kAll) {
    const auto o = trace_orbit(c, {1.0, 0.3, 0, 0}, 0.8);
    for (std::size_t i = 1; i < o.samples.size(); ++i) {
      const auto& a = o.samples[i - 1];
      const auto& b = o.samples[i];
      if (a.r < 0.05 || b.r < 0.05 || std::abs(b.theta) > 4 || b.s - a.s > 0.02 || b.s - a.s < 1e-6) continue;
      const double dr = (b.r - a.r) / (b.s - a.s), dh = (b.height - a.height) / (b.s - a.s);
      const double mid = 0.5 * (a.theta + b.theta);
      const double scale = std::cosh(mid) * std::cosh(mid);
      ASSERT_NEAR(std::abs(dr * dr - dh * dh), 1.0, 1e-3 * scale) << to_string(c) << " s " << a.s;
    }
  }
}

TEST(Classify, TaSBelowOne) {
  const auto rep = classify_orbit(trace_orbit(RotCase::TA_S, {1, 0, 0, 0}, 0.5));
  ASSERT_EQ(rep.height_extrema.size(), 1u);
  EXPECT_FALSE(rep.height_extrema[0].is_max);
  EXPECT_EQ(rep.backward_kind, EndKind::AxisCusp);
  // Orbit above the radial one: one Gamma crossing, K from negative to positive.
  const auto above = classify_orbit(trace_orbit(RotCase::TA_S, {1, 1, 0, 0}, 0.5));
  EXPECT_EQ(above.gamma_crossings.size(), 1u);
  EXPECT_EQ(above.gauss_signs, (std::vector<int>{-1, 1}));
}

TEST(Classify, TaTHeightIncreasing) {
  for (double th : {-1.0, 0.0, 1.0, 2.0}) {
    const auto rep = classify_orbit(trace_orbit(RotCase::TA_T, {1, th, 0, 0}, 0.5));
    EXPECT_EQ(rep.height_monotone, 1) << th;
    EXPECT_TRUE(rep.height_extrema.empty());
  }
}

TEST(Classify, SaSMaximumIsSeed) {
  for (double z0 : {0.5, 1.0, 2.0}) {
    const auto o = trace_orbit(RotCase::SA_S, {z0, 0, 0, 0}, 0.5);
    const auto rep = classify_orbit(o);
    EXPECT_EQ(o.forward_end.kind, EndKind::AxisCusp);
    EXPECT_EQ(o.backward_end.kind, EndKind::AxisCusp);
    ASSERT_EQ(rep.r_extrema.size(), 1u);
    EXPECT_TRUE(rep.r_extrema[0].is_max);
    EXPECT_NEAR(rep.r_extrema[0].value, z0, 1e-8);
  }
}

// Property: K changes sign only where kappa1 (Gamma) or kappa2 (theta = 0 or
// the axis-parallel direction) vanishes.
TEST(ClassifyProperty, GaussSignChangesAtCurvatureZeros) {
  auto g = rng(32);
  for (RotCase c : kAll) {
    for (int k = 0; k < 5; ++k) {
      const double lambda = uniform(g, 0.2, 2.5);
      const auto rep = classify_orbit(trace_orbit(c, {uniform(g, 0.3, 2.0), uniform(g, -1.5, 1.5), 0, 0}, lambda));
      for (double s : rep.gauss_sign_changes) {
        const bool kappa2_zero = radial_is_cosh(c) && near_any(s, rep.theta_zero_crossings, 1e-4);
        EXPECT_TRUE(near_any(s, rep.gamma_crossings, 1e-4) || kappa2_zero) << to_string(c) << " s " << s;
      }
      for (double s : rep.gamma_crossings) EXPECT_TRUE(near_any(s, rep.gauss_sign_changes, 1e-4));
    }
  }
}

TEST(Separatrix, LambdaTwo) {
  const auto b = separatrix_bracket(2.0);
  for (std::size_t k = 1; k < b.x0_sequence.size(); ++k) {
    EXPECT_GE(b.x0_sequence[k].second, b.x0_sequence[k - 1].second - 1e-9);
    EXPECT_LE(b.x1_sequence[k].second, b.x1_sequence[k - 1].second + 1e-9);
  }
  EXPECT_LE(b.lower, b.upper);
  EXPECT_GE(b.far_field_constant, b.lower - 1e-9);
  EXPECT_LE(b.far_field_constant, b.upper + 1e-9);
  EXPECT_NEAR(b.separatrix_limit_fit, std::acosh(2.0), 1e-5);
  EXPECT_TRUE(b.midpoint_converges);
  EXPECT_LE(b.shadow_error, 1e-6);
}

TEST(Separatrix, SlowGrowthStillBrackets) {
  const auto b = separatrix_bracket(1.0001);
  EXPECT_GT(b.upper - b.lower, 0.0);
  EXPECT_GE(b.far_field_constant, b.lower - 1e-9);
  EXPECT_LE(b.far_field_constant, b.upper + 1e-9);
  EXPECT_THROW(separatrix_bracket(1.0), DomainError);
}

TEST(Surface, ResidualAllCases) {
  for (RotCase c : kAll) {
    const auto o = trace_orbit(c, {1.0, 0.3, 0, 0}, 0.8);
    const auto m = build_surface(o, 0.0, 1.0, 5);
    EXPECT_LT(max_relative_residual(m), 1e-6) << to_string(c);
  }
  const auto plane = build_surface(trace_orbit(RotCase::TA_S, {1, 0, 0, 0}, 1.0), 0, 1, 4);
  for (const auto& s : interior_samples(plane)) EXPECT_LE(std::abs(s.residual), 1e-14);
}

// Property: the rotation group of the axis maps the surface to itself with v fixed.
TEST(SurfaceProperty, ResidualInvariantUnderAxisGroup) {
  auto g = rng(33);
  for (RotCase c : kAll) {
    // Away from the axis and the theta cap, where residuals are at roundoff.
    const auto m = build_surface(trace_orbit(c, {1.0, 0.3, 0, 0}, 0.8), 0.0, 1.0, 4, 0.05, 3.0);
    const auto base = interior_samples(m);
    for (int k = 0; k < 5; ++k) {
      const double a = uniform(g, -2, 2);
      const auto iso = axis_direction(c) == e3 ? Isometry::timelike_rotation(a) : Isometry::spacelike_rotation(a);
      const auto moved = transformed(m, iso * Isometry::translation(uniform(g, -1, 1) * axis_direction(c)));
      EXPECT_EQ(moved.velocity, m.velocity);
      const auto after = interior_samples(moved);
      for (std::size_t i = 0; i < base.size(); ++i)
        ASSERT_NEAR(after[i].residual, base[i].residual, 1e-10 * std::max(1.0, std::abs(base[i].H)));
    }
  }
}

TEST(Falsifier, ParallelVersusOblique) {
  for (RotCase c : kAll) {
    EXPECT_LE(parallel_axis_falsifier(c, axis_direction(c), 1.0, {1, 0.5, 0, 0}), 1e-9) << to_string(c);
    EXPECT_GE(parallel_axis_falsifier(c, {1, 0, 1}, 1.0, {1, 0.5, 0, 0}), 1e-2) << to_string(c);
  }
}

TEST(AxisStart, ReachesSwitchRadius) {
  const auto h = integrate_from_axis(RotCase::TA_S, 0.3, 2.0);
  ASSERT_FALSE(h.samples.empty());
  EXPECT_LT(h.samples.front().r, 1e-4);
  // dQ/dr = 2 (rho - lambda r) is bounded near the axis, so Q(r) = q* + O(r).
  const auto& first = h.samples.front();
  EXPECT_EQ(first.r, StopPolicy{}.eps_axis);
  EXPECT_NEAR(first.r * std::sinh(first.theta), 0.3, 4.0 * first.r);
  EXPECT_THROW(integrate_from_axis(RotCase::TA_T, -1.0, 1.0), DomainError);
}
