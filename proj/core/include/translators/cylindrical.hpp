#pragma once

#include <optional>
#include <string>
#include <vector>

#include "translators/lorentz.hpp"
#include "translators/mesh.hpp"

namespace translators {

enum class CylKind {
  RulingTimelikeVParallel,  ///< ruling e3, v parallel to e3: circle of curvature 2 lambda
  RulingTimelikeGeneral,    ///< ruling e3, v = (0, v2, v3), v2 > 0
  RulingSpacelikeSpacelike, ///< ruling e2, spacelike surface, v3 > 0
  RulingSpacelikeTimelike,  ///< ruling e2, timelike surface, v3 > 0
};

/// Cylindrical translator data. The base curve lies in z = 0 (ruling e3) or
/// y = 0 (ruling e2); theta is the tangent angle (Euclidean or hyperbolic).
struct CylCase {
  CylKind kind = CylKind::RulingSpacelikeSpacelike;
  double lambda = 1.0;
  double v2 = 0.0;
  double v3 = 1.0;

  static CylCase circle(double lambda);
  static CylCase timelike_ruling(double lambda, double v2, double v3 = 0.0);
  static CylCase spacelike_surface(double lambda, double v3, double v2 = 0.0);
  static CylCase timelike_surface(double lambda, double v3, double v2 = 0.0);

  /// Throws DomainError naming the violated normalization.
  void validate() const;

  LVec3 ruling() const;
  CausalClass surface_causality() const;

  /// Velocity and normal orientation under which the case's ODE is exactly the
  /// translator equation for the chart (x(s), y(s), t) or (x(s), t, z(s)).
  /// For the timelike-surface case the ODE theta' = 2(lambda - v3 sinh theta)
  /// holds for velocity (0, v2, -v3) with the reversed normal.
  LVec3 velocity() const;
  int normal_orientation() const;
};

/// Right-hand side of theta' for tangent branch sigma = +-1 (sigma = -1 is the
/// reversed tangent x' = -cosh theta, ... of cases 2.x). Throws DomainError
/// for the circle case.
double theta_rhs(const CylCase& c, double theta, int sigma = 1);

struct CurveSample {
  double s = 0.0;
  LVec3 p;
  double theta = 0.0;
};

struct BaseCurve {
  CylCase cas;
  int sigma = 1;
  CausalClass causality = CausalClass::Timelike;
  std::vector<CurveSample> samples;
  bool truncated = false;    ///< stopped before the end of the requested span
  std::string stop_reason;   ///< empty when the span was completed
};

/// Counterclockwise circle of radius 1/(2 lambda) centred at the origin, n samples.
BaseCurve circle_solution(double lambda, int n = 257);

/// Real roots of theta_rhs(c, .) = 0 in (-pi, pi] for case 1.2.
std::vector<double> equilibrium_thetas(const CylCase& c);

enum class Subcase { LambdaAbove, LambdaEqual, LambdaBelow };

struct ClosedFormPoint {
  double theta = 0.0;
  double x = 0.0;
  double z = 0.0;
  int sigma = 1;  ///< tangent branch the formulas trace at this s
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double s) const { return s > lo && s < hi; }
};

/// Explicit base curves of the ruling-e2 cases.
///
/// arctanh is continued as (1/2) ln|(1+y)/(1-y)|. Where the argument leaves
/// (-1, 1) the formulas trace the reversed tangent (sigma = -1). Maximal
/// domains are the open intervals between consecutive singular points, where
/// the curve itself blows up. The coth and tan poles of the formulas are
/// removable (the continued arctanh tends to 0) and are evaluated by continuity.
class ClosedFormFamily {
 public:
  explicit ClosedFormFamily(const CylCase& c);

  const CylCase& cas() const { return c_; }
  Subcase subcase() const { return sub_; }

  /// Sorted singular points in the closed window [lo, hi].
  std::vector<double> singular_points(double lo, double hi) const;

  /// Open component of the maximal domain containing s; DomainError at a singular point.
  Interval component(double s) const;

  /// DomainError naming the singularity when s is singular.
  ClosedFormPoint evaluate(double s) const;

 private:
  CylCase c_;
  Subcase sub_;
  double a_ = 0.0;  // sqrt|lambda^2 - v3^2| or sqrt(lambda^2 + v3^2)
  double k_ = 0.0;
};

struct IntegrationOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  double theta_cap = 30.0;
  double max_step = 0.05;  ///< also the output spacing upper bound
};

/// Integrates (position, theta) from s_begin to s_end (either order) starting
/// at `start`. Samples are returned with s increasing. Stops early at
/// |theta| > theta_cap or when the step falls below 1e-14 |span|.
BaseCurve integrate_base_curve(const CylCase& c, double theta_init, double s_begin, double s_end,
                               const IntegrationOptions& opt = {}, int sigma = 1, LVec3 start = {});

/// Jet of psi(s, t) = alpha(s) + t a at a base point with tangent angle theta
/// and theta' = theta_prime; the tangent follows the case's structure equations.
ChartJet extrusion_jet(const CylCase& c, int sigma, const LVec3& p, double theta, double theta_prime,
                       const LVec3& ruling, double t);

/// Extrusion psi(s, t) = alpha(s) + t a over the samples of the base curve.
/// The jets are exact: derivatives of the base curve come from the ODE.
SurfaceMesh extrude(const BaseCurve& base, const LVec3& ruling, double t_lo, double t_hi, std::size_t nt);

}  // namespace translators
