#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "translators/lorentz.hpp"
#include "translators/mesh.hpp"

namespace translators {

/// Axis causality (TA: e3, SA: e1) and surface causality (S, T).
enum class RotCase { TA_S, TA_T, SA_S, SA_T };

std::string_view to_string(RotCase c);
std::optional<RotCase> parse_rot_case(std::string_view s);

/// Rotation axis, also the velocity direction (e3 or e1).
LVec3 axis_direction(RotCase c);
CausalClass surface_causality(RotCase c);
/// True for TA_S and SA_T, whose radial coordinate obeys r' = cosh theta.
bool radial_is_cosh(RotCase c);

/// Phase-plane point. r is x (TA) or z (SA); height is the other profile
/// coordinate, accumulated along the orbit.
struct OrbitState {
  double r = 1.0;
  double theta = 0.0;
  double s = 0.0;
  double height = 0.0;
};

struct PhaseVelocity {
  double r = 0.0;
  double theta = 0.0;
  double height = 0.0;
};

/// Throws SingularityError for r <= 0.
PhaseVelocity system_rhs(RotCase c, const OrbitState& st, double lambda);

/// Principal curvatures along the profile (kappa1 = -theta') and the parallel.
std::pair<double, double> principal_curvatures(RotCase c, const OrbitState& st, double lambda);

/// Nullcline r = Gamma(theta) when the value lies in (0, inf).
std::optional<double> gamma(RotCase c, double theta, double lambda);

struct GammaAsymptotes {
  std::vector<double> vertical;  ///< theta values with Gamma -> inf
  double horizontal_r = 0.5;     ///< limit of Gamma as |theta| -> inf
  bool pole_at_zero = false;     ///< TA_S, lambda = 1: Gamma -> inf as theta -> 0+
};

GammaAsymptotes gamma_asymptotes(RotCase c, double lambda);

/// Open theta-intervals on which Gamma takes values in (0, inf).
std::vector<std::pair<double, double>> gamma_domain(RotCase c, double lambda);

struct StopPolicy {
  double eps_axis = 1e-6;
  double r_cap = 1e3;
  double theta_cap = 30.0;
  double s_budget = 1e3;
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = 0.5;
  /// Radius below which an orbit heading for the axis is continued with the
  /// regularized system in r.
  double axis_switch_r = 1e-2;
  /// Accepted distance between the tail-fit limit of theta and an asymptote.
  double asym_tol = 1e-5;
  /// |q*| below this is the orthogonal (radial) endpoint.
  double radial_tol = 1e-9;
};

enum class EndKind { AxisCusp, RadialOrigin, ThetaAsymptote, Unbounded, TrivialLine, Truncated };

std::string_view to_string(EndKind k);

struct EndpointDiagnosis {
  EndKind kind = EndKind::Truncated;
  double s = 0.0;
  double r = 0.0;
  double theta = 0.0;
  double height = 0.0;
  /// AxisCusp: q* = lim r sinh theta (TA_S, SA_T) or p* = lim r cosh theta
  /// (TA_T, SA_S). |theta| diverges logarithmically while q* stays finite.
  double axis_constant = 0.0;
  /// AxisCusp: d(height)/dr at r = 0, which is +-1.
  std::optional<double> slope_at_axis;
  /// ThetaAsymptote: the asymptote and the fitted limit of theta(r).
  double asymptote = 0.0;
  double fitted_limit = 0.0;
  std::string detail;
};

/// Integration result in one direction; samples start at the seed.
struct HalfOrbit {
  std::vector<OrbitState> samples;
  EndpointDiagnosis end;
};

struct Orbit {
  RotCase cas = RotCase::TA_S;
  double lambda = 1.0;
  std::vector<OrbitState> samples;  ///< s increasing
  EndpointDiagnosis forward_end;
  EndpointDiagnosis backward_end;
};

/// Adaptive integration until a stop fires: the axis (continued to r = 0 in
/// the regularized variables), the theta or r caps, or the s budget. When r
/// grows large the tail theta(r) ~ c0 + c1/r + c2/r^2 + c3/r^3 is fitted and
/// compared with the Gamma asymptotes. Step underflow away from the axis is a
/// finite-s blow-up and ends the half orbit as Unbounded. Throws DomainError
/// for a seed outside the phase plane, NumericError on immediate blow-up.
HalfOrbit integrate_orbit(RotCase c, const OrbitState& start, double lambda, int direction,
                          const StopPolicy& policy = {});

/// Both directions from the seed, merged.
Orbit trace_orbit(RotCase c, const OrbitState& start, double lambda, const StopPolicy& policy = {});

/// Forward orbit leaving the axis with axis constant q* (or p*), height 0 at s = 0.
HalfOrbit integrate_from_axis(RotCase c, double axis_constant, double lambda, const StopPolicy& policy = {},
                              double theta_sign = 1.0);

/// theta at increasing radii >= r0 for TA_S and SA_T, integrating
/// d theta / dr = theta' / cosh theta.
std::vector<double> theta_at_radii(RotCase c, double lambda, double r0, double theta0, std::span<const double> radii,
                                   double rel_tol = 1e-12, double abs_tol = 1e-14);

/// State reached from `from` at arclength s_target.
OrbitState state_at(RotCase c, double lambda, const OrbitState& from, double s_target);

struct SignSegment {
  double s_begin = 0.0;
  double s_end = 0.0;
  int r_sign = 0;
  int theta_sign = 0;
  int height_sign = 0;
};

struct Extremum {
  double s = 0.0;
  double value = 0.0;
  bool is_max = false;
};

struct ClassificationReport {
  RotCase cas = RotCase::TA_S;
  double lambda = 1.0;
  EndKind forward_kind = EndKind::Truncated;
  EndKind backward_kind = EndKind::Truncated;
  std::vector<SignSegment> signature;
  std::vector<double> gamma_crossings;
  std::vector<double> theta_zero_crossings;
  std::vector<double> gauss_sign_changes;
  std::vector<int> gauss_signs;  ///< sign of K on consecutive pieces
  std::vector<Extremum> r_extrema;
  std::vector<Extremum> height_extrema;
  std::optional<double> forward_cusp_slope;
  std::optional<double> backward_cusp_slope;
  int height_monotone = 0;  ///< +1 / -1 strictly monotone, 0 otherwise
  bool strictly_convex = false;  ///< K > 0 at every sample
  bool entire_graph = false;     ///< r' > 0 throughout, from the axis orthogonally to infinity
};

/// Localizes sign changes by bisection on re-integrated states (to 1e-10 in s).
ClassificationReport classify_orbit(const Orbit& orbit);

struct SeparatrixBracket {
  double lambda = 2.0;
  /// Axis constants q* of orbits seeded at (x, 0) and on the upper Gamma branch.
  std::vector<std::pair<double, double>> x0_sequence;
  std::vector<std::pair<double, double>> x1_sequence;
  double lower = 0.0;  ///< sup of the nondecreasing x0 sequence
  double upper = 0.0;  ///< inf of the nonincreasing x1 sequence
  bool degenerate = false;  ///< the two limits agree within the collapse tolerance
  double midpoint = 0.0;
  /// Separatrix integrated backward from far away on the slow manifold
  /// theta = theta0 + 1/(2r), where the asymptote is stable.
  double far_field_constant = 0.0;
  /// max |theta_mid(r) - theta_sep(r)| over r in [1, shadow_radius] for the
  /// orbit leaving the axis with q* = midpoint.
  double shadow_error = 0.0;
  double shadow_radius = 0.0;
  /// Tail fit of the far-field separatrix away from its seed.
  double separatrix_limit_fit = 0.0;
  bool midpoint_converges = false;
};

/// TA_S only, lambda > 1. Throws NumericError when a sequence is not monotone
/// beyond `monotone_tol`.
SeparatrixBracket separatrix_bracket(double lambda, double x_max = 100.0, const StopPolicy& policy = {},
                                     double monotone_tol = 1e-9);

/// Jet of the revolution chart at a profile state, with theta' supplied by the
/// caller (the system value, or a derivative estimated from data).
ChartJet revolution_jet(RotCase c, const OrbitState& st, double theta_prime, double t);

/// Revolution mesh over orbit samples with r > eps_axis and |theta| <= theta_max;
/// t over [t_lo, t_hi]. Past theta_max the metric cancels below double precision.
SurfaceMesh build_surface(const Orbit& orbit, double t_lo, double t_hi, std::size_t nt, double eps_axis = 1e-6,
                          double theta_max = 8.0);

/// Oscillation max_t - min_t of the residual along the parallel circle
/// through the profile point `at`, for the surface that is a translator with
/// velocity along the axis but evaluated with velocity v.
double parallel_axis_falsifier(RotCase c, const LVec3& v, double lambda, const OrbitState& at, std::size_t nt = 721);

/// Default nonplanar patch through (r, theta) = (1, 0.5).
double parallel_axis_falsifier(const LVec3& v, double lambda, RotCase c = RotCase::TA_S);

}  // namespace translators
