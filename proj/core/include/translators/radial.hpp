#pragma once

#include <span>
#include <vector>

#include "translators/mesh.hpp"
#include "translators/rotational.hpp"

namespace translators {

enum class RadialAxis { TimelikeAxis, SpacelikeAxis };

/// Source term of the axis IVP (r f(u'))' = 2 r phi(u').
/// Timelike axis: 1/sqrt(1-y^2) - lambda. Spacelike axis: -1/sqrt(1-y^2) - lambda.
double phi(double y, double lambda, RadialAxis axis = RadialAxis::TimelikeAxis);
/// y / sqrt(1 - y^2); DomainError for |y| >= 1.
double f(double y);
/// y / sqrt(1 + y^2), inverse of f, range (-1, 1).
double f_inv(double y);

/// w_new(r) = f_inv((2/r) int_0^r s phi(w(s)) ds) on the uniform grid
/// r_i = i R / (n-1), with w_new(0) = 0. Cumulative Simpson quadrature.
std::vector<double> apply_T(std::span<const double> w, double lambda, double R,
                            RadialAxis axis = RadialAxis::TimelikeAxis);

struct RadialConfig {
  double R = 0.0;  ///< 0 selects R from the contraction-ball condition
  int n_grid = 513;
  double tol_fp = 1e-12;
  int max_iter = 200;
  int max_halvings = 5;
};

struct RadialProfile {
  double lambda = 1.0;
  RadialAxis axis = RadialAxis::TimelikeAxis;
  double R = 0.0;
  std::vector<double> r;
  std::vector<double> u;
  std::vector<double> w;  ///< u'(r_i)
};

struct ContractionDiagnostics {
  int iterations = 0;
  std::vector<double> d;  ///< d_k = |w_{k+1} - w_k|_inf
  double q = 0.0;         ///< last ratio d_{k+1}/d_k above the round-off floor (0 if none)
  double R_used = 0.0;
  int halvings = 0;
  bool converged = false;
};

struct RadialSolution {
  RadialProfile profile;
  ContractionDiagnostics diagnostics;
};

/// Initial radius: min(0.5, root of |phi(0)| R (R/2 + 1) = 1/2).
double initial_radius(double lambda, RadialAxis axis);

/// Picard iteration w <- T(w) from w = 0. Halves R when the slope bound or the
/// iteration budget fails; throws NumericError after max_halvings.
RadialSolution solve_radial(double lambda, RadialAxis axis = RadialAxis::TimelikeAxis, const RadialConfig& cfg = {});

/// Cumulative Simpson integral of y on a uniform grid with step h, starting at 0.
std::vector<double> cumulative_simpson(std::span<const double> y, double h);

/// 2a from the least-squares fit u = a r^2 + b r^4 on [0, R/4].
double second_deriv_at_origin(const RadialProfile& p);

/// Phase-plane state at the grid node nearest to r_h: theta = atanh(w),
/// height = u, s = int_0^r sqrt(1 - w^2). DomainError unless r_h in (1e-5, R].
OrbitState handoff_to_phase_plane(const RadialProfile& p, double r_h);

/// Phase-plane case continuing the profile (TA_S or SA_T).
RotCase radial_case(RadialAxis axis);

/// Orbit made of the profile on [0, r_h] and its phase-plane continuation.
Orbit radial_orbit(const RadialProfile& p, double r_h, const StopPolicy& policy = {});

/// Jet of the graph chart (r cos t, r sin t, u) for the timelike axis or
/// (u, r sinh t, r cosh t) for the spacelike axis, given u, w = u' and w' at r.
ChartJet radial_graph_jet(RadialAxis axis, double r, double u, double w, double w_prime, double t);

/// max |H - <N,v> - lambda| over nodes with r >= R/20, u'' by fourth-order differences of w.
double radial_residual(const RadialProfile& p);

}  // namespace translators
