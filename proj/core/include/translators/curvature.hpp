#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "translators/lorentz.hpp"

namespace translators {

/// Position and partial derivatives of a chart psi(s, t) up to order two.
struct ChartJet {
  LVec3 p, ps, pt, pss, pst, ptt;
};

/// Surface chart handed to the curvature oracle.
///
/// The unit normal is +-(-c.x, -c.y, c.z)/sqrt|<n,n>| with c = ps x pt the
/// Euclidean cross product; `orientation` picks the sign.
struct SurfaceChart {
  std::function<LVec3(double, double)> position;
  /// Analytic jet; when empty the oracle differentiates `position`.
  std::function<ChartJet(double, double)> jet;
  int orientation = 1;
};

struct SurfaceSample {
  LVec3 p;
  LVec3 N;
  double eps = 0.0;  ///< <N,N>: -1 spacelike surface, +1 timelike surface
  double kappa1 = 0.0;
  double kappa2 = 0.0;
  double H = 0.0;
  double K = 0.0;  ///< kappa1 * kappa2 = det of the shape operator
  double residual = 0.0;
  /// False when the shape operator of a timelike surface has complex eigenvalues;
  /// kappa1 = kappa2 = H then, while K still holds the determinant.
  bool real_principal = true;
};

inline constexpr double tol_degenerate = 1e-14;

/// Central differences with step 1e-4 (1 + |s|) and one Richardson level.
ChartJet finite_difference_jet(const std::function<LVec3(double, double)>& position, double s, double t);

/// Shape-operator data of the jet and the residual H - <N,v> - lambda.
///
/// kappa1 is the s-direction curvature whenever F and f vanish (all
/// invariant-surface charts of this library); otherwise the eigenvalues are
/// ordered kappa1 >= kappa2. Throws DegeneracyError when |det I| is below
/// tol_degenerate relative to the squared metric coefficients.
SurfaceSample curvature_from_jet(const ChartJet& j, int orientation, const LVec3& v, double lambda);

SurfaceSample curvature_sample(const SurfaceChart& chart, double s, double t, const LVec3& v, double lambda);

struct ResidualStats {
  double max_abs = 0.0;
  double mean_abs = 0.0;
  std::size_t count = 0;
};

/// Throws DomainError on an empty list.
ResidualStats residual_statistics(std::span<const SurfaceSample> samples);

}  // namespace translators
