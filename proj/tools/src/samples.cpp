#include <algorithm>
#include <cmath>

#include "internal.hpp"
#include "translators/curvature.hpp"
#include "translators/error.hpp"

namespace translator {

using namespace translators;

namespace {

double norm(const LVec3& a) { return std::sqrt(euclidean_norm_sq(a)); }

bool increasing_stencil(std::span<const double> x, std::size_t i) {
  for (std::size_t k = i - 2; k < i + 2; ++k)
    if (!(x[k + 1] > x[k])) return false;
  return true;
}

class Accumulator {
 public:
  explicit Accumulator(double lambda) : lambda_(lambda) {}
  void add(const SurfaceSample& smp, double tangent) {
    samples_.push_back(smp);
    out_.max_rel = std::max(out_.max_rel, relative_residual(smp, lambda_));
    out_.tangent_mismatch = std::max(out_.tangent_mismatch, tangent);
  }
  DataResidual finish(const char* what) {
    if (samples_.empty()) throw DomainError(std::string(what) + ": too few samples for a five-point stencil");
    out_.stats = residual_statistics(samples_);
    return out_;
  }

 private:
  double lambda_;
  std::vector<SurfaceSample> samples_;
  DataResidual out_;
};

}  // namespace

double relative_residual(const SurfaceSample& smp, double lambda) {
  const double nv = smp.H - smp.residual - lambda;
  const double scale = std::max({1.0, std::abs(smp.kappa1), std::abs(smp.kappa2), std::sqrt(std::abs(smp.K)),
                                 std::abs(nv)});
  return std::abs(smp.residual) / scale;
}

Json DataResidual::to_json() const {
  Json j;
  j["count"] = stats.count;
  j["max_abs"] = stats.max_abs;
  j["mean_abs"] = stats.mean_abs;
  j["max_rel"] = max_rel;
  j["tangent_mismatch"] = tangent_mismatch;
  return j;
}

double lagrange5_derivative(std::span<const double> x, std::span<const double> y, std::size_t i) {
  double d = 0.0;
  for (std::size_t k = i - 2; k <= i + 2; ++k) {
    double w = 0.0;
    if (k == i) {
      for (std::size_t m = i - 2; m <= i + 2; ++m)
        if (m != i) w += 1.0 / (x[i] - x[m]);
    } else {
      double num = 1.0, den = 1.0;
      for (std::size_t m = i - 2; m <= i + 2; ++m) {
        if (m == k) continue;
        den *= x[k] - x[m];
        if (m != i) num *= x[i] - x[m];
      }
      w = num / den;
    }
    d += w * y[k];
  }
  return d;
}

DataResidual base_curve_residual(const CylCase& c, int sigma, std::span<const double> s, std::span<const double> x,
                                 std::span<const double> y, std::span<const double> z,
                                 std::span<const double> theta) {
  Accumulator acc(c.lambda);
  for (std::size_t i = 2; i + 2 < s.size(); ++i) {
    if (!increasing_stencil(s, i)) continue;
    const LVec3 p{x[i], y[i], z[i]};
    const LVec3 dp{lagrange5_derivative(s, x, i), lagrange5_derivative(s, y, i), lagrange5_derivative(s, z, i)};
    const ChartJet jet = extrusion_jet(c, sigma, p, theta[i], lagrange5_derivative(s, theta, i), c.ruling(), 0.0);
    const SurfaceSample smp = curvature_from_jet(jet, c.normal_orientation(), c.velocity(), c.lambda);
    acc.add(smp, norm(dp - jet.ps) / std::max(1.0, norm(jet.ps)));
  }
  return acc.finish("base curve");
}

DataResidual orbit_residual(RotCase c, double lambda, std::span<const double> s,
                            std::span<const double> r, std::span<const double> theta,
                            std::span<const double> height) {
  const bool q = radial_is_cosh(c);
  Accumulator acc(lambda);
  for (std::size_t i = 2; i + 2 < s.size(); ++i) {
    if (!increasing_stencil(s, i)) continue;
    bool usable = true;
    for (std::size_t k = i - 2; k <= i + 2; ++k) usable = usable && r[k] > kOrbitRMin && std::abs(theta[k]) <= kOrbitThetaMax;
    if (!usable) continue;
    const OrbitState st{r[i], theta[i], s[i], height[i]};
    const ChartJet jet = revolution_jet(c, st, lagrange5_derivative(s, theta, i), 0.0);
    const SurfaceSample smp = curvature_from_jet(jet, 1, axis_direction(c), lambda);
    const double ch = std::cosh(theta[i]), sh = std::sinh(theta[i]);
    const double dr = lagrange5_derivative(s, r, i) - (q ? ch : sh);
    const double dh = lagrange5_derivative(s, height, i) - (q ? sh : ch);
    acc.add(smp, std::hypot(dr, dh) / ch);
  }
  return acc.finish("orbit");
}

DataResidual profile_residual(RadialAxis axis, double lambda, std::span<const double> r, std::span<const double> u,
                              std::span<const double> w) {
  if (r.empty()) throw DomainError("profile: no samples");
  const double R = r.back();
  const LVec3 v = axis_direction(radial_case(axis));
  Accumulator acc(lambda);
  for (std::size_t i = 2; i + 2 < r.size(); ++i) {
    if (r[i] < R / 20.0 || !increasing_stencil(r, i)) continue;
    const ChartJet jet = radial_graph_jet(axis, r[i], u[i], w[i], lagrange5_derivative(r, w, i), 0.0);
    const SurfaceSample smp = curvature_from_jet(jet, 1, v, lambda);
    acc.add(smp, std::abs(lagrange5_derivative(r, u, i) - w[i]) / std::max(1.0, std::abs(w[i])));
  }
  return acc.finish("profile");
}

}  // namespace translator
