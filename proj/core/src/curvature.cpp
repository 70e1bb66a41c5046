#include "translators/curvature.hpp"

#include <algorithm>
#include <cmath>

#include "translators/error.hpp"

namespace translators {

namespace {

LVec3 cross(const LVec3& a, const LVec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

LVec3 richardson(const LVec3& coarse, const LVec3& fine) { return (1.0 / 3.0) * (4.0 * fine - coarse); }

}  // namespace

ChartJet finite_difference_jet(const std::function<LVec3(double, double)>& position, double s, double t) {
  const double hs0 = 1e-4 * (1.0 + std::abs(s));
  const double ht0 = 1e-4 * (1.0 + std::abs(t));
  auto level = [&](double hs, double ht) {
    const LVec3 c = position(s, t);
    const LVec3 sp = position(s + hs, t), sm = position(s - hs, t);
    const LVec3 tp = position(s, t + ht), tm = position(s, t - ht);
    const LVec3 pp = position(s + hs, t + ht), pm = position(s + hs, t - ht);
    const LVec3 mp = position(s - hs, t + ht), mm = position(s - hs, t - ht);
    ChartJet j;
    j.p = c;
    j.ps = (0.5 / hs) * (sp - sm);
    j.pt = (0.5 / ht) * (tp - tm);
    j.pss = (1.0 / (hs * hs)) * (sp - 2.0 * c + sm);
    j.ptt = (1.0 / (ht * ht)) * (tp - 2.0 * c + tm);
    j.pst = (0.25 / (hs * ht)) * (pp - pm - mp + mm);
    return j;
  };
  const ChartJet a = level(hs0, ht0);
  const ChartJet b = level(0.5 * hs0, 0.5 * ht0);
  return {a.p,
          richardson(a.ps, b.ps),
          richardson(a.pt, b.pt),
          richardson(a.pss, b.pss),
          richardson(a.pst, b.pst),
          richardson(a.ptt, b.ptt)};
}

SurfaceSample curvature_from_jet(const ChartJet& j, int orientation, const LVec3& v, double lambda) {
  const double E = minkowski_inner(j.ps, j.ps);
  const double F = minkowski_inner(j.ps, j.pt);
  const double G = minkowski_inner(j.pt, j.pt);
  const double det = E * G - F * F;
  if (!(std::abs(det) > tol_degenerate * (E * E + 2.0 * F * F + G * G)))
    throw DegeneracyError("curvature_sample: degenerate first fundamental form");

  const LVec3 c = cross(j.ps, j.pt);
  const LVec3 n{-c.x, -c.y, c.z};
  // <n,n> = -det I, so the normal is timelike exactly when I is definite.
  const double nn = minkowski_inner(n, n);
  const double sign = orientation >= 0 ? 1.0 : -1.0;
  SurfaceSample out;
  out.p = j.p;
  out.N = (sign / std::sqrt(std::abs(nn))) * n;
  out.eps = nn < 0.0 ? -1.0 : 1.0;

  const double e = minkowski_inner(j.pss, out.N);
  const double f = minkowski_inner(j.pst, out.N);
  const double g = minkowski_inner(j.ptt, out.N);

  // Shape operator A = I^{-1} II.
  const double a11 = (G * e - F * f) / det, a12 = (G * f - F * g) / det;
  const double a21 = (E * f - F * e) / det, a22 = (E * g - F * f) / det;
  const double tr = a11 + a22;
  out.H = 0.5 * tr;
  out.K = a11 * a22 - a12 * a21;

  const double scale = std::abs(E) + std::abs(G);
  const bool diagonal = std::abs(F) <= 1e-13 * scale && std::abs(f) <= 1e-13 * (std::abs(e) + std::abs(g) + 1.0);
  if (diagonal) {
    out.kappa1 = e / E;
    out.kappa2 = g / G;
  } else {
    const double disc = tr * tr - 4.0 * out.K;
    if (disc >= 0.0) {
      const double r = std::sqrt(disc);
      out.kappa1 = 0.5 * (tr + r);
      out.kappa2 = 0.5 * (tr - r);
    } else {
      out.kappa1 = out.kappa2 = out.H;
      out.real_principal = false;
    }
  }
  out.residual = out.H - minkowski_inner(out.N, v) - lambda;
  return out;
}

SurfaceSample curvature_sample(const SurfaceChart& chart, double s, double t, const LVec3& v, double lambda) {
  const ChartJet j = chart.jet ? chart.jet(s, t) : finite_difference_jet(chart.position, s, t);
  return curvature_from_jet(j, chart.orientation, v, lambda);
}

ResidualStats residual_statistics(std::span<const SurfaceSample> samples) {
  if (samples.empty()) throw DomainError("residual_statistics: empty sample list");
  ResidualStats st;
  double sum = 0.0;
  for (const auto& s : samples) {
    const double a = std::abs(s.residual);
    st.max_abs = std::max(st.max_abs, a);
    sum += a;
  }
  st.count = samples.size();
  st.mean_abs = sum / static_cast<double>(st.count);
  return st;
}

}  // namespace translators
