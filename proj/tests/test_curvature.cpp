#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "translators/curvature.hpp"
#include "translators/error.hpp"
#include "translators/mesh.hpp"

using namespace translators;
using translators::testing::rng;
using translators::testing::uniform;

namespace {

// Hyperbolic plane z = sqrt(1 + x^2 + y^2) in polar chart. By hand: the normal
// convention gives N = p, and II/I = -1 in both directions, so H = -1, K = 1.
ChartJet hyperbolic_jet(double s, double t) {
  const double c = std::cos(t), n = std::sin(t), ch = std::cosh(s), sh = std::sinh(s);
  return {{sh * c, sh * n, ch}, {ch * c, ch * n, sh}, {-sh * n, sh * c, 0},
          {sh * c, sh * n, ch}, {-ch * n, ch * c, 0}, {-sh * c, -sh * n, 0}};
}

// De Sitter surface x^2 + y^2 - z^2 = 1: timelike, N = p, H = -1, K = 1.
ChartJet de_sitter_jet(double s, double t) {
  const double c = std::cos(t), n = std::sin(t), ch = std::cosh(s), sh = std::sinh(s);
  return {{ch * c, ch * n, sh}, {sh * c, sh * n, ch}, {-ch * n, ch * c, 0},
          {ch * c, ch * n, sh}, {-sh * n, sh * c, 0}, {-ch * c, -ch * n, 0}};
}

}  // namespace

TEST(Curvature, HyperbolicPlaneIsUmbilic) {
  auto g = rng(10);
  for (int k = 0; k < 100; ++k) {
    const double s = uniform(g, 0.1, 2.0), t = uniform(g, -3, 3), lambda = uniform(g, -1, 2);
    const auto j = hyperbolic_jet(s, t);
    const auto smp = curvature_from_jet(j, 1, e3, lambda);
    EXPECT_EQ(smp.eps, -1.0);
    EXPECT_NEAR(smp.N.x, j.p.x, 1e-12);
    EXPECT_NEAR(smp.N.z, j.p.z, 1e-12);
    EXPECT_NEAR(smp.kappa1, -1.0, 1e-12);
    EXPECT_NEAR(smp.kappa2, -1.0, 1e-12);
    EXPECT_NEAR(smp.H, -1.0, 1e-12);
    EXPECT_NEAR(smp.K, 1.0, 1e-12);
    // <N, e3> = -z.
    EXPECT_NEAR(smp.residual, -1.0 + std::cosh(s) - lambda, 1e-11);
    const auto flipped = curvature_from_jet(j, -1, e3, lambda);
    EXPECT_NEAR(flipped.H, 1.0, 1e-12);
    EXPECT_NEAR(flipped.K, 1.0, 1e-12);
  }
}

TEST(Curvature, DeSitterIsTimelikeUmbilic) {
  const auto smp = curvature_from_jet(de_sitter_jet(0.3, 1.1), 1, e1, 0.0);
  EXPECT_EQ(smp.eps, 1.0);
  EXPECT_TRUE(smp.real_principal);
  EXPECT_NEAR(smp.H, -1.0, 1e-12);
  EXPECT_NEAR(smp.K, 1.0, 1e-12);
  EXPECT_NEAR(smp.residual, -1.0 - std::cosh(0.3) * std::cos(1.1), 1e-12);
}

TEST(Curvature, PlaneIsFlat) {
  const ChartJet j{{1, 2, 0}, e1, e2, {}, {}, {}};
  const auto smp = curvature_from_jet(j, 1, e3, 0.5);
  EXPECT_EQ(smp.H, 0.0);
  EXPECT_EQ(smp.K, 0.0);
  EXPECT_NEAR(std::abs(smp.N.z), 1.0, 0.0);
  // Horizontal plane: <N, e3> = -N.z = -+1, so the residual is +-1 - lambda.
  EXPECT_NEAR(smp.residual, smp.N.z - 0.5, 1e-15);
}

TEST(Curvature, LightlikePlaneIsDegenerate) {
  const ChartJet j{{}, {1, 0, 1}, e2, {}, {}, {}};
  EXPECT_THROW(curvature_from_jet(j, 1, e3, 1.0), DegeneracyError);
}

TEST(Curvature, FiniteDifferenceJetMatchesAnalytic) {
  SurfaceChart chart;
  chart.position = [](double s, double t) { return hyperbolic_jet(s, t).p; };
  auto g = rng(11);
  for (int k = 0; k < 50; ++k) {
    const double s = uniform(g, 0.2, 1.5), t = uniform(g, -3, 3);
    const auto fd = curvature_sample(chart, s, t, e3, 1.0);
    const auto an = curvature_from_jet(hyperbolic_jet(s, t), 1, e3, 1.0);
    EXPECT_NEAR(fd.H, an.H, 1e-6);
    EXPECT_NEAR(fd.K, an.K, 1e-6);
    EXPECT_NEAR(fd.residual, an.residual, 1e-6);
  }
  chart.jet = [](double s, double t) { return hyperbolic_jet(s, t); };
  EXPECT_EQ(curvature_sample(chart, 0.5, 0.5, e3, 1.0).H, curvature_from_jet(hyperbolic_jet(0.5, 0.5), 1, e3, 1.0).H);
}

TEST(Curvature, ResidualStatistics) {
  std::vector<SurfaceSample> v(3);
  v[0].residual = 1e-3;
  v[1].residual = -3e-3;
  v[2].residual = 2e-3;
  const auto st = residual_statistics(v);
  EXPECT_EQ(st.count, 3u);
  EXPECT_DOUBLE_EQ(st.max_abs, 3e-3);
  EXPECT_DOUBLE_EQ(st.mean_abs, 2e-3);
  EXPECT_THROW(residual_statistics(std::vector<SurfaceSample>{}), DomainError);
}

TEST(Mesh, GridQuadsAndIndex) {
  const auto q = grid_quads(3, 4);
  ASSERT_EQ(q.size(), 6u);
  EXPECT_EQ(q[0], (std::array<std::size_t, 4>{0, 4, 5, 1}) );
  SurfaceMesh m;
  m.ns = 3;
  m.nt = 4;
  EXPECT_EQ(m.index(2, 1), 9u);
}

// Property: moving a mesh by an isometry moves N and v together, leaving H and
// the residual unchanged.
TEST(MeshProperty, ResidualInvariantUnderIsometry) {
  SurfaceMesh m;
  m.ns = 6;
  m.nt = 5;
  m.velocity = {0.3, -0.2, 1.0};
  m.lambda = 0.7;
  for (std::size_t i = 0; i < m.ns; ++i)
    for (std::size_t j = 0; j < m.nt; ++j) {
      m.jets.push_back(hyperbolic_jet(0.3 + 0.2 * static_cast<double>(i), 0.4 * static_cast<double>(j)));
      m.vertices.push_back(m.jets.back().p);
    }
  m.quads = grid_quads(m.ns, m.nt);
  const auto before = all_samples(m);
  auto g = rng(12);
  for (int k = 0; k < 50; ++k) {
    const auto iso = Isometry::translation({uniform(g, -1, 1), uniform(g, -1, 1), uniform(g, -1, 1)}) *
                     Isometry::spacelike_rotation(uniform(g, -1, 1)) *
                     Isometry::timelike_rotation(uniform(g, -3, 3));
    const auto after = all_samples(transformed(m, iso));
    for (std::size_t i = 0; i < before.size(); ++i) {
      ASSERT_NEAR(after[i].H, before[i].H, 1e-10);
      ASSERT_NEAR(after[i].residual, before[i].residual, 1e-10);
    }
  }
}
