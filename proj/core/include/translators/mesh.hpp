#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "translators/curvature.hpp"
#include "translators/lorentz.hpp"

namespace translators {

/// Structured ns x nt quad mesh of a chart, carrying the analytic jet at every
/// vertex together with the translator data needed to re-evaluate residuals.
struct SurfaceMesh {
  std::size_t ns = 0;
  std::size_t nt = 0;
  std::vector<LVec3> vertices;  ///< row-major, index i * nt + j
  std::vector<ChartJet> jets;
  std::vector<std::array<std::size_t, 4>> quads;  ///< zero-based vertex indices
  int orientation = 1;
  LVec3 velocity;
  double lambda = 0.0;

  std::size_t index(std::size_t i, std::size_t j) const { return i * nt + j; }
};

/// Quads for a structured ns x nt grid.
std::vector<std::array<std::size_t, 4>> grid_quads(std::size_t ns, std::size_t nt);

/// Oracle samples at vertices with 0 < i < ns-1 and 0 < j < nt-1.
std::vector<SurfaceSample> interior_samples(const SurfaceMesh& mesh);

/// Oracle samples at every vertex.
std::vector<SurfaceSample> all_samples(const SurfaceMesh& mesh);

/// The same mesh moved by an isometry; jets transform by the linear part and
/// the velocity with it.
SurfaceMesh transformed(const SurfaceMesh& mesh, const Isometry& g);

}  // namespace translators
