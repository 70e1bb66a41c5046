#include "translators/mesh.hpp"

namespace translators {

std::vector<std::array<std::size_t, 4>> grid_quads(std::size_t ns, std::size_t nt) {
  std::vector<std::array<std::size_t, 4>> q;
  if (ns < 2 || nt < 2) return q;
  q.reserve((ns - 1) * (nt - 1));
  for (std::size_t i = 0; i + 1 < ns; ++i)
    for (std::size_t j = 0; j + 1 < nt; ++j)
      q.push_back({i * nt + j, (i + 1) * nt + j, (i + 1) * nt + j + 1, i * nt + j + 1});
  return q;
}

std::vector<SurfaceSample> interior_samples(const SurfaceMesh& mesh) {
  std::vector<SurfaceSample> out;
  for (std::size_t i = 1; i + 1 < mesh.ns; ++i)
    for (std::size_t j = 1; j + 1 < mesh.nt; ++j)
      out.push_back(curvature_from_jet(mesh.jets[mesh.index(i, j)], mesh.orientation, mesh.velocity, mesh.lambda));
  return out;
}

std::vector<SurfaceSample> all_samples(const SurfaceMesh& mesh) {
  std::vector<SurfaceSample> out;
  out.reserve(mesh.jets.size());
  for (const auto& j : mesh.jets) out.push_back(curvature_from_jet(j, mesh.orientation, mesh.velocity, mesh.lambda));
  return out;
}

SurfaceMesh transformed(const SurfaceMesh& mesh, const Isometry& g) {
  SurfaceMesh out = mesh;
  for (auto& v : out.vertices) v = g.apply(v);
  for (auto& j : out.jets) {
    j.p = g.apply(j.p);
    j.ps = g.apply_linear(j.ps);
    j.pt = g.apply_linear(j.pt);
    j.pss = g.apply_linear(j.pss);
    j.pst = g.apply_linear(j.pst);
    j.ptt = g.apply_linear(j.ptt);
  }
  out.velocity = g.apply_linear(mesh.velocity);
  return out;
}

}  // namespace translators
