#include "translators/lorentz.hpp"

#include <cmath>
#include <numbers>

#include "translators/error.hpp"

namespace translators {

double minkowski_inner(const LVec3& a, const LVec3& b) { return a.x * b.x + a.y * b.y - a.z * b.z; }

double euclidean_norm_sq(const LVec3& a) { return a.x * a.x + a.y * a.y + a.z * a.z; }

std::string_view to_string(CausalClass c) {
  switch (c) {
    case CausalClass::Spacelike: return "spacelike";
    case CausalClass::Timelike: return "timelike";
    case CausalClass::Lightlike: return "lightlike";
  }
  return "unknown";
}

CausalClass causal_character(const LVec3& w) {
  const double n2 = euclidean_norm_sq(w);
  if (n2 == 0.0) throw DomainError("causal_character: zero vector has no causal character");
  const double q = minkowski_inner(w, w);
  if (std::abs(q) <= tol_causal * n2) return CausalClass::Lightlike;
  return q > 0.0 ? CausalClass::Spacelike : CausalClass::Timelike;
}

namespace {

constexpr Mat3 kIdentity{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};

Mat3 mul(const Mat3& a, const Mat3& b) {
  Mat3 c{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) c[i][j] += a[i][k] * b[k][j];
  return c;
}

LVec3 mul(const Mat3& a, const LVec3& p) {
  return {a[0][0] * p.x + a[0][1] * p.y + a[0][2] * p.z,
          a[1][0] * p.x + a[1][1] * p.y + a[1][2] * p.z,
          a[2][0] * p.x + a[2][1] * p.y + a[2][2] * p.z};
}

// Reduce to (-pi, pi].
double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::remainder(a, two_pi);
  if (r <= -std::numbers::pi) r += two_pi;
  return r;
}

}  // namespace

Isometry Isometry::identity() { return {Kind::Composite, 0.0, kIdentity, {}}; }

Isometry Isometry::translation(const LVec3& a) { return {Kind::Translation, 0.0, kIdentity, a}; }

Isometry Isometry::timelike_rotation(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  return {Kind::TimelikeRotation, wrap_angle(theta), Mat3{{{c, -s, 0}, {s, c, 0}, {0, 0, 1}}}, {}};
}

Isometry Isometry::spacelike_rotation(double theta) {
  const double c = std::cosh(theta), s = std::sinh(theta);
  return {Kind::SpacelikeRotation, theta, Mat3{{{1, 0, 0}, {0, c, s}, {0, s, c}}}, {}};
}

LVec3 Isometry::apply(const LVec3& p) const { return mul(m_, p) + b_; }

LVec3 Isometry::apply_linear(const LVec3& w) const { return mul(m_, w); }

Isometry operator*(const Isometry& g, const Isometry& h) {
  using K = Isometry::Kind;
  if (g.kind_ == h.kind_) {
    switch (g.kind_) {
      case K::Translation: return Isometry::translation(g.b_ + h.b_);
      case K::TimelikeRotation: return Isometry::timelike_rotation(g.parameter_ + h.parameter_);
      case K::SpacelikeRotation: return Isometry::spacelike_rotation(g.parameter_ + h.parameter_);
      case K::Composite: break;
    }
  }
  return {K::Composite, 0.0, mul(g.m_, h.m_), mul(g.m_, h.b_) + g.b_};
}

LVec3 apply_isometry(const Isometry& g, const LVec3& p) { return g.apply(p); }

}  // namespace translators
