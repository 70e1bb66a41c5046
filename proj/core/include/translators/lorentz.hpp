#pragma once

#include <array>
#include <string_view>

namespace translators {

/// Point or vector of L^3. z is the negative-signature coordinate.
struct LVec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend constexpr LVec3 operator+(LVec3 a, LVec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend constexpr LVec3 operator-(LVec3 a, LVec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend constexpr LVec3 operator-(LVec3 a) { return {-a.x, -a.y, -a.z}; }
  friend constexpr LVec3 operator*(double k, LVec3 a) { return {k * a.x, k * a.y, k * a.z}; }
  friend constexpr LVec3 operator*(LVec3 a, double k) { return k * a; }
  friend constexpr bool operator==(LVec3, LVec3) = default;
};

inline constexpr LVec3 e1{1.0, 0.0, 0.0};
inline constexpr LVec3 e2{0.0, 1.0, 0.0};
inline constexpr LVec3 e3{0.0, 0.0, 1.0};

/// a.x b.x + a.y b.y - a.z b.z
double minkowski_inner(const LVec3& a, const LVec3& b);

double euclidean_norm_sq(const LVec3& a);

enum class CausalClass { Spacelike, Timelike, Lightlike };

std::string_view to_string(CausalClass c);

/// Lightlike band, relative to the Euclidean norm squared.
inline constexpr double tol_causal = 1e-12;

/// Throws DomainError for the zero vector.
CausalClass causal_character(const LVec3& w);

using Mat3 = std::array<std::array<double, 3>, 3>;

/// Affine isometry p -> M p + b of L^3.
///
/// The three generating kinds keep their parameter so that composing two
/// isometries of the same kind stays in that kind (angles add; timelike
/// rotation angles are reduced to (-pi, pi]). Mixed compositions are Composite.
class Isometry {
 public:
  enum class Kind { Translation, TimelikeRotation, SpacelikeRotation, Composite };

  static Isometry identity();
  static Isometry translation(const LVec3& a);
  /// Euclidean rotation about e3 (timelike axis).
  static Isometry timelike_rotation(double theta);
  /// Boost fixing e1 (spacelike axis): e2 -> (0, cosh, sinh), e3 -> (0, sinh, cosh).
  static Isometry spacelike_rotation(double theta);

  Kind kind() const { return kind_; }
  double parameter() const { return parameter_; }
  const Mat3& linear() const { return m_; }
  const LVec3& offset() const { return b_; }

  LVec3 apply(const LVec3& p) const;
  LVec3 apply_linear(const LVec3& w) const;

  /// (g * h)(p) = g(h(p)).
  friend Isometry operator*(const Isometry& g, const Isometry& h);

 private:
  Isometry(Kind k, double param, const Mat3& m, const LVec3& b)
      : kind_(k), parameter_(param), m_(m), b_(b) {}

  Kind kind_;
  double parameter_;
  Mat3 m_;
  LVec3 b_;
};

LVec3 apply_isometry(const Isometry& g, const LVec3& p);

}  // namespace translators
