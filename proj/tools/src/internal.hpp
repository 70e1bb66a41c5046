#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "translator/cli.hpp"
#include "translators/cylindrical.hpp"
#include "translators/mesh.hpp"
#include "translators/radial.hpp"
#include "translators/rotational.hpp"

namespace translator {

/// File system failure; the message carries the path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string obj_text(const translators::SurfaceMesh& m);
std::string read_file(const std::filesystem::path& p);
void write_file(const std::filesystem::path& p, const std::string& bytes);

/// `key = value` lines, `#` comments, `_` normalized to `-` in keys.
std::map<std::string, std::string> parse_config_text(const std::string& text, const std::string& origin);

/// Typed, validated access to resolved parameters. Every getter names the key
/// in its DomainError.
class Params {
 public:
  explicit Params(const std::map<std::string, std::string>& kv) : kv_(kv) {}
  const std::string& str(const std::string& key) const;
  double num(const std::string& key) const;
  double positive(const std::string& key) const;
  int integer(const std::string& key, int lo) const;
  bool flag(const std::string& key) const;
  const std::string& choice(const std::string& key, std::initializer_list<const char*> allowed) const;

 private:
  const std::map<std::string, std::string>& kv_;
};

translators::RotCase rot_case(const Params& p);
translators::StopPolicy stop_policy(const Params& p);
translators::CylCase cyl_case(const Params& p);

/// |res| / max(1, |kappa1|, |kappa2|, sqrt|K|, |<N,v>|): the residual relative
/// to the terms that cancel in it.
double relative_residual(const translators::SurfaceSample& smp, double lambda);

/// Residual of a chart rebuilt from sampled data. theta' (or u'') comes from
/// five-point Lagrange differentiation on the sample grid, so the numbers
/// depend on the file contents only.
struct DataResidual {
  translators::ResidualStats stats;
  double max_rel = 0.0;            ///< max relative_residual
  double tangent_mismatch = 0.0;   ///< max relative gap between d(position) and the tangent implied by theta
  Json to_json() const;
};

/// Derivative of the interpolating quartic through x[i-2..i+2] at x[i].
double lagrange5_derivative(std::span<const double> x, std::span<const double> y, std::size_t i);

DataResidual base_curve_residual(const translators::CylCase& c, int sigma, std::span<const double> s,
                                 std::span<const double> x, std::span<const double> y, std::span<const double> z,
                                 std::span<const double> theta);
/// Orbit stencils need r > kOrbitRMin (the regularized axis leg is sampled
/// in r, too coarse for differences in s) and |theta| <= kOrbitThetaMax.
inline constexpr double kOrbitRMin = 1e-2;
inline constexpr double kOrbitThetaMax = 8.0;

DataResidual orbit_residual(translators::RotCase c, double lambda,
                            std::span<const double> s, std::span<const double> r, std::span<const double> theta,
                            std::span<const double> height);
DataResidual profile_residual(translators::RadialAxis axis, double lambda, std::span<const double> r,
                              std::span<const double> u, std::span<const double> w);

/// Phase portrait of a case: Gamma, asymptote guides, orbits by seed index, labels.
struct PortraitOptions {
  double r_max = 3.0;
  double theta_min = -5.0;
  double theta_max = 5.0;
  int seeds = 9;
  std::vector<translators::OrbitState> extra_seeds;  ///< drawn first
};
std::string portrait_svg(translators::RotCase c, double lambda, const translators::StopPolicy& policy,
                         const PortraitOptions& opt);

}  // namespace translator
