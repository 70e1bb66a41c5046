#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "internal.hpp"
#include "translators/error.hpp"

namespace translator {

using namespace translators;

namespace {

constexpr double kAgreementTol = 1e-12;

struct Table {
  std::string header;
  std::vector<std::vector<double>> rows;
  std::vector<double> col(std::size_t k) const {
    std::vector<double> out;
    for (const auto& r : rows) out.push_back(r[k]);
    return out;
  }
};

Table parse_csv(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  Table t;
  if (!std::getline(in, t.header)) throw DomainError(origin + ": empty file");
  const std::size_t width = static_cast<std::size_t>(std::count(t.header.begin(), t.header.end(), ',')) + 1;
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    std::vector<double> row;
    const char* b = line.data();
    const char* e = line.data() + line.size();
    while (true) {
      double v = 0.0;
      const auto res = std::from_chars(b, e, v);
      if (res.ec != std::errc{} || !std::isfinite(v))
        throw DomainError(origin + ":" + std::to_string(lineno) + ": not a finite number");
      row.push_back(v);
      if (res.ptr == e) break;
      if (*res.ptr != ',') throw DomainError(origin + ":" + std::to_string(lineno) + ": expected ','");
      b = res.ptr + 1;
    }
    if (row.size() != width) throw DomainError(origin + ":" + std::to_string(lineno) + ": wrong column count");
    t.rows.push_back(std::move(row));
  }
  if (t.rows.empty()) throw DomainError(origin + ": no data rows");
  return t;
}

}  // namespace

VerifyReport verify(const std::filesystem::path& input, double tol) {
  if (!(tol > 0.0)) throw DomainError("verify-tol: must be > 0");
  const std::string bytes = read_file(input);
  const Table t = parse_csv(bytes, input.string());
  const auto manifest_path = input.parent_path() / "manifest.json";
  Json man;
  try {
    man = Json::parse(read_file(manifest_path));
  } catch (const Json::parse_error& e) {
    throw DomainError(manifest_path.string() + ": " + e.what());
  }
  if (!man.contains("config") || !man["config"].is_object())
    throw DomainError(manifest_path.string() + ": no config object");
  std::map<std::string, std::string> kv;
  for (const auto& [k, v] : man["config"].items()) kv[k] = v.is_string() ? v.get<std::string>() : v.dump();
  const Params p(kv);

  DataResidual res;
  std::string kind;
  if (t.header == "s,x,y,z,theta") {
    kind = "base_curve";
    res = base_curve_residual(cyl_case(p), p.integer("sigma-resolved", -1), t.col(0), t.col(1), t.col(2), t.col(3),
                              t.col(4));
  } else if (t.header == "s,r,theta,height") {
    kind = "orbit";
    res = orbit_residual(rot_case(p), p.num("lambda"), t.col(0), t.col(1),
                         t.col(2), t.col(3));
  } else if (t.header == "r,u,u_prime") {
    kind = "profile";
    const RadialAxis axis =
        p.choice("axis", {"timelike", "spacelike"}) == "timelike" ? RadialAxis::TimelikeAxis : RadialAxis::SpacelikeAxis;
    res = profile_residual(axis, p.num("lambda"), t.col(0), t.col(1), t.col(2));
  } else {
    throw DomainError(input.string() + ": unrecognized header '" + t.header + "'");
  }

  const std::string name = input.filename().string();
  std::string expected;
  for (const auto& f : man.value("files", Json::array()))
    if (f.value("path", "") == name) expected = f.value("sha256", "");
  const std::string actual = sha256_hex(bytes);

  VerifyReport out;
  Json& r = out.report;
  r["input"] = input.string();
  r["kind"] = kind;
  r["rows"] = t.rows.size();
  r["residual"] = res.to_json();
  r["tolerance"] = tol;
  r["checksum"] = {{"expected", expected}, {"actual", actual}, {"match", !expected.empty() && expected == actual}};
  const Json recorded = man["residual"].value("data", Json());
  if (recorded.is_object() && recorded.contains("max_abs")) {
    const double diff = std::abs(recorded["max_abs"].get<double>() - res.stats.max_abs);
    r["manifest_agreement"] = {{"recorded_max_abs", recorded["max_abs"]}, {"difference", diff},
                               {"within", diff <= kAgreementTol}};
  } else {
    r["manifest_agreement"] = nullptr;
  }
  const bool residual_ok = res.max_rel <= tol && res.tangent_mismatch <= tol;
  out.pass = residual_ok && r["checksum"]["match"].get<bool>();
  r["pass"] = out.pass;
  return out;
}

}  // namespace translator
