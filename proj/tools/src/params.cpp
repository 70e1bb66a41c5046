#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "internal.hpp"
#include "translators/error.hpp"

namespace translator {

using translators::DomainError;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

}  // namespace

std::map<std::string, std::string> parse_config_text(const std::string& text, const std::string& origin) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw DomainError(origin + ":" + std::to_string(lineno) + ": expected `key = value`");
    std::string key = trim(line.substr(0, eq));
    std::replace(key.begin(), key.end(), '_', '-');
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw DomainError(origin + ":" + std::to_string(lineno) + ": empty key or value");
    if (kv.count(key)) throw DomainError(origin + ":" + std::to_string(lineno) + ": duplicate key " + key);
    kv[key] = value;
  }
  return kv;
}

const std::string& Params::str(const std::string& key) const {
  const auto it = kv_.find(key);
  if (it == kv_.end()) throw DomainError("missing parameter " + key);
  return it->second;
}

double Params::num(const std::string& key) const {
  const std::string& s = str(key);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || !std::isfinite(v))
    throw DomainError(key + ": expected a finite number, got '" + s + "'");
  return v;
}

double Params::positive(const std::string& key) const {
  const double v = num(key);
  if (!(v > 0.0)) throw DomainError(key + ": must be > 0");
  return v;
}

int Params::integer(const std::string& key, int lo) const {
  const std::string& s = str(key);
  int v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw DomainError(key + ": expected an integer, got '" + s + "'");
  if (v < lo) throw DomainError(key + ": must be >= " + std::to_string(lo));
  return v;
}

bool Params::flag(const std::string& key) const {
  const std::string& s = str(key);
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw DomainError(key + ": expected true or false, got '" + s + "'");
}

const std::string& Params::choice(const std::string& key, std::initializer_list<const char*> allowed) const {
  const std::string& s = str(key);
  for (const char* a : allowed)
    if (s == a) return s;
  std::string msg = key + ": expected one of";
  for (const char* a : allowed) msg += std::string(" ") + a;
  throw DomainError(msg + ", got '" + s + "'");
}

translators::RotCase rot_case(const Params& p) {
  const auto c = translators::parse_rot_case(p.str("case"));
  if (!c) throw DomainError("case: expected TA_S, TA_T, SA_S or SA_T, got '" + p.str("case") + "'");
  return *c;
}

translators::StopPolicy stop_policy(const Params& p) {
  translators::StopPolicy sp;
  sp.eps_axis = p.positive("eps-axis");
  sp.r_cap = p.positive("r-cap");
  sp.theta_cap = p.positive("theta-cap");
  sp.s_budget = p.positive("s-budget");
  sp.rel_tol = p.positive("rel-tol");
  sp.abs_tol = p.positive("abs-tol");
  sp.max_step = p.positive("max-step");
  return sp;
}

translators::CylCase cyl_case(const Params& p) {
  using translators::CylCase;
  const std::string& kind = p.choice("case", {"circle", "timelike-ruling", "spacelike", "timelike"});
  const double lambda = p.num("lambda"), v2 = p.num("v2"), v3 = p.num("v3");
  CylCase c;
  if (kind == "circle") {
    if (v2 != 0.0 || v3 != 1.0) throw DomainError("case circle: velocity is e3, so v2 = 0 and v3 = 1");
    c = CylCase::circle(lambda);
  } else if (kind == "timelike-ruling") {
    c = CylCase::timelike_ruling(lambda, v2, v3);
  } else if (kind == "spacelike") {
    c = CylCase::spacelike_surface(lambda, v3, v2);
  } else {
    c = CylCase::timelike_surface(lambda, v3, v2);
  }
  c.validate();
  return c;
}

}  // namespace translator
