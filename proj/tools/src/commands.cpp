#include <cmath>
#include <numbers>
#include <utility>

#include "internal.hpp"
#include "translators/curvature.hpp"
#include "translators/error.hpp"

#ifndef TRANSLATOR_VERSION
#define TRANSLATOR_VERSION "0.0.0"
#endif

namespace translator {

using namespace translators;

namespace {

using Table = std::map<std::string, std::string>;

const Table kPolicy = {{"eps-axis", "1e-6"},  {"r-cap", "100"},    {"theta-cap", "30"}, {"s-budget", "100"},
                       {"rel-tol", "1e-10"}, {"abs-tol", "1e-12"}, {"max-step", "0.01"}};

Table merged(Table base, const Table& extra) {
  for (const auto& [k, v] : extra) base[k] = v;
  return base;
}

const Table kCyl = {{"case", "spacelike"}, {"lambda", "2"},        {"v2", "0"},         {"v3", "1"},
                    {"method", "closed-form"}, {"theta0", "0"},    {"sigma", "1"},      {"s-begin", "-0.3"},
                    {"s-end", "0.3"},       {"samples", "1001"},    {"rel-tol", "1e-12"}, {"abs-tol", "1e-14"},
                    {"theta-cap", "30"},    {"max-step", "0.01"},   {"mesh", "false"},   {"nt", "33"},
                    {"t-lo", "-1"},         {"t-hi", "1"}};
const Table kRot = merged(kPolicy, {{"case", "TA_S"}, {"lambda", "0.5"}, {"seed-x", "1"}, {"seed-theta", "0"},
                                    {"portrait", "false"}, {"seeds", "9"}});
const Table kRadial = {{"lambda", "2"},     {"axis", "timelike"}, {"n-grid", "513"},
                       {"R", "0"},          {"tol-fp", "1e-12"},  {"max-iter", "200"}};
const Table kPortrait = merged(kPolicy, {{"case", "TA_S"}, {"lambda", "0.5"}, {"seeds", "9"}, {"max-step", "0.05"}});
const Table kMeshRevolution =
    merged(kPolicy, {{"surface", "revolution"}, {"case", "TA_S"}, {"lambda", "0.5"}, {"seed-x", "1"},
                     {"seed-theta", "0"}, {"nt", "65"}, {"t-lo", "auto"}, {"t-hi", "auto"}, {"theta-max", "8"}});
Table mesh_extrusion_table() {
  Table t = kCyl;
  t.erase("mesh");
  t["surface"] = "extrusion";
  return t;
}
const Table kMeshExtrusion = mesh_extrusion_table();

// Files any subcommand may write; stale ones are removed so that the
// directory always matches its manifest.
const char* const kArtifacts[] = {"base_curve.csv", "mesh.obj",    "orbit.csv",      "classification.json",
                                  "portrait.svg",   "profile.csv", "diagnostics.json", "manifest.json"};

struct Output {
  std::vector<std::pair<std::string, std::string>> files;
  Json residual = Json::object();
};

Json stats_json(const std::vector<SurfaceSample>& samples, double lambda) {
  const ResidualStats st = residual_statistics(samples);
  double max_rel = 0.0;
  for (const auto& s : samples) max_rel = std::max(max_rel, relative_residual(s, lambda));
  Json j;
  j["count"] = st.count;
  j["max_abs"] = st.max_abs;
  j["mean_abs"] = st.mean_abs;
  j["max_rel"] = max_rel;
  return j;
}

std::vector<double> column(const std::vector<std::vector<double>>& rows, std::size_t k) {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[k]);
  return out;
}

// Base curve of the cyl parameters, sigma fixed across samples.
BaseCurve base_curve(const Params& p, const CylCase& c) {
  const std::string& method = p.choice("method", {"closed-form", "ode"});
  const int samples = p.integer("samples", 5);
  if (c.kind == CylKind::RulingTimelikeVParallel) {
    if (method != "closed-form") throw DomainError("method: the circle case is closed-form only");
    return circle_solution(c.lambda, samples);
  }
  const double s0 = p.num("s-begin"), s1 = p.num("s-end");
  if (!(s1 > s0)) throw DomainError("s-end: must exceed s-begin");
  if (method == "ode") {
    const int sigma = p.integer("sigma", -1);
    if (sigma != 1 && sigma != -1) throw DomainError("sigma: must be 1 or -1");
    IntegrationOptions opt;
    opt.rel_tol = p.positive("rel-tol");
    opt.abs_tol = p.positive("abs-tol");
    opt.theta_cap = p.positive("theta-cap");
    opt.max_step = p.positive("max-step");
    return integrate_base_curve(c, p.num("theta0"), s0, s1, opt, sigma);
  }
  if (c.kind == CylKind::RulingTimelikeGeneral) throw DomainError("method: timelike-ruling has no closed form; use ode");
  const ClosedFormFamily fam(c);
  const Interval comp = fam.component(0.5 * (s0 + s1));
  if (!(s0 > comp.lo && s1 < comp.hi))
    throw DomainError("s-begin/s-end: span leaves the maximal domain (" + format_double(comp.lo) + ", " +
                      format_double(comp.hi) + ")");
  BaseCurve bc;
  bc.cas = c;
  bc.causality = c.surface_causality();
  for (int i = 0; i < samples; ++i) {
    const double s = s0 + (s1 - s0) * i / (samples - 1);
    const ClosedFormPoint q = fam.evaluate(s);
    if (i == 0) bc.sigma = q.sigma;
    if (q.sigma != bc.sigma) throw DomainError("s-begin/s-end: tangent branch changes inside the span");
    bc.samples.push_back({s, {q.x, 0.0, q.z}, q.theta});
  }
  return bc;
}

Output run_cyl(const Params& p, Json& echo) {
  const CylCase c = cyl_case(p);
  const BaseCurve bc = base_curve(p, c);
  echo["sigma-resolved"] = bc.sigma;
  std::vector<std::vector<double>> rows;
  for (const auto& s : bc.samples) rows.push_back({s.s, s.p.x, s.p.y, s.p.z, s.theta});
  Output out;
  out.files.emplace_back("base_curve.csv", csv_text({"s", "x", "y", "z", "theta"}, rows));
  const auto data = base_curve_residual(c, bc.sigma, column(rows, 0), column(rows, 1), column(rows, 2),
                                        column(rows, 3), column(rows, 4));
  out.residual["data"] = data.to_json();
  if (bc.truncated) out.residual["truncated"] = bc.stop_reason;
  const SurfaceMesh m = extrude(bc, c.ruling(), p.num("t-lo"), p.num("t-hi"),
                                static_cast<std::size_t>(p.integer("nt", 3)));
  out.residual["chart"] = stats_json(interior_samples(m), m.lambda);
  if (p.flag("mesh")) out.files.emplace_back("mesh.obj", obj_text(m));
  return out;
}

Orbit seeded_orbit(const Params& p, RotCase c, double lambda) {
  return trace_orbit(c, {p.num("seed-x"), p.num("seed-theta"), 0.0, 0.0}, lambda, stop_policy(p));
}

Json end_json(const EndpointDiagnosis& e) {
  Json j;
  j["kind"] = std::string(to_string(e.kind));
  j["s"] = e.s;
  j["r"] = e.r;
  j["theta"] = e.theta;
  j["height"] = e.height;
  j["axis_constant"] = e.axis_constant;
  j["slope_at_axis"] = e.slope_at_axis ? Json(*e.slope_at_axis) : Json();
  j["asymptote"] = e.asymptote;
  j["fitted_limit"] = e.fitted_limit;
  j["detail"] = e.detail;
  return j;
}

Json classification_json(const Orbit& o) {
  const ClassificationReport rep = classify_orbit(o);
  auto extrema = [](const std::vector<Extremum>& ex) {
    Json a = Json::array();
    for (const auto& e : ex) a.push_back({{"s", e.s}, {"value", e.value}, {"is_max", e.is_max}});
    return a;
  };
  Json j;
  j["case"] = std::string(to_string(rep.cas));
  j["lambda"] = rep.lambda;
  j["forward_end"] = end_json(o.forward_end);
  j["backward_end"] = end_json(o.backward_end);
  Json sig = Json::array();
  for (const auto& s : rep.signature)
    sig.push_back({{"s_begin", s.s_begin}, {"s_end", s.s_end}, {"r_sign", s.r_sign}, {"theta_sign", s.theta_sign},
                   {"height_sign", s.height_sign}});
  j["signature"] = sig;
  j["gamma_crossings"] = rep.gamma_crossings;
  j["theta_zero_crossings"] = rep.theta_zero_crossings;
  j["gauss_sign_changes"] = rep.gauss_sign_changes;
  j["gauss_signs"] = rep.gauss_signs;
  j["r_extrema"] = extrema(rep.r_extrema);
  j["height_extrema"] = extrema(rep.height_extrema);
  j["forward_cusp_slope"] = rep.forward_cusp_slope ? Json(*rep.forward_cusp_slope) : Json();
  j["backward_cusp_slope"] = rep.backward_cusp_slope ? Json(*rep.backward_cusp_slope) : Json();
  j["height_monotone"] = rep.height_monotone;
  j["strictly_convex"] = rep.strictly_convex;
  j["entire_graph"] = rep.entire_graph;
  return j;
}

Output run_rot(const Params& p) {
  const RotCase c = rot_case(p);
  const double lambda = p.num("lambda");
  const Orbit o = seeded_orbit(p, c, lambda);
  std::vector<std::vector<double>> rows;
  for (const auto& st : o.samples) rows.push_back({st.s, st.r, st.theta, st.height});
  Output out;
  out.files.emplace_back("orbit.csv", csv_text({"s", "r", "theta", "height"}, rows));
  out.files.emplace_back("classification.json", classification_json(o).dump(2) + "\n");
  const auto data = orbit_residual(c, lambda, column(rows, 0),
                                   column(rows, 1), column(rows, 2), column(rows, 3));
  out.residual["data"] = data.to_json();
  if (p.flag("portrait")) {
    PortraitOptions opt;
    opt.seeds = p.integer("seeds", 0);
    opt.extra_seeds = {{p.num("seed-x"), p.num("seed-theta"), 0.0, 0.0}};
    out.files.emplace_back("portrait.svg", portrait_svg(c, lambda, stop_policy(p), opt));
  }
  return out;
}

RadialAxis radial_axis(const Params& p) {
  return p.choice("axis", {"timelike", "spacelike"}) == "timelike" ? RadialAxis::TimelikeAxis
                                                                    : RadialAxis::SpacelikeAxis;
}

Output run_radial(const Params& p) {
  const RadialAxis axis = radial_axis(p);
  const double lambda = p.num("lambda");
  RadialConfig cfg;
  cfg.R = p.num("R");
  if (cfg.R < 0.0) throw DomainError("R: must be >= 0 (0 selects the contraction radius)");
  cfg.n_grid = p.integer("n-grid", 9);
  cfg.tol_fp = p.positive("tol-fp");
  cfg.max_iter = p.integer("max-iter", 1);
  const RadialSolution sol = solve_radial(lambda, axis, cfg);
  const RadialProfile& pr = sol.profile;
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < pr.r.size(); ++i) rows.push_back({pr.r[i], pr.u[i], pr.w[i]});

  const auto& d = sol.diagnostics;
  Json diag;
  diag["lambda"] = lambda;
  diag["axis"] = p.str("axis");
  diag["iterations"] = d.iterations;
  diag["d"] = d.d;
  diag["q"] = d.q;
  diag["R_used"] = d.R_used;
  diag["halvings"] = d.halvings;
  diag["converged"] = d.converged;
  diag["u2_origin"] = second_deriv_at_origin(pr);
  diag["residual"] = radial_residual(pr);

  Output out;
  out.files.emplace_back("profile.csv", csv_text({"r", "u", "u_prime"}, rows));
  out.files.emplace_back("diagnostics.json", diag.dump(2) + "\n");
  const auto data = profile_residual(axis, lambda, column(rows, 0), column(rows, 1), column(rows, 2));
  out.residual["data"] = data.to_json();
  out.residual["profile"] = diag["residual"];
  return out;
}

Output run_portrait(const Params& p) {
  PortraitOptions opt;
  opt.seeds = p.integer("seeds", 0);
  Output out;
  out.files.emplace_back("portrait.svg", portrait_svg(rot_case(p), p.num("lambda"), stop_policy(p), opt));
  return out;
}

Output run_mesh(const Params& p) {
  SurfaceMesh m;
  if (p.str("surface") == "revolution") {
    const RotCase c = rot_case(p);
    const double lambda = p.num("lambda");
    const Orbit o = seeded_orbit(p, c, lambda);
    const bool ta = c == RotCase::TA_S || c == RotCase::TA_T;
    auto bound = [&](const char* key, double dflt) { return p.str(key) == "auto" ? dflt : p.num(key); };
    m = build_surface(o, bound("t-lo", ta ? 0.0 : -2.0), bound("t-hi", ta ? 2.0 * std::numbers::pi : 2.0),
                      static_cast<std::size_t>(p.integer("nt", 3)), p.positive("eps-axis"), p.positive("theta-max"));
  } else {
    const CylCase c = cyl_case(p);
    m = extrude(base_curve(p, c), c.ruling(), p.num("t-lo"), p.num("t-hi"),
                static_cast<std::size_t>(p.integer("nt", 3)));
  }
  Output out;
  out.files.emplace_back("mesh.obj", obj_text(m));
  out.residual["mesh"] = stats_json(interior_samples(m), m.lambda);
  return out;
}

}  // namespace

const std::map<std::string, std::string>& default_params(const std::string& subcommand) {
  if (subcommand == "cyl") return kCyl;
  if (subcommand == "rot") return kRot;
  if (subcommand == "radial") return kRadial;
  if (subcommand == "portrait") return kPortrait;
  if (subcommand == "mesh") return kMeshRevolution;
  throw DomainError("unknown subcommand '" + subcommand + "'");
}

Json RunManifest::to_json() const {
  Json j;
  j["tool"] = "translator";
  j["version"] = TRANSLATOR_VERSION;
  j["subcommand"] = subcommand;
  j["config"] = config;
  Json fs = Json::array();
  for (const auto& f : files) fs.push_back({{"path", f.path}, {"bytes", f.bytes}, {"sha256", f.sha256}});
  j["files"] = fs;
  j["residual"] = residual;
  return j;
}

RunManifest run(const RunConfig& cfg) {
  Table table = default_params(cfg.subcommand);
  if (cfg.subcommand == "mesh") {
    const auto it = cfg.params.find("surface");
    const std::string surface = it == cfg.params.end() ? "revolution" : it->second;
    if (surface == "extrusion") {
      table = kMeshExtrusion;
    } else if (surface != "revolution") {
      throw DomainError("surface: expected revolution or extrusion, got '" + surface + "'");
    }
  }
  for (const auto& [k, v] : cfg.params) {
    if (!table.count(k)) throw DomainError("unknown key '" + k + "' for subcommand " + cfg.subcommand);
    table[k] = v;
  }
  const Params p(table);
  RunManifest man;
  man.subcommand = cfg.subcommand;
  man.config = Json(table);
  Output out;
  if (cfg.subcommand == "cyl") {
    out = run_cyl(p, man.config);
  } else if (cfg.subcommand == "rot") {
    out = run_rot(p);
  } else if (cfg.subcommand == "radial") {
    out = run_radial(p);
  } else if (cfg.subcommand == "portrait") {
    out = run_portrait(p);
  } else {
    out = run_mesh(p);
  }
  man.residual = out.residual;

  // Everything is computed before the first write, so a failure leaves no files.
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec) throw IoError("cannot create " + cfg.out_dir.string() + ": " + ec.message());
  for (const char* name : kArtifacts) {
    fs::remove(cfg.out_dir / name, ec);
    if (ec) throw IoError("cannot remove stale " + (cfg.out_dir / name).string() + ": " + ec.message());
  }
  for (const auto& [name, bytes] : out.files) {
    write_file(cfg.out_dir / name, bytes);
    man.files.push_back({name, bytes.size(), sha256_hex(bytes)});
  }
  write_file(cfg.out_dir / "manifest.json", man.to_json().dump(2) + "\n");
  return man;
}

}  // namespace translator
