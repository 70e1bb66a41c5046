#include <algorithm>
#include <cstdlib>

#include <CLI11.hpp>

#include "internal.hpp"
#include "translators/error.hpp"

namespace translator {

namespace {

constexpr double kDefaultVerifyTol = 1e-4;
const char* const kSubcommands[] = {"cyl", "rot", "radial", "portrait", "mesh"};
const char* const kFlags[] = {"mesh", "portrait"};

bool is_flag(const std::string& key) {
  return std::find(std::begin(kFlags), std::end(kFlags), key) != std::end(kFlags);
}

std::map<std::string, std::string> accepted_keys(const std::string& sub) {
  auto keys = default_params(sub);
  if (sub == "mesh") {
    // Extrusion keys are checked against the chosen surface by run().
    for (const char* k : {"method", "theta0", "sigma", "s-begin", "s-end", "samples", "v2", "v3"}) keys[k] = "";
  }
  return keys;
}

struct Parsed {
  std::string sub;
  std::map<std::string, std::string> cli;
  std::string config_path;
  std::string out_dir;
  std::string input;
  double verify_tol = kDefaultVerifyTol;
};

}  // namespace

int main_entry(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Invariant translating surfaces in Minkowski 3-space"};
  app.require_subcommand(1, 1);
  Parsed ps;
  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, std::map<std::string, bool>> flags;
  for (const char* name : kSubcommands) {
    auto* sc = app.add_subcommand(name);
    sc->add_option("--config", ps.config_path, "key = value file; command-line values override it");
    sc->add_option("--out", ps.out_dir, "output directory (default: $TRANSLATOR_OUT or translator-out)");
    for (const auto& [key, dflt] : accepted_keys(name)) {
      if (is_flag(key)) {
        sc->add_flag("--" + key, flags[name][key]);
      } else {
        sc->add_option("--" + key, values[name][key])->description(dflt.empty() ? "" : "default " + dflt);
      }
    }
  }
  auto* vsc = app.add_subcommand("verify", "recompute residuals of an emitted CSV");
  vsc->add_option("--input", ps.input)->required();
  vsc->add_option("--verify-tol", ps.verify_tol, "bound on relative residual and tangent mismatch");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    const auto* chosen = app.get_subcommands().front();
    ps.sub = chosen->get_name();
    if (ps.sub == "verify") {
      const VerifyReport rep = verify(ps.input, ps.verify_tol);
      out << rep.report.dump(2) << "\n";
      return rep.pass ? kExitOk : kExitNumeric;
    }
    RunConfig cfg;
    cfg.subcommand = ps.sub;
    if (!ps.config_path.empty()) cfg.params = parse_config_text(read_file(ps.config_path), ps.config_path);
    for (const auto& [key, v] : values[ps.sub])
      if (chosen->get_option("--" + key)->count() > 0) cfg.params[key] = v;
    for (const auto& [key, on] : flags[ps.sub])
      if (chosen->get_option("--" + key)->count() > 0) cfg.params[key] = on ? "true" : "false";
    if (!ps.out_dir.empty()) {
      cfg.out_dir = ps.out_dir;
    } else if (const char* env = std::getenv("TRANSLATOR_OUT"); env && *env) {
      cfg.out_dir = env;
    } else {
      cfg.out_dir = "translator-out";
    }
    out << run(cfg).to_json().dump(2) << "\n";
    return kExitOk;
  } catch (const translators::DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const Json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const translators::NumericError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  }
}

}  // namespace translator
