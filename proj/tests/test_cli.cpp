#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "translator/cli.hpp"
#include "translators/error.hpp"

namespace fs = std::filesystem;
using translator::Json;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("translator_test_" + name);
  fs::remove_all(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct Result {
  int code;
  std::string out, err;
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = translator::main_entry(args, out, err);
  return {code, out.str(), err.str()};
}

const std::vector<std::vector<std::string>> kRuns = {
    {"cyl", "--mesh", "--nt", "9"},
    {"cyl", "--case", "timelike", "--lambda", "2", "--s-begin", "0.1", "--s-end", "0.5"},
    {"cyl", "--method", "ode", "--case", "timelike-ruling", "--lambda", "0.5", "--v2", "1", "--v3", "0", "--s-end", "2"},
    {"rot", "--lambda", "2", "--seed-x", "0.5", "--portrait", "--seeds", "3"},
    {"rot", "--case", "SA_S"},
    {"radial", "--lambda", "0.5"},
    {"radial", "--axis", "spacelike", "--lambda", "1"},
    {"mesh", "--nt", "9"},
};

}  // namespace

TEST(Emit, FormatDoubleRoundTrips) {
  for (double v : {0.1, -1.0 / 3.0, 1e-300, 6.02214076e23, std::nextafter(1.0, 2.0)})
    EXPECT_EQ(std::stod(translator::format_double(v)), v);
  EXPECT_EQ(translator::format_double(-0.0), "0");
  EXPECT_EQ(translator::format_double(0.5), "0.5");
  EXPECT_THROW(translator::format_double(NAN), translators::NumericError);
}

TEST(Emit, CsvLayout) {
  EXPECT_EQ(translator::csv_text({"a", "b"}, {{1, 0.25}, {-2, 3}}), "a,b\n1,0.25\n-2,3\n");
  EXPECT_THROW(translator::csv_text({"a"}, {}), translators::DomainError);
  EXPECT_THROW(translator::csv_text({"a"}, {{1, 2}}), translators::DomainError);
}

TEST(Emit, Sha256KnownDigest) {
  EXPECT_EQ(translator::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Cli, ReRunsAreByteIdentical) {
  for (std::size_t k = 0; k < kRuns.size(); ++k) {
    std::map<std::string, std::string> first;
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path dir = fresh_dir("det" + std::to_string(k) + "_" + std::to_string(rep));
      auto args = kRuns[k];
      args.insert(args.end(), {"--out", dir.string()});
      const auto r = cli(args);
      ASSERT_EQ(r.code, 0) << r.err;
      for (const auto& e : fs::directory_iterator(dir)) {
        const std::string name = e.path().filename().string();
        if (rep == 0) {
          first[name] = slurp(e.path());
        } else {
          EXPECT_EQ(slurp(e.path()), first.at(name)) << kRuns[k][0] << " " << name;
        }
      }
    }
  }
}

// Every file in the directory is listed with its checksum, and only those.
TEST(Cli, ManifestIsComplete) {
  for (std::size_t k = 0; k < kRuns.size(); ++k) {
    const fs::path dir = fresh_dir("man" + std::to_string(k));
    auto args = kRuns[k];
    args.insert(args.end(), {"--out", dir.string()});
    ASSERT_EQ(cli(args).code, 0);
    const Json man = Json::parse(slurp(dir / "manifest.json"));
    std::set<std::string> listed;
    for (const auto& f : man["files"]) {
      listed.insert(f["path"].get<std::string>());
      const std::string bytes = slurp(dir / f["path"].get<std::string>());
      EXPECT_EQ(f["bytes"].get<std::size_t>(), bytes.size());
      EXPECT_EQ(f["sha256"].get<std::string>(), translator::sha256_hex(bytes));
    }
    for (const auto& e : fs::directory_iterator(dir)) {
      const std::string name = e.path().filename().string();
      if (name != "manifest.json") EXPECT_TRUE(listed.count(name)) << name;
    }
  }
}

TEST(Cli, StaleArtifactsAreRemoved) {
  const fs::path dir = fresh_dir("stale");
  ASSERT_EQ(cli({"cyl", "--mesh", "--nt", "5", "--out", dir.string()}).code, 0);
  ASSERT_TRUE(fs::exists(dir / "mesh.obj"));
  ASSERT_EQ(cli({"cyl", "--out", dir.string()}).code, 0);
  EXPECT_FALSE(fs::exists(dir / "mesh.obj"));
}

TEST(Cli, VerifyReproducesInMemoryResidual) {
  const std::pair<std::size_t, const char*> cases[] = {
      {0, "base_curve.csv"}, {1, "base_curve.csv"}, {2, "base_curve.csv"}, {3, "orbit.csv"},
      {4, "orbit.csv"},      {5, "profile.csv"},    {6, "profile.csv"}};
  for (const auto& [k, file] : cases) {
    const fs::path dir = fresh_dir("rt" + std::to_string(k));
    auto args = kRuns[k];
    args.insert(args.end(), {"--out", dir.string()});
    ASSERT_EQ(cli(args).code, 0);
    const Json man = Json::parse(slurp(dir / "manifest.json"));
    const auto rep = translator::verify(dir / file, 1e-4);
    EXPECT_TRUE(rep.pass) << rep.report.dump();
    EXPECT_NEAR(rep.report["residual"]["max_abs"].get<double>(), man["residual"]["data"]["max_abs"].get<double>(),
                1e-12);
    EXPECT_TRUE(rep.report["checksum"]["match"].get<bool>());
  }
}

TEST(Cli, TamperedCsvFailsVerify) {
  const fs::path dir = fresh_dir("tamper");
  ASSERT_EQ(cli({"radial", "--lambda", "2", "--out", dir.string()}).code, 0);
  std::string text = slurp(dir / "profile.csv");
  // Nudge u' on one interior row by 1e-3.
  std::size_t pos = 0;
  for (int line = 0; line < 300; ++line) pos = text.find('\n', pos) + 1;
  const std::size_t end = text.find('\n', pos);
  std::string row = text.substr(pos, end - pos);
  const std::size_t comma = row.rfind(',');
  row = row.substr(0, comma + 1) + translator::format_double(std::stod(row.substr(comma + 1)) + 1e-3);
  text.replace(pos, end - pos, row);
  std::ofstream(dir / "profile.csv", std::ios::binary) << text;

  const auto r = cli({"verify", "--input", (dir / "profile.csv").string()});
  EXPECT_EQ(r.code, translator::kExitNumeric);
  const Json rep = Json::parse(r.out);
  EXPECT_FALSE(rep["checksum"]["match"].get<bool>());
  EXPECT_GT(rep["residual"]["max_rel"].get<double>(), 1e-4);
}

TEST(Cli, ValidationErrorsExitTwo) {
  const fs::path dir = fresh_dir("bad");
  EXPECT_EQ(cli({"cyl", "--bogus", "1", "--out", dir.string()}).code, translator::kExitValidation);
  EXPECT_EQ(cli({"cyl", "--case", "lightlike", "--out", dir.string()}).code, translator::kExitValidation);
  EXPECT_EQ(cli({"cyl", "--s-begin", "-0.5", "--out", dir.string()}).code, translator::kExitValidation);
  EXPECT_EQ(cli({"rot", "--lambda", "-1", "--out", dir.string()}).code, translator::kExitValidation);
  EXPECT_EQ(cli({"mesh", "--surface", "revolution", "--v2", "1", "--out", dir.string()}).code,
            translator::kExitValidation);
  EXPECT_EQ(cli({"verify", "--input", (dir / "missing.csv").string()}).code, translator::kExitValidation);
  EXPECT_EQ(cli({}).code, translator::kExitValidation);
  // Failed runs write nothing.
  EXPECT_FALSE(fs::exists(dir));
}

TEST(Cli, UnknownConfigKeyRejected) {
  const fs::path dir = fresh_dir("cfgbad");
  fs::create_directories(dir);
  std::ofstream(dir / "run.cfg") << "lambda = 0.6\nspeed = 3\n";
  const auto r = cli({"cyl", "--config", (dir / "run.cfg").string(), "--out", (dir / "o").string()});
  EXPECT_EQ(r.code, translator::kExitValidation);
  EXPECT_NE(r.err.find("speed"), std::string::npos);
}

TEST(Cli, CommandLineOverridesConfig) {
  const fs::path dir = fresh_dir("cfg");
  fs::create_directories(dir);
  std::ofstream(dir / "run.cfg") << "# closed-form lambda < v3\nlambda = 0.6\ns_begin = -0.5\ns-end = 0.5\n";
  const auto r = cli({"cyl", "--config", (dir / "run.cfg").string(), "--s-end", "0.4", "--out", (dir / "o").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json man = Json::parse(slurp(dir / "o" / "manifest.json"));
  EXPECT_EQ(man["config"]["lambda"], "0.6");
  EXPECT_EQ(man["config"]["s-begin"], "-0.5");
  EXPECT_EQ(man["config"]["s-end"], "0.4");
}

TEST(Cli, EnvironmentSelectsOutputDirectory) {
  const fs::path dir = fresh_dir("env");
  ::setenv("TRANSLATOR_OUT", dir.string().c_str(), 1);
  const auto r = cli({"radial", "--lambda", "0.5"});
  ::unsetenv("TRANSLATOR_OUT");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir / "profile.csv"));
  EXPECT_TRUE(fs::exists(dir / "diagnostics.json"));
}

TEST(Cli, NumericFailureExitsThree) {
  const fs::path dir = fresh_dir("numeric");
  const auto r = cli({"radial", "--lambda", "3", "--max-iter", "2", "--out", dir.string()});
  EXPECT_EQ(r.code, translator::kExitNumeric) << r.err;
  EXPECT_FALSE(fs::exists(dir));
}

TEST(Cli, RadialDiagnostics) {
  const fs::path dir = fresh_dir("radial");
  ASSERT_EQ(cli({"radial", "--lambda", "2", "--out", dir.string()}).code, 0);
  const Json d = Json::parse(slurp(dir / "diagnostics.json"));
  EXPECT_TRUE(d["converged"].get<bool>());
  EXPECT_LT(d["q"].get<double>(), 1.0);
  // Leading-order balance at the axis gives u''(0) = 1 - lambda.
  EXPECT_NEAR(d["u2_origin"].get<double>(), -1.0, 1e-4);
}

TEST(Cli, TrivialLineOrbitHasConstantTheta) {
  const fs::path dir = fresh_dir("trivial");
  ASSERT_EQ(cli({"rot", "--lambda", "1", "--s-budget", "5", "--out", dir.string()}).code, 0);
  std::istringstream in(slurp(dir / "orbit.csv"));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "s,r,theta,height");
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string s, r, theta;
    std::getline(ss, s, ',');
    std::getline(ss, r, ',');
    std::getline(ss, theta, ',');
    ASSERT_EQ(theta, "0");
  }
  const Json c = Json::parse(slurp(dir / "classification.json"));
  EXPECT_EQ(c["forward_end"]["kind"], "TrivialLine");
}

TEST(Cli, PortraitBelowOneHasTwoRegionsAndGammaThroughOrigin) {
  const fs::path dir = fresh_dir("portrait05");
  ASSERT_EQ(cli({"rot", "--case", "TA_S", "--lambda", "0.5", "--seed-x", "1", "--portrait", "--out", dir.string()}).code,
            0);
  const std::string svg = slurp(dir / "portrait.svg");
  EXPECT_NE(svg.find("data-regions=\"2\""), std::string::npos);
  // Pixel (48, 240) is (r, theta) = (0, 0) in the default window.
  EXPECT_NE(svg.find("class=\"gamma\" data-branch=\"0\" points=\"48.00,240.00 "), std::string::npos);
  // Layer order is fixed.
  const auto g = svg.find("id=\"gamma\""), a = svg.find("id=\"asymptotes\""), o = svg.find("id=\"orbits\""),
             l = svg.find("id=\"labels\"");
  EXPECT_LT(g, a);
  EXPECT_LT(a, o);
  EXPECT_LT(o, l);
}

TEST(Cli, PortraitAboveOneDrawsBothAsymptotes) {
  const fs::path dir = fresh_dir("portrait2");
  ASSERT_EQ(cli({"portrait", "--lambda", "2", "--seeds", "3", "--out", dir.string()}).code, 0);
  const std::string svg = slurp(dir / "portrait.svg");
  std::vector<double> thetas;
  const std::regex re("class=\"asymptote\" data-theta=\"([^\"]+)\"");
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), re); it != std::sregex_iterator(); ++it)
    thetas.push_back(std::stod((*it)[1]));
  ASSERT_EQ(thetas.size(), 2u);
  EXPECT_NEAR(thetas[0], -std::acosh(2.0), 1e-15);
  EXPECT_NEAR(thetas[1], std::acosh(2.0), 1e-15);
  EXPECT_NE(svg.find("data-regions=\"3\""), std::string::npos);
}

TEST(Cli, ObjLayout) {
  const fs::path dir = fresh_dir("obj");
  ASSERT_EQ(cli({"mesh", "--surface", "extrusion", "--samples", "5", "--nt", "3", "--out", dir.string()}).code, 0);
  std::istringstream in(slurp(dir / "mesh.obj"));
  std::string line;
  int v = 0, f = 0;
  while (std::getline(in, line)) {
    if (line.rfind("v ", 0) == 0) {
      EXPECT_EQ(f, 0) << "vertices precede faces";
      ++v;
    } else if (line.rfind("f ", 0) == 0) {
      ++f;
    }
  }
  EXPECT_EQ(v, 15);
  EXPECT_EQ(f, 8);
}
