#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace translator {

using Json = nlohmann::ordered_json;

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumeric = 3;

/// Resolved parameters of one run. Keys use dashes; values are the strings
/// given on the command line or in the config file, else the defaults.
struct RunConfig {
  std::string subcommand;
  std::filesystem::path out_dir;
  std::map<std::string, std::string> params;
};

struct FileRecord {
  std::string path;  ///< relative to the output directory
  std::uintmax_t bytes = 0;
  std::string sha256;
};

struct RunManifest {
  std::string subcommand;
  Json config;
  std::vector<FileRecord> files;
  Json residual;
  Json to_json() const;
};

/// Names and defaults of the keys a subcommand accepts (verify excluded).
const std::map<std::string, std::string>& default_params(const std::string& subcommand);

/// Fills defaults, rejects unknown keys and runs the subcommand, writing its
/// files and manifest.json into cfg.out_dir. Throws translators::DomainError
/// on invalid parameters and translators::NumericError on numeric failure.
RunManifest run(const RunConfig& cfg);

struct VerifyReport {
  Json report;
  bool pass = false;
};

/// Re-reads an emitted CSV, rebuilds the chart from the sibling manifest and
/// recomputes the residuals from the data alone.
VerifyReport verify(const std::filesystem::path& input, double tol);

/// Entry point shared by the executable and the tests; returns the exit code.
int main_entry(std::span<const std::string> args, std::ostream& out, std::ostream& err);

/// 17 significant digits, shortest exponent form, deterministic.
std::string format_double(double v);

/// Header plus rows, LF endings. DomainError when rows is empty.
std::string csv_text(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows);

std::string sha256_hex(const std::string& bytes);

}  // namespace translator
