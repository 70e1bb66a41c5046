#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <memory>

#include <openssl/evp.h>

#include "internal.hpp"
#include "translator/cli.hpp"
#include "translators/error.hpp"

namespace translator {

std::string format_double(double v) {
  if (!std::isfinite(v)) throw translators::NumericError("format_double: non-finite value");
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
  return {buf.data(), res.ptr};
}

std::string csv_text(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw translators::DomainError("csv: no rows to emit");
  std::string out;
  for (std::size_t k = 0; k < header.size(); ++k) out += (k ? "," : "") + header[k];
  out += '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size()) throw translators::DomainError("csv: row width differs from header");
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) out += ',';
      out += format_double(row[k]);
    }
    out += '\n';
  }
  return out;
}

std::string obj_text(const translators::SurfaceMesh& m) {
  if (m.vertices.empty() || m.quads.empty()) throw translators::DomainError("obj: empty mesh");
  std::string out;
  for (const auto& v : m.vertices)
    out += "v " + format_double(v.x) + ' ' + format_double(v.y) + ' ' + format_double(v.z) + '\n';
  for (const auto& q : m.quads) {
    out += 'f';
    for (auto i : q) out += ' ' + std::to_string(i + 1);
    out += '\n';
  }
  return out;
}

std::string sha256_hex(const std::string& bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), md.data(), &len) != 1)
    throw std::runtime_error("sha256: digest failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 0xf];
  }
  return out;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot read " + p.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + p.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + p.string());
}

}  // namespace translator
