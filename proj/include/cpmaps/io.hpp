/** @file
 * JSON serialization for the shared file formats.
 *
 * Matrix:      {"rows": r, "cols": c, "data": [[[re, im], ...] per row]}
 * Channel:     {"dim_in": n, "dim_out": m, "kraus": [matrix, ...]}
 * Correlation: matrix object plus {"kind": "correlation"}
 * Choi input:  matrix object plus {"kind": "choi", "dim_in": n, "dim_out": m}
 * Subspace:    {"ambient_dim", "dim", "star_closed", "contains_identity",
 *               "basis": [matrix, ...]}
 *
 * Complex scalars are always 2-element [re, im] arrays of doubles. Writers
 * use insertion-ordered JSON so identical inputs serialize byte-identically.
 */
#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cpmaps/algebra.hpp"
#include "cpmaps/channel.hpp"
#include "cpmaps/matrix.hpp"
#include "cpmaps/schur.hpp"

namespace cpmaps {

using Json = nlohmann::ordered_json;

inline Json matrix_to_json(const ComplexMatrix& a) {
  Json data = Json::array();
  for (Index i = 0; i < a.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < a.cols(); ++j)
      row.push_back(Json::array({a(i, j).real(), a(i, j).imag()}));
    data.push_back(std::move(row));
  }
  Json out;
  out["rows"] = a.rows();
  out["cols"] = a.cols();
  out["data"] = std::move(data);
  return out;
}

inline ComplexMatrix matrix_from_json(const Json& j) {
  if (!j.contains("rows") || !j.contains("cols") || !j.contains("data"))
    throw std::invalid_argument("matrix json: missing rows/cols/data");
  const auto rows = j.at("rows").get<Index>();
  const auto cols = j.at("cols").get<Index>();
  if (rows < 0 || cols < 0)
    throw std::invalid_argument("matrix json: negative dimension");
  const Json& data = j.at("data");
  if (!data.is_array() || static_cast<Index>(data.size()) != rows)
    throw std::invalid_argument("matrix json: data has wrong row count");
  ComplexMatrix a(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const Json& row = data.at(static_cast<std::size_t>(i));
    if (!row.is_array() || static_cast<Index>(row.size()) != cols)
      throw std::invalid_argument("matrix json: row " + std::to_string(i) +
                                  " has wrong length");
    for (Index jj = 0; jj < cols; ++jj) {
      const Json& cell = row.at(static_cast<std::size_t>(jj));
      if (!cell.is_array() || cell.size() != 2)
        throw std::invalid_argument("matrix json: entries must be [re, im]");
      a(i, jj) = Complex(cell.at(0).get<double>(), cell.at(1).get<double>());
    }
  }
  return a;
}

inline Json channel_to_json(const Channel& ch) {
  Json kraus = Json::array();
  for (const auto& k : ch.kraus) kraus.push_back(matrix_to_json(k));
  Json out;
  out["dim_in"] = ch.dim_in;
  out["dim_out"] = ch.dim_out;
  out["kraus"] = std::move(kraus);
  return out;
}

inline Channel channel_from_json(const Json& j) {
  if (!j.contains("dim_in") || !j.contains("dim_out") || !j.contains("kraus"))
    throw std::invalid_argument("channel json: missing dim_in/dim_out/kraus");
  const auto n = j.at("dim_in").get<Index>();
  const auto m = j.at("dim_out").get<Index>();
  std::vector<ComplexMatrix> ops;
  for (const Json& kj : j.at("kraus")) ops.push_back(matrix_from_json(kj));
  return Channel(n, m, std::move(ops));
}

inline Json correlation_to_json(const CorrelationMatrix& c) {
  Json out;
  out["kind"] = "correlation";
  Json mat = matrix_to_json(c.C);
  out["rows"] = mat["rows"];
  out["cols"] = mat["cols"];
  out["data"] = mat["data"];
  return out;
}

inline CorrelationMatrix correlation_from_json(const Json& j,
                                               const Tolerances& tol = {}) {
  return make_correlation(matrix_from_json(j), tol);
}

inline Json subspace_to_json(const OperatorSubspace& s) {
  Json basis = Json::array();
  for (const auto& b : s.basis) basis.push_back(matrix_to_json(b));
  Json out;
  out["ambient_dim"] = s.ambient_dim;
  out["dim"] = s.dim();
  out["star_closed"] = s.star_closed;
  out["contains_identity"] = s.contains_identity;
  out["basis"] = std::move(basis);
  return out;
}

inline Json tolerances_to_json(const Tolerances& tol) {
  Json out;
  out["tol_rank"] = tol.tol_rank;
  out["tol_psd"] = tol.tol_psd;
  out["tol_eq"] = tol.tol_eq;
  out["tol_herm"] = tol.tol_herm;
  return out;
}

/// FNV-1a 64-bit digest of a byte string, rendered as 16 hex characters.
inline std::string content_digest(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = hex[h & 0xf];
    h >>= 4;
  }
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write file: " + path);
  out << text;
}

inline std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace cpmaps
