#pragma once

// Text format for matrix definitions:
//
//   SRMAT 1 n=<n> npolys=<n+1> dim=<d>
//   DELTA <rationals>          (or DIR <rationals>)
//   COLS
//   <d exponent vectors, one per line>
//   ROWS
//   <d lines: poly_index multiplier>

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "sparseres/error.hpp"
#include "sparseres/resultant_matrix.hpp"

namespace sparseres {

inline void store_matrix(const MatrixDefinition& def, std::ostream& os) {
  auto vec = [&](const ExponentVector& e) {
    for (std::size_t i = 0; i < e.size(); ++i) os << (i ? " " : "") << e[i];
  };
  os << "SRMAT 1 n=" << def.n << " npolys=" << def.npolys << " dim=" << def.dim() << "\n";
  os << (def.kind == MatrixKind::subdivision ? "DELTA" : "DIR");
  for (const auto& q : def.param) os << " " << q.str();
  os << "\nCOLS\n";
  for (const auto& c : def.cols) {
    vec(c);
    os << "\n";
  }
  os << "ROWS\n";
  for (const auto& r : def.rows) {
    os << r.poly;
    if (r.mult.size()) os << " ";
    vec(r.mult);
    os << "\n";
  }
}

inline void store_matrix(const MatrixDefinition& def, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw InputError("cannot write " + path);
  store_matrix(def, os);
  if (!os) throw InputError("error writing " + path);
}

namespace detail {

inline std::size_t header_field(const std::string& token, const std::string& key) {
  if (token.rfind(key + "=", 0) != 0) throw InputError("matrix file: expected " + key + "=");
  try {
    std::size_t used = 0;
    const std::string v = token.substr(key.size() + 1);
    long long x = std::stoll(v, &used);
    if (used != v.size() || x < 0) throw InputError("");
    return static_cast<std::size_t>(x);
  } catch (const std::exception&) {
    throw InputError("matrix file: bad value in " + token);
  }
}

inline std::vector<std::int64_t> read_ints(const std::string& line, std::size_t count) {
  std::istringstream is(line);
  std::vector<std::int64_t> out;
  std::int64_t x;
  while (is >> x) out.push_back(x);
  if (!is.eof() || out.size() != count) throw InputError("matrix file: malformed line '" + line + "'");
  return out;
}

}  // namespace detail

inline MatrixDefinition parse_matrix_definition(std::istream& is) {
  std::string line;
  auto next = [&]() -> std::string& {
    if (!std::getline(is, line)) throw InputError("matrix file: unexpected end of file");
    return line;
  };
  MatrixDefinition def;
  std::size_t dim = 0;
  {
    std::istringstream hs(next());
    std::string magic, version, tn, tp, td;
    hs >> magic >> version >> tn >> tp >> td;
    if (magic != "SRMAT" || version != "1") throw InputError("matrix file: not an SRMAT 1 file");
    def.n = detail::header_field(tn, "n");
    def.npolys = detail::header_field(tp, "npolys");
    dim = detail::header_field(td, "dim");
  }
  {
    std::istringstream ps(next());
    std::string tag, tok;
    ps >> tag;
    if (tag == "DELTA") def.kind = MatrixKind::subdivision;
    else if (tag == "DIR") def.kind = MatrixKind::incremental;
    else throw InputError("matrix file: expected DELTA or DIR");
    while (ps >> tok) def.param.push_back(parse_rational(tok));
    if (def.param.size() != def.n) throw InputError("matrix file: parameter vector has wrong length");
  }
  if (next() != "COLS") throw InputError("matrix file: expected COLS");
  for (std::size_t c = 0; c < dim; ++c) def.cols.emplace_back(detail::read_ints(next(), def.n));
  if (next() != "ROWS") throw InputError("matrix file: expected ROWS");
  for (std::size_t r = 0; r < dim; ++r) {
    auto v = detail::read_ints(next(), def.n + 1);
    if (v[0] < 0 || static_cast<std::size_t>(v[0]) >= def.npolys) throw InputError("matrix file: polynomial index out of range");
    def.rows.push_back({static_cast<std::size_t>(v[0]), ExponentVector(std::vector<std::int64_t>(v.begin() + 1, v.end()))});
  }
  return def;
}

inline MatrixDefinition parse_matrix_definition(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw InputError("cannot read " + path);
  return parse_matrix_definition(is);
}

/// Rebuilds the matrix for `polys` from a stored definition; the supports
/// must fit the stored labels.
inline ResultantMatrix load_matrix(const std::string& path, const std::vector<SparsePolynomial>& polys) {
  return make_matrix(parse_matrix_definition(path), polys);
}

inline ResultantMatrix load_matrix(std::istream& is, const std::vector<SparsePolynomial>& polys) {
  return make_matrix(parse_matrix_definition(is), polys);
}

}  // namespace sparseres
