#pragma once

// Polynomial system files:
//
//   SYS 1
//   N <n>
//   POLY <m>                        followed by m TERM lines
//   TERM <num>[/<den>] <e1> ... <en>
//   DIR <rationals>                 optional direction for the incremental builder
//   UCOEF <rationals>               optional coefficients of the u-polynomial
//   HIDE <k>                        optional hidden variable, 1-based
//   SEED <s>                        optional seed
//
// '#' starts a comment. Coefficients must be exact; floats are rejected.

#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sparseres/arith.hpp"
#include "sparseres/error.hpp"
#include "sparseres/polynomial.hpp"

namespace sparseres {

struct SystemFile {
  std::size_t n = 0;
  std::vector<SparsePolynomial> polys;
  std::vector<Rational> direction;
  std::vector<Rational> ucoef;
  std::optional<std::size_t> hide;  // 1-based as written
  std::optional<std::uint64_t> seed;
};

namespace detail {

inline std::int64_t parse_int(const std::string& tok, const std::string& what) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(tok, &used);
    if (used != tok.size()) throw InputError("");
    return v;
  } catch (const std::exception&) {
    throw InputError("bad " + what + " '" + tok + "'");
  }
}

}  // namespace detail

inline SystemFile parse_system(std::istream& is) {
  SystemFile sys;
  std::string raw;
  std::size_t lineno = 0;
  bool header = false, have_n = false;
  std::size_t pending = 0;  // TERM lines still owed to the current POLY
  TermList terms;
  auto fail = [&](const std::string& msg) { throw InputError("line " + std::to_string(lineno) + ": " + msg); };
  auto finish_poly = [&] {
    try {
      sys.polys.push_back(support_of(terms));
    } catch (const InputError& e) {
      fail(e.what());
    }
    terms.clear();
  };
  while (std::getline(is, raw)) {
    ++lineno;
    if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
    std::istringstream ls(raw);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    const std::string& key = tok[0];
    if (!header) {
      if (tok.size() != 2 || key != "SYS" || tok[1] != "1") fail("expected 'SYS 1'");
      header = true;
      continue;
    }
    if (pending > 0 && key != "TERM") fail("expected " + std::to_string(pending) + " more TERM lines");
    try {
      if (key == "N") {
        if (have_n || tok.size() != 2) fail("bad N line");
        auto v = detail::parse_int(tok[1], "variable count");
        if (v < 1) fail("N must be positive");
        sys.n = static_cast<std::size_t>(v);
        have_n = true;
      } else if (key == "POLY") {
        if (!have_n) fail("POLY before N");
        if (tok.size() != 2) fail("bad POLY line");
        auto m = detail::parse_int(tok[1], "term count");
        if (m < 1) fail("POLY needs at least one term");
        pending = static_cast<std::size_t>(m);
      } else if (key == "TERM") {
        if (pending == 0) fail("TERM outside a POLY block");
        if (tok.size() != sys.n + 2) fail("TERM needs a coefficient and " + std::to_string(sys.n) + " exponents");
        ExponentVector e(sys.n);
        for (std::size_t i = 0; i < sys.n; ++i) e[i] = detail::parse_int(tok[i + 2], "exponent");
        terms.emplace_back(e, CoeffPoly(parse_rational(tok[1])));
        if (--pending == 0) finish_poly();
      } else if (key == "DIR" || key == "UCOEF") {
        if (!have_n) fail(key + " before N");
        auto& dst = key == "DIR" ? sys.direction : sys.ucoef;
        if (!dst.empty()) fail("duplicate " + key);
        for (std::size_t i = 1; i < tok.size(); ++i) dst.push_back(parse_rational(tok[i]));
        if (dst.size() != sys.n) fail(key + " needs " + std::to_string(sys.n) + " values");
      } else if (key == "HIDE") {
        if (!have_n || tok.size() != 2) fail("bad HIDE line");
        auto k = detail::parse_int(tok[1], "hidden index");
        if (k < 1 || static_cast<std::size_t>(k) > sys.n) fail("HIDE index out of range");
        sys.hide = static_cast<std::size_t>(k);
      } else if (key == "SEED") {
        if (tok.size() != 2) fail("bad SEED line");
        auto s = detail::parse_int(tok[1], "seed");
        if (s < 0) fail("SEED must be nonnegative");
        sys.seed = static_cast<std::uint64_t>(s);
      } else {
        fail("unknown keyword '" + key + "'");
      }
    } catch (const InputError& e) {
      if (std::string(e.what()).rfind("line ", 0) == 0) throw;
      fail(e.what());
    }
  }
  if (!header) throw InputError("empty system file");
  if (!have_n) throw InputError("missing N");
  if (pending > 0) throw InputError("unexpected end of file inside a POLY block");
  if (sys.polys.empty()) throw InputError("no polynomials");
  return sys;
}

inline SystemFile parse_system(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw InputError("cannot read " + path);
  return parse_system(is);
}

inline void write_system(const SystemFile& sys, std::ostream& os) {
  os << "SYS 1\nN " << sys.n << "\n";
  for (const auto& p : sys.polys) {
    os << "POLY " << p.size() << "\n";
    for (std::size_t j = 0; j < p.size(); ++j) {
      os << "TERM " << p.coeffs()[j].constant().str();
      for (auto e : p.support()[j]) os << " " << e;
      os << "\n";
    }
  }
  auto list = [&](const char* key, const std::vector<Rational>& v) {
    if (v.empty()) return;
    os << key;
    for (const auto& q : v) os << " " << q.str();
    os << "\n";
  };
  list("DIR", sys.direction);
  list("UCOEF", sys.ucoef);
  if (sys.hide) os << "HIDE " << *sys.hide << "\n";
  if (sys.seed) os << "SEED " << *sys.seed << "\n";
}

}  // namespace sparseres
