#pragma once

// Sylvester-type sparse resultant matrices. Rows are monomial multiples
// x^b f_i of the input polynomials, columns are monomials; the entry in row
// (i, b) and column q is the coefficient of x^(q - b) in f_i.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "sparseres/arith.hpp"
#include "sparseres/error.hpp"
#include "sparseres/modular.hpp"
#include "sparseres/polynomial.hpp"
#include "sparseres/polytope.hpp"
#include "sparseres/subdivision.hpp"

namespace sparseres {

struct RowLabel {
  std::size_t poly = 0;
  ExponentVector mult;

  friend bool operator==(const RowLabel&, const RowLabel&) = default;
  friend auto operator<=>(const RowLabel&, const RowLabel&) = default;
};

enum class MatrixKind { subdivision, incremental };

/// Everything needed to rebuild the matrix for any system with the same
/// supports: the labels, not the entries.
struct MatrixDefinition {
  std::size_t n = 0;
  std::size_t npolys = 0;
  MatrixKind kind = MatrixKind::subdivision;
  std::vector<Rational> param;  // delta (subdivision) or direction v (incremental)
  std::vector<ExponentVector> cols;
  std::vector<RowLabel> rows;

  std::size_t dim() const { return cols.size(); }

  std::vector<std::size_t> rows_per_poly() const {
    std::vector<std::size_t> out(npolys, 0);
    for (const auto& r : rows) ++out[r.poly];
    return out;
  }

  friend bool operator==(const MatrixDefinition&, const MatrixDefinition&) = default;
};

using PolyMatrix = std::vector<std::vector<CoeffPoly>>;

struct ResultantMatrix {
  MatrixDefinition def;
  PolyMatrix entries;

  std::size_t dim() const { return def.dim(); }
  int x0_degree() const {
    int d = 0;
    for (const auto& row : entries)
      for (const auto& e : row) d = std::max(d, e.degree());
    return d;
  }
};

/// Entries of a definition for a given system. Throws InputError if the
/// system does not fit the definition.
inline PolyMatrix matrix_entries(const MatrixDefinition& def, const std::vector<SparsePolynomial>& polys) {
  if (polys.size() != def.npolys) throw InputError("matrix definition expects " + std::to_string(def.npolys) + " polynomials");
  for (const auto& f : polys)
    if (f.dim() != def.n) throw InputError("matrix definition expects " + std::to_string(def.n) + " variables");
  if (def.rows.size() != def.cols.size()) throw InputError("matrix definition is not square");
  std::map<ExponentVector, std::size_t> col_index;
  for (std::size_t c = 0; c < def.cols.size(); ++c) col_index[def.cols[c]] = c;
  PolyMatrix m(def.rows.size(), std::vector<CoeffPoly>(def.cols.size()));
  for (std::size_t r = 0; r < def.rows.size(); ++r) {
    const RowLabel& row = def.rows[r];
    if (row.poly >= polys.size()) throw InputError("row refers to a missing polynomial");
    const auto& f = polys[row.poly];
    for (std::size_t j = 0; j < f.size(); ++j) {
      auto it = col_index.find(row.mult + f.support()[j]);
      if (it == col_index.end())
        throw InputError("row monomial " + (row.mult + f.support()[j]).str() + " is not a column of the matrix");
      m[r][it->second] = f.coeffs()[j];
    }
  }
  return m;
}

inline ResultantMatrix make_matrix(MatrixDefinition def, const std::vector<SparsePolynomial>& polys) {
  PolyMatrix e = matrix_entries(def, polys);
  return {std::move(def), std::move(e)};
}

/// Exact matrix at x0 = value.
inline std::vector<std::vector<Rational>> specialize(const PolyMatrix& m, const Rational& x0) {
  std::vector<std::vector<Rational>> out(m.size());
  for (std::size_t r = 0; r < m.size(); ++r) {
    out[r].reserve(m[r].size());
    for (const auto& e : m[r]) out[r].push_back(e.eval(x0));
  }
  return out;
}

/// Relative error of M [alpha^q]_q = [alpha^b f_i(alpha)]_rows, each row
/// scaled by sum_q |M_rq| |alpha^q|.
inline double evaluation_residual(const ResultantMatrix& m, const std::vector<SparsePolynomial>& polys,
                                  std::span<const Complex> alpha, Complex x0 = 0) {
  std::vector<Complex> mono(m.def.cols.size());
  for (std::size_t c = 0; c < mono.size(); ++c) mono[c] = SparsePolynomial::monomial(m.def.cols[c], alpha);
  double worst = 0;
  for (std::size_t r = 0; r < m.entries.size(); ++r) {
    Complex lhs = 0;
    double scale = 0;
    for (std::size_t c = 0; c < mono.size(); ++c) {
      if (m.entries[r][c].is_zero()) continue;
      const Complex t = m.entries[r][c].eval(x0) * mono[c];
      lhs += t;
      scale += std::abs(t);
    }
    const auto& row = m.def.rows[r];
    const Complex rhs = SparsePolynomial::monomial(row.mult, alpha) * polys[row.poly].eval(alpha, x0);
    if (scale > 0) worst = std::max(worst, std::abs(lhs - rhs) / scale);
  }
  return worst;
}

struct MatrixOptions {
  std::uint64_t seed = 1;
  /// Polynomial whose rows seed the greedy closure.
  std::size_t distinguished = 0;
  /// Direction for the incremental algorithm; random when empty.
  std::vector<Rational> direction;
};

namespace detail {

/// Coordinates s_i / P_i with distinct primes P_i in [1000, 10000].
inline std::vector<Rational> draw_delta(std::size_t n, std::uint64_t seed) {
  std::vector<std::int64_t> primes;
  for (std::int64_t m = 1000; m <= 10000; ++m)
    if (is_prime(static_cast<std::uint64_t>(m))) primes.push_back(m);
  std::mt19937_64 rng(seed);
  std::shuffle(primes.begin(), primes.end(), rng);
  std::vector<Rational> delta;
  for (std::size_t i = 0; i < n; ++i) {
    std::uniform_int_distribution<std::int64_t> s(1, primes[i] - 1);
    delta.emplace_back(s(rng), primes[i]);
  }
  return delta;
}

inline std::vector<ExponentVector> minkowski_points(const std::vector<Support>& supports,
                                                    std::optional<std::size_t> skip = std::nullopt) {
  std::vector<ExponentVector> acc;
  for (std::size_t i = 0; i < supports.size(); ++i) {
    if (skip && *skip == i) continue;
    if (acc.empty()) {
      acc = supports[i].points();
      continue;
    }
    std::vector<ExponentVector> next;
    next.reserve(acc.size() * supports[i].size());
    for (const auto& a : acc)
      for (const auto& b : supports[i]) next.push_back(a + b);
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    // interior points of the partial sum never become vertices; dropping
    // them keeps the point set small
    acc = newton_polytope(next).vertices;
  }
  return acc;
}

/// Random nonzero coefficients mod p, one per support point.
inline std::vector<std::vector<std::uint64_t>> random_coeffs(const std::vector<Support>& supports, const PrimeField& f,
                                                             std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> d(1, f.p() - 1);
  std::vector<std::vector<std::uint64_t>> out;
  for (const auto& s : supports) {
    std::vector<std::uint64_t> c(s.size());
    for (auto& x : c) x = d(rng);
    out.push_back(std::move(c));
  }
  return out;
}

inline ModMatrix modular_matrix(const std::vector<RowLabel>& rows, const std::vector<ExponentVector>& cols,
                                const std::vector<Support>& supports,
                                const std::vector<std::vector<std::uint64_t>>& coeffs) {
  std::map<ExponentVector, std::size_t> col_index;
  for (std::size_t c = 0; c < cols.size(); ++c) col_index[cols[c]] = c;
  ModMatrix m(rows.size(), std::vector<std::uint64_t>(cols.size(), 0));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& s = supports[rows[r].poly];
    for (std::size_t j = 0; j < s.size(); ++j) m[r][col_index.at(rows[r].mult + s[j])] = coeffs[rows[r].poly][j];
  }
  return m;
}

/// Nonsingular for random coefficients modulo two large primes.
inline bool generically_nonsingular(const MatrixDefinition& def, const std::vector<Support>& supports,
                                    std::uint64_t seed) {
  for (std::size_t k = 0; k < 2; ++k) {
    PrimeField f(large_prime(k));
    auto m = modular_matrix(def.rows, def.cols, supports, random_coeffs(supports, f, derive_seed(seed, 100 + k)));
    if (modular_rank(std::move(m), f) != def.dim()) return false;
  }
  return true;
}

}  // namespace detail

/// An integer point of Q + delta and the subdivision cell containing it.
struct Candidate {
  ExponentVector point;
  std::size_t cell = 0;
};

/// Integer points of Q + delta, Q the Minkowski sum of the subdivided
/// supports, each located in its cell. Throws NonGenericError if some point
/// minus delta is on a cell boundary, or if delta is too large: the cell of
/// p - delta must contain p itself.
inline std::vector<Candidate> candidate_points(const MixedSubdivision& sub, const std::vector<Rational>& delta) {
  Hull q(detail::minkowski_points(sub.supports));
  if (!q.full_dimensional()) throw ConstructionError("Minkowski sum of the supports is not full-dimensional");
  std::vector<Candidate> out;
  for (auto& p : q.lattice_points(delta)) {
    std::vector<Rational> x(sub.n);
    for (std::size_t i = 0; i < sub.n; ++i) x[i] = Rational(p[i]) - delta[i];
    auto loc = sub.locate(x);
    if (loc.where != Location::interior) throw NonGenericError("perturbation puts " + p.str() + " on a cell boundary");
    std::vector<Rational> at(p.begin(), p.end());
    if (sub.classify(loc.cell, at) == Location::outside) throw NonGenericError("perturbation too large at " + p.str());
    out.push_back({std::move(p), loc.cell});
  }
  return out;
}

/// Draws delta from the seed and shrinks it until candidate_points accepts
/// it; the coordinates keep their prime denominators.
inline std::optional<std::pair<std::vector<Rational>, std::vector<Candidate>>> perturbation(const MixedSubdivision& sub,
                                                                                           std::uint64_t seed) {
  const auto base = detail::draw_delta(sub.n, seed);
  for (int shrink = 0; shrink < 8; ++shrink) {
    auto delta = base;
    for (auto& d : delta) d /= BigInt(1) << (3 * shrink);
    try {
      auto cands = candidate_points(sub, delta);
      return std::pair{std::move(delta), std::move(cands)};
    } catch (const NonGenericError&) {
    }
  }
  return std::nullopt;
}

/// (i, p - a) where {a} is the vertex summand of p's cell with largest i.
inline RowLabel row_content(const Candidate& c, const MixedSubdivision& sub) {
  const auto v = sub.cells[c.cell].vertex_summands();
  if (v.empty()) throw NonGenericError("cell without a vertex summand");
  const std::size_t i = v.back();
  return {i, c.point - sub.cells[c.cell].faces[i][0]};
}

/// Subdivision-based matrix: greedy closure starting from the rows of the
/// distinguished polynomial. Falls back to all of (Q + delta) if the closed
/// set is not generically nonsingular.
inline ResultantMatrix build_subdivision_matrix(const std::vector<SparsePolynomial>& polys,
                                                const MatrixOptions& opt = {}) {
  if (polys.empty()) throw InputError("no polynomials");
  const std::size_t n = polys.front().dim();
  if (polys.size() != n + 1) throw InputError("resultant matrix needs n+1 polynomials in n variables");
  if (opt.distinguished > n) throw InputError("distinguished polynomial index out of range");
  const auto supports = supports_of(polys);

  std::optional<MixedSubdivision> sub;
  std::vector<Rational> delta;
  std::vector<Candidate> cands;
  for (int attempt = 0; attempt < kMaxRedraws && !sub; ++attempt) {
    try {
      auto s = mixed_subdivision(supports, derive_seed(opt.seed, attempt));
      if (auto found = perturbation(s, derive_seed(opt.seed, 1000 + attempt))) {
        std::tie(delta, cands) = std::move(*found);
        sub = std::move(s);
      }
    } catch (const NonGenericError&) {
    }
  }
  if (!sub) throw ConstructionError("no generic lifting and perturbation after " + std::to_string(kMaxRedraws) + " redraws");

  std::map<ExponentVector, RowLabel> content;
  for (const auto& c : cands) content.emplace(c.point, row_content(c, *sub));

  MatrixDefinition def;
  def.n = n;
  def.npolys = n + 1;
  def.kind = MatrixKind::subdivision;
  def.param = delta;

  // closure: a column point brings in its row content, a row brings in its
  // monomials as columns
  std::set<ExponentVector> chosen;
  std::vector<ExponentVector> work;
  for (const auto& [p, row] : content)
    if (row.poly == opt.distinguished) work.push_back(p);
  while (!work.empty()) {
    ExponentVector p = std::move(work.back());
    work.pop_back();
    if (!chosen.insert(p).second) continue;
    auto it = content.find(p);
    if (it == content.end()) throw ConstructionError("row monomial " + p.str() + " lies outside Q + delta");
    const RowLabel& row = it->second;
    for (const auto& a : supports[row.poly]) {
      ExponentVector q = row.mult + a;
      if (!chosen.contains(q)) work.push_back(std::move(q));
    }
  }
  auto fill = [&](const std::set<ExponentVector>& pts) {
    def.cols.assign(pts.begin(), pts.end());
    def.rows.clear();
    for (const auto& p : def.cols) def.rows.push_back(content.at(p));
  };
  fill(chosen);
  if (!detail::generically_nonsingular(def, supports, opt.seed)) {
    std::set<ExponentVector> all;
    for (const auto& [p, row] : content) all.insert(p);
    fill(all);
    if (!detail::generically_nonsingular(def, supports, opt.seed))
      throw ConstructionError("subdivision matrix is singular for random coefficients");
  }
  return make_matrix(std::move(def), polys);
}

/// Incremental matrix: multiplier sets B_i grow along direction v until the
/// rows span every column; a maximal independent row subset is returned.
inline ResultantMatrix build_incremental_matrix(const std::vector<SparsePolynomial>& polys,
                                                const MatrixOptions& opt = {}) {
  if (polys.empty()) throw InputError("no polynomials");
  const std::size_t n = polys.front().dim();
  if (polys.size() != n + 1) throw InputError("resultant matrix needs n+1 polynomials in n variables");
  const auto supports = supports_of(polys);

  std::vector<Rational> v = opt.direction;
  if (v.empty()) {
    std::mt19937_64 rng(derive_seed(opt.seed, 2000));
    std::uniform_int_distribution<std::int64_t> d(1, 1000);
    std::bernoulli_distribution neg(0.5);
    for (std::size_t i = 0; i < n; ++i) v.emplace_back(neg(rng) ? -d(rng) : d(rng));
  }
  if (v.size() != n) throw InputError("direction has wrong length");
  for (const auto& x : v)
    if (x == 0) throw InputError("direction has a zero coordinate");

  const auto mv = mv_deficient(supports, opt.seed);
  const auto delta = detail::draw_delta(n, derive_seed(opt.seed, 3000));

  // ordered candidates per polynomial: decreasing v.p, ties lexicographic
  std::vector<std::vector<ExponentVector>> order(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    if (n == 0) {
      order[i] = {ExponentVector(0)};
      continue;
    }
    Hull h(detail::minkowski_points(supports, i));
    auto pts = h.lattice_points(delta);
    std::vector<std::pair<Rational, ExponentVector>> keyed;
    for (auto& p : pts) {
      Rational dot = 0;
      for (std::size_t j = 0; j < n; ++j) dot += v[j] * p[j];
      keyed.emplace_back(-dot, std::move(p));
    }
    std::sort(keyed.begin(), keyed.end());
    for (auto& [k, p] : keyed) order[i].push_back(std::move(p));
  }
  std::size_t bound = 0;
  if (n > 0) bound = Hull(detail::minkowski_points(supports)).lattice_points(delta).size();

  std::vector<std::size_t> take(n + 1);
  for (std::size_t i = 0; i <= n; ++i) take[i] = std::min<std::size_t>(mv.per_poly[i], order[i].size());

  for (std::uint64_t round = 0;; ++round) {
    std::vector<RowLabel> rows;
    std::set<ExponentVector> colset;
    for (std::size_t i = 0; i <= n; ++i)
      for (std::size_t k = 0; k < take[i]; ++k) {
        rows.push_back({i, order[i][k]});
        for (const auto& a : supports[i]) colset.insert(order[i][k] + a);
      }
    std::vector<ExponentVector> cols(colset.begin(), colset.end());
    if (n > 0 && cols.size() > bound) throw ConstructionError("no Sylvester-type matrix found at this size bound");

    if (rows.size() >= cols.size()) {
      PrimeField f(large_prime(0));
      auto m = detail::modular_matrix(rows, cols, supports, detail::random_coeffs(supports, f, derive_seed(opt.seed, 4000 + round)));
      auto keep = independent_rows(m, f);
      if (keep.size() == cols.size()) {
        MatrixDefinition def;
        def.n = n;
        def.npolys = n + 1;
        def.kind = MatrixKind::incremental;
        def.param = v;
        def.cols = cols;
        for (auto k : keep) def.rows.push_back(rows[k]);
        PrimeField g(large_prime(1));
        auto check = detail::modular_matrix(def.rows, def.cols, supports,
                                            detail::random_coeffs(supports, g, derive_seed(opt.seed, 5000 + round)));
        if (modular_rank(std::move(check), g) == def.dim()) return make_matrix(std::move(def), polys);
      }
    }
    bool grew = false;
    for (std::size_t i = 0; i <= n; ++i)
      if (take[i] < order[i].size()) {
        ++take[i];
        grew = true;
      }
    if (!grew) throw ConstructionError("no Sylvester-type matrix found at this size bound");
  }
}

}  // namespace sparseres
