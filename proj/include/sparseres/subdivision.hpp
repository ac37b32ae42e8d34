#pragma once

// Liftings, fine mixed subdivisions of Minkowski sums, mixed volumes.
//
// A maximal cell of the subdivision induced by a generic lifting w is a sum
// F_0 + ... + F_{m-1} of lower faces of the lifted supports sharing one
// inner normal (h, 1). With w generic each F_i is a simplex and the edge
// vectors of all faces together form a basis of R^n. The cells are found by
// enumerating such face tuples and certifying each exactly in integers.

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sparseres/arith.hpp"
#include "sparseres/error.hpp"
#include "sparseres/polynomial.hpp"
#include "sparseres/polytope.hpp"

namespace sparseres {

inline constexpr std::int64_t kLiftMax = std::int64_t{1} << 20;
inline constexpr int kMaxRedraws = 10;

/// Deterministic seed stream: the k-th seed derived from a base seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t k) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (k + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Integer lifting values, one per support point.
struct Lifting {
  std::vector<std::vector<std::int64_t>> values;
  std::uint64_t seed = 0;
};

inline Lifting draw_lifting(const std::vector<Support>& supports, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> dist(1, kLiftMax);
  Lifting w;
  w.seed = seed;
  for (const auto& s : supports) {
    std::vector<std::int64_t> v(s.size());
    for (auto& x : v) x = dist(rng);
    w.values.push_back(std::move(v));
  }
  return w;
}

struct Cell {
  /// F_i for each support, as points of that support.
  std::vector<std::vector<ExponentVector>> faces;
  Rational volume;
  /// Every face is a vertex or an edge.
  bool is_mixed = false;
  /// Inner normal h: <h, a> + w(a) is minimal on F_i over support i.
  std::vector<Rational> normal;

  // point-location data: x = base + D lambda, columns of D are face edges
  ExponentVector base;
  std::vector<std::vector<Rational>> inverse;
  std::vector<std::size_t> edge_face;
  std::vector<std::int64_t> lo, hi;

  /// Indices i whose face is a single point.
  std::vector<std::size_t> vertex_summands() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < faces.size(); ++i)
      if (faces[i].size() == 1) out.push_back(i);
    return out;
  }
};

enum class Location { outside, interior, boundary };

struct PointLocation {
  Location where = Location::outside;
  std::size_t cell = 0;
};

struct MixedSubdivision {
  std::size_t n = 0;
  std::vector<Support> supports;
  Lifting lifting;
  std::vector<Cell> cells;

  Rational total_volume() const {
    Rational v = 0;
    for (const auto& c : cells) v += c.volume;
    return v;
  }

  /// Sum of mixed-cell volumes. For n supports this is the mixed volume.
  Rational mixed_cell_volume() const {
    Rational v = 0;
    for (const auto& c : cells)
      if (c.is_mixed) v += c.volume;
    return v;
  }

  /// Locates a rational point. A point in the interior of two cells, or on
  /// a cell boundary, is reported as `boundary`.
  PointLocation locate(const std::vector<Rational>& x) const {
    PointLocation out;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const Location where = classify(c, x);
      if (where == Location::outside) continue;
      if (where == Location::boundary || out.where == Location::interior) return {Location::boundary, c};
      out = {Location::interior, c};
    }
    return out;
  }

  /// Position of x relative to one (closed) cell.
  Location classify(std::size_t c, const std::vector<Rational>& x) const {
    const Cell& cell = cells[c];
    for (std::size_t i = 0; i < n; ++i)
      if (x[i] < cell.lo[i] || x[i] > cell.hi[i]) return Location::outside;
    std::vector<Rational> rel(n);
    for (std::size_t i = 0; i < n; ++i) rel[i] = x[i] - cell.base[i];
    std::vector<Rational> sums(cell.faces.size());
    bool on_boundary = false;
    for (std::size_t e = 0; e < n; ++e) {
      Rational lam = 0;
      for (std::size_t i = 0; i < n; ++i) lam += cell.inverse[e][i] * rel[i];
      if (lam < 0) return Location::outside;
      if (lam == 0) on_boundary = true;
      sums[cell.edge_face[e]] += lam;
    }
    for (const auto& s : sums) {
      if (s > 1) return Location::outside;
      if (s == 1) on_boundary = true;
    }
    return on_boundary ? Location::boundary : Location::interior;
  }

  /// Diagnostic listing, one line per cell: "(F0|F1|...) volume mixed?".
  std::string dump() const {
    std::ostringstream os;
    for (const auto& c : cells) {
      os << "(";
      for (std::size_t i = 0; i < c.faces.size(); ++i) {
        if (i) os << "|";
        for (std::size_t k = 0; k < c.faces[i].size(); ++k) os << (k ? " " : "") << c.faces[i][k];
      }
      os << ") " << c.volume << (c.is_mixed ? " mixed" : " nonmixed") << "\n";
    }
    return os.str();
  }
};

namespace detail {

inline BigInt factorial(std::size_t k) {
  BigInt f = 1;
  for (std::size_t i = 2; i <= k; ++i) f *= i;
  return f;
}

class CellEnumerator {
 public:
  CellEnumerator(const std::vector<Support>& supports, const Lifting& lift, bool mixed_only)
      : s_(supports), w_(lift), mixed_only_(mixed_only) {
    n_ = s_.empty() ? 0 : s_.front().dim();
    for (const auto& s : s_)
      if (s.dim() != n_) throw InputError("supports of different dimension");
    if (w_.values.size() != s_.size()) throw InputError("lifting does not match supports");
    chosen_.resize(s_.size());
  }

  std::vector<Cell> run() {
    if (n_ == 0) return {};
    recurse(0, n_);
    return std::move(cells_);
  }

 private:
  void recurse(std::size_t i, std::size_t budget) {
    if (i == s_.size()) {
      if (budget == 0) certify();
      return;
    }
    // faces of the remaining supports must absorb the budget
    std::size_t max_rest = 0;
    for (std::size_t j = i + 1; j < s_.size(); ++j) max_rest += mixed_only_ ? 1 : s_[j].size() - 1;
    const std::size_t m = s_[i].size();
    std::size_t kmin = budget > max_rest ? budget - max_rest : 0;
    std::size_t kmax = std::min(budget, m - 1);
    if (mixed_only_) {
      if (m < 2) return;
      kmin = kmax = 1;
      if (budget < 1) return;
    }
    for (std::size_t k = kmin; k <= kmax; ++k) {
      std::vector<std::size_t> comb(k + 1);
      for (std::size_t t = 0; t <= k; ++t) comb[t] = t;
      for (;;) {
        chosen_[i] = comb;
        recurse(i + 1, budget - k);
        // next combination
        std::size_t t = k + 1;
        while (t > 0 && comb[t - 1] == m - (k + 1) + (t - 1)) --t;
        if (t == 0) break;
        ++comb[t - 1];
        for (std::size_t u = t; u <= k; ++u) comb[u] = comb[u - 1] + 1;
      }
    }
  }

  void certify() {
    // rows of Dt are the edges; rhs are lift differences
    std::vector<std::vector<Int128>> dt;
    std::vector<Int128> rhs;
    std::vector<std::size_t> owner;
    dt.reserve(n_);
    for (std::size_t i = 0; i < s_.size(); ++i) {
      const auto& c = chosen_[i];
      const auto& a0 = s_[i][c[0]];
      for (std::size_t t = 1; t < c.size(); ++t) {
        const auto& a = s_[i][c[t]];
        std::vector<Int128> row(n_);
        for (std::size_t k = 0; k < n_; ++k) row[k] = a[k] - a0[k];
        dt.push_back(std::move(row));
        rhs.push_back(Int128(w_.values[i][c[0]]) - Int128(w_.values[i][c[t]]));
        owner.push_back(i);
      }
    }
    const Int128 det = det_bareiss(dt);
    if (det == 0) return;
    std::vector<Int128> hnum(n_);
    for (std::size_t k = 0; k < n_; ++k) {
      auto m = dt;
      for (std::size_t r = 0; r < n_; ++r) m[r][k] = rhs[r];
      hnum[k] = det_bareiss(std::move(m));
    }
    // lower-face test with every value scaled by det
    bool tie = false;
    for (std::size_t i = 0; i < s_.size(); ++i) {
      const auto& c = chosen_[i];
      auto value = [&](std::size_t j) {
        Int128 v = det * Int128(w_.values[i][j]);
        for (std::size_t k = 0; k < n_; ++k) v += hnum[k] * Int128(s_[i][j][k]);
        return v;
      };
      const Int128 ref = value(c[0]);
      std::size_t pos = 0;
      for (std::size_t j = 0; j < s_[i].size(); ++j) {
        if (pos < c.size() && c[pos] == j) {
          ++pos;
          continue;
        }
        const Int128 v = value(j) - ref;
        if (v == 0) {
          tie = true;
          continue;
        }
        if ((det > 0 && v < 0) || (det < 0 && v > 0)) return;
      }
    }
    if (tie) throw NonGenericError("non-generic lifting: lower face with ambiguous decomposition");
    emit(dt, det, hnum, owner);
  }

  void emit(const std::vector<std::vector<Int128>>& dt, const Int128& det, const std::vector<Int128>& hnum,
            const std::vector<std::size_t>& owner) {
    Cell cell;
    cell.faces.resize(s_.size());
    BigInt denom = 1;
    cell.is_mixed = true;
    cell.base = ExponentVector(n_);
    for (std::size_t i = 0; i < s_.size(); ++i) {
      for (auto j : chosen_[i]) cell.faces[i].push_back(s_[i][j]);
      denom *= factorial(chosen_[i].size() - 1);
      if (chosen_[i].size() > 2) cell.is_mixed = false;
      cell.base += s_[i][chosen_[i][0]];
    }
    const Int128 adet = det < 0 ? Int128(-det) : det;
    cell.volume = Rational(BigInt(adet), denom);
    cell.normal.resize(n_);
    for (std::size_t k = 0; k < n_; ++k) cell.normal[k] = Rational(BigInt(hnum[k]), BigInt(det));
    std::vector<std::vector<Rational>> d(n_, std::vector<Rational>(n_));
    for (std::size_t r = 0; r < n_; ++r)
      for (std::size_t k = 0; k < n_; ++k) d[k][r] = Rational(BigInt(dt[r][k]));  // columns are edges
    cell.inverse = inverse_rational(std::move(d));
    cell.edge_face = owner;
    cell.lo.assign(n_, 0);
    cell.hi.assign(n_, 0);
    for (std::size_t i = 0; i < s_.size(); ++i) {
      for (std::size_t k = 0; k < n_; ++k) {
        std::int64_t lo = cell.faces[i][0][k], hi = lo;
        for (const auto& p : cell.faces[i]) {
          lo = std::min(lo, p[k]);
          hi = std::max(hi, p[k]);
        }
        cell.lo[k] += lo;
        cell.hi[k] += hi;
      }
    }
    cells_.push_back(std::move(cell));
  }

  const std::vector<Support>& s_;
  const Lifting& w_;
  bool mixed_only_;
  std::size_t n_ = 0;
  std::vector<std::vector<std::size_t>> chosen_;
  std::vector<Cell> cells_;
};

}  // namespace detail

/// Fine mixed subdivision of the Minkowski sum of the supports' hulls.
/// Throws NonGenericError when the lifting is degenerate.
inline MixedSubdivision mixed_subdivision(const std::vector<Support>& supports, const Lifting& lift) {
  if (supports.empty()) throw InputError("mixed_subdivision needs at least one support");
  MixedSubdivision sub;
  sub.n = supports.front().dim();
  sub.supports = supports;
  sub.lifting = lift;
  sub.cells = detail::CellEnumerator(supports, lift, false).run();
  return sub;
}

/// Draws liftings from the seed stream until one is generic.
inline MixedSubdivision mixed_subdivision(const std::vector<Support>& supports, std::uint64_t seed) {
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    try {
      return mixed_subdivision(supports, draw_lifting(supports, derive_seed(seed, attempt)));
    } catch (const NonGenericError&) {
    }
  }
  throw ConstructionError("non-generic lifting after " + std::to_string(kMaxRedraws) + " redraws");
}

/// Distinct cells of a regular subdivision have distinct lifted normals, and
/// two cells with distinct normals cannot share interior points.
inline bool pairwise_disjoint(const MixedSubdivision& sub) {
  for (std::size_t a = 0; a < sub.cells.size(); ++a)
    for (std::size_t b = a + 1; b < sub.cells.size(); ++b)
      if (sub.cells[a].normal == sub.cells[b].normal) return false;
  return true;
}

/// Mixed volume of n supports in Z^n as the total volume of mixed cells.
inline std::int64_t mixed_volume(const std::vector<Support>& supports, std::uint64_t seed = 1) {
  if (supports.empty()) throw InputError("mixed_volume of no supports");
  const std::size_t n = supports.front().dim();
  if (supports.size() != n) throw InputError("mixed_volume needs exactly n supports in n variables");
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    try {
      const Lifting w = draw_lifting(supports, derive_seed(seed, attempt));
      const auto cells = detail::CellEnumerator(supports, w, true).run();
      Rational total = 0;
      for (const auto& c : cells) total += c.volume;
      if (denominator(total) != 1) throw ConstructionError("mixed volume is not an integer");
      return numerator(total).convert_to<std::int64_t>();
    } catch (const NonGenericError&) {
    }
  }
  throw ConstructionError("non-generic lifting after " + std::to_string(kMaxRedraws) + " redraws");
}

struct DeficientVolumes {
  /// per_poly[i] = MV of all supports except the i-th.
  std::vector<std::int64_t> per_poly;
  /// Total degree of the sparse resultant.
  std::int64_t degree = 0;
};

/// Mixed volumes MV_{-i} of n+1 supports in Z^n.
inline DeficientVolumes mv_deficient(const std::vector<Support>& supports, std::uint64_t seed = 1) {
  if (supports.empty()) throw InputError("mv_deficient of no supports");
  const std::size_t n = supports.front().dim();
  if (supports.size() != n + 1) throw InputError("mv_deficient needs n+1 supports in n variables");
  DeficientVolumes out;
  for (std::size_t i = 0; i < supports.size(); ++i) {
    std::vector<Support> rest;
    for (std::size_t j = 0; j < supports.size(); ++j)
      if (j != i) rest.push_back(supports[j]);
    out.per_poly.push_back(n == 0 ? 1 : mixed_volume(rest, seed));
    out.degree += out.per_poly.back();
  }
  return out;
}

}  // namespace sparseres
