#pragma once

// Exact lattice polytopes: vertex sets, Minkowski sums, triangulated hulls,
// volumes and lattice-point enumeration. No floating point in this file.

#include <algorithm>
#include <map>
#include <optional>
#include <vector>

#include "sparseres/arith.hpp"
#include "sparseres/error.hpp"
#include "sparseres/polynomial.hpp"

namespace sparseres {

/// Phase-I simplex with Bland's rule: is {lambda >= 0 : A lambda = b}
/// nonempty? Exact over Q.
inline bool lp_feasible(std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
  const std::size_t m = a.size();
  if (m == 0) return true;
  const std::size_t k = a[0].size();
  const std::size_t width = k + m + 1;
  const std::size_t rhs = k + m;
  std::vector<std::vector<Rational>> t(m, std::vector<Rational>(width));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    const bool flip = b[i] < 0;
    for (std::size_t j = 0; j < k; ++j) t[i][j] = flip ? Rational(-a[i][j]) : a[i][j];
    t[i][k + i] = 1;
    t[i][rhs] = flip ? Rational(-b[i]) : b[i];
    basis[i] = k + i;
  }
  std::vector<Rational> z(width);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < k; ++j) z[j] -= t[i][j];
    z[rhs] -= t[i][rhs];
  }
  for (;;) {
    std::size_t enter = width;
    for (std::size_t j = 0; j < rhs; ++j) {
      if (z[j] < 0) {
        enter = j;
        break;
      }
    }
    if (enter == width) break;
    std::size_t leave = m;
    Rational best;
    for (std::size_t i = 0; i < m; ++i) {
      if (t[i][enter] <= 0) continue;
      Rational ratio = t[i][rhs] / t[i][enter];
      if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave == m) break;  // unbounded direction; the phase-I objective is bounded below so this ends the search
    const Rational piv = t[leave][enter];
    for (auto& v : t[leave]) v /= piv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == leave || t[i][enter] == 0) continue;
      const Rational f = t[i][enter];
      for (std::size_t j = 0; j < width; ++j) t[i][j] -= f * t[leave][j];
    }
    if (z[enter] != 0) {
      const Rational f = z[enter];
      for (std::size_t j = 0; j < width; ++j) z[j] -= f * t[leave][j];
    }
    basis[leave] = enter;
  }
  return z[rhs] == 0;
}

/// Is `target` a convex combination of `points`?
inline bool in_convex_hull(const std::vector<ExponentVector>& points, const std::vector<Rational>& target) {
  if (points.empty()) return false;
  const std::size_t n = target.size();
  std::vector<std::vector<Rational>> a(n + 1, std::vector<Rational>(points.size()));
  std::vector<Rational> b(n + 1);
  for (std::size_t j = 0; j < points.size(); ++j) {
    for (std::size_t i = 0; i < n; ++i) a[i][j] = points[j][i];
    a[n][j] = 1;
  }
  for (std::size_t i = 0; i < n; ++i) b[i] = target[i];
  b[n] = 1;
  return lp_feasible(std::move(a), std::move(b));
}

inline std::vector<Rational> to_rational(const ExponentVector& e) {
  std::vector<Rational> out(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) out[i] = e[i];
  return out;
}

/// Dimension of the affine hull of a nonempty point set.
inline std::size_t affine_dimension(const std::vector<ExponentVector>& pts) {
  if (pts.size() <= 1) return 0;
  std::vector<std::vector<Rational>> rows;
  rows.reserve(pts.size() - 1);
  for (std::size_t i = 1; i < pts.size(); ++i) rows.push_back(to_rational(pts[i] - pts[0]));
  return rank_rational(std::move(rows));
}

/// Convex lattice polytope stored by its vertex set.
struct Polytope {
  std::vector<ExponentVector> vertices;  // sorted, each a true vertex
  std::size_t dim = 0;                   // affine dimension
  std::size_t ambient = 0;               // n

  friend bool operator==(const Polytope&, const Polytope&) = default;
};

/// Vertex set of conv(points): a point is dropped iff it is a convex
/// combination of the others (exact LP).
inline Polytope newton_polytope(const std::vector<ExponentVector>& raw) {
  if (raw.empty()) throw InputError("newton_polytope of an empty support");
  std::vector<ExponentVector> pts = raw;
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  Polytope q;
  q.ambient = pts.front().size();
  q.dim = affine_dimension(pts);
  if (pts.size() == 1) {
    q.vertices = pts;
    return q;
  }
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::vector<ExponentVector> others;
    others.reserve(pts.size() - 1);
    for (std::size_t j = 0; j < pts.size(); ++j)
      if (j != i) others.push_back(pts[j]);
    if (!in_convex_hull(others, to_rational(pts[i]))) q.vertices.push_back(pts[i]);
  }
  return q;
}

inline Polytope newton_polytope(const Support& s) { return newton_polytope(s.points()); }

inline Polytope minkowski_sum(const Polytope& a, const Polytope& b) {
  if (a.ambient != b.ambient) throw InputError("minkowski_sum: ambient dimension mismatch");
  std::vector<ExponentVector> sums;
  sums.reserve(a.vertices.size() * b.vertices.size());
  for (const auto& u : a.vertices)
    for (const auto& v : b.vertices) sums.push_back(u + v);
  return newton_polytope(sums);
}

inline Polytope minkowski_sum(const std::vector<Polytope>& ps) {
  if (ps.empty()) throw InputError("minkowski_sum of nothing");
  Polytope acc = ps.front();
  for (std::size_t i = 1; i < ps.size(); ++i) acc = minkowski_sum(acc, ps[i]);
  return acc;
}

/// Triangulated convex hull of a full-dimensional lattice point set, built
/// by a placing (beneath-beyond) triangulation. Facets carry integer normals
/// so membership of rational points is an exact sign test.
class Hull {
 public:
  struct Facet {
    std::vector<std::size_t> idx;       // n point indices
    std::vector<Int128> normal;         // inward-oriented after `sign`
    Int128 offset = 0;                  // normal . f0
    int sign = 1;                       // interior side: sign*(normal.x - offset) > 0
    bool alive = true;
  };

  explicit Hull(std::vector<ExponentVector> pts) : pts_(std::move(pts)) {
    std::sort(pts_.begin(), pts_.end());
    pts_.erase(std::unique(pts_.begin(), pts_.end()), pts_.end());
    if (pts_.empty()) throw InputError("hull of an empty point set");
    n_ = pts_.front().size();
    build();
  }

  bool full_dimensional() const { return full_; }
  std::size_t ambient() const { return n_; }
  const std::vector<ExponentVector>& points() const { return pts_; }
  const std::vector<std::vector<std::size_t>>& simplices() const { return simplices_; }
  std::vector<const Facet*> facets() const {
    std::vector<const Facet*> out;
    for (const auto& f : facets_)
      if (f.alive) out.push_back(&f);
    return out;
  }

  /// Euclidean volume; zero when not full-dimensional.
  Rational volume() const {
    if (!full_) return 0;
    BigInt total = 0;
    for (const auto& s : simplices_) {
      Int128 d = simplex_det(s);
      total += BigInt(d < 0 ? Int128(-d) : d);
    }
    BigInt fact = 1;
    for (std::size_t k = 2; k <= n_; ++k) fact *= k;
    return Rational(total, fact);
  }

  /// Closed membership of a rational point.
  bool contains(const std::vector<Rational>& x) const {
    if (!full_) return false;
    for (const auto& f : facets_) {
      if (!f.alive) continue;
      Rational s = -Rational(BigInt(f.offset));
      for (std::size_t j = 0; j < n_; ++j) s += Rational(BigInt(f.normal[j])) * x[j];
      if (f.sign * s.sign() < 0) return false;
    }
    return true;
  }

  /// Integer points p with p - shift inside the hull, in sorted order.
  std::vector<ExponentVector> lattice_points(const std::vector<Rational>& shift) const {
    std::vector<ExponentVector> out;
    if (!full_) return out;
    std::vector<std::int64_t> lo(n_), hi(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      lo[i] = hi[i] = pts_[0][i];
      for (const auto& p : pts_) {
        lo[i] = std::min(lo[i], p[i]);
        hi[i] = std::max(hi[i], p[i]);
      }
    }
    // p - shift in [lo, hi]  <=>  p in [lo + shift, hi + shift]
    std::vector<std::int64_t> plo(n_), phi(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      plo[i] = static_cast<std::int64_t>(ceil_rational(Rational(lo[i]) + shift[i]));
      phi[i] = static_cast<std::int64_t>(floor_rational(Rational(hi[i]) + shift[i]));
      if (plo[i] > phi[i]) return out;
    }
    std::vector<Rational> shift_dot;
    const auto live = facets();
    shift_dot.reserve(live.size());
    for (const Facet* f : live) {
      Rational s = 0;
      for (std::size_t j = 0; j < n_; ++j) s += Rational(BigInt(f->normal[j])) * shift[j];
      shift_dot.push_back(s);
    }
    ExponentVector p(n_);
    for (std::size_t i = 0; i < n_; ++i) p[i] = plo[i];
    for (;;) {
      bool inside = true;
      for (std::size_t k = 0; k < live.size() && inside; ++k) {
        const Facet& f = *live[k];
        Int128 np = 0;
        for (std::size_t j = 0; j < n_; ++j) np += f.normal[j] * Int128(p[j]);
        Rational val = Rational(BigInt(np - f.offset)) - shift_dot[k];
        if (f.sign * val.sign() < 0) inside = false;
      }
      if (inside) out.push_back(p);
      bool advanced = false;
      for (std::size_t i = n_; i-- > 0;) {
        if (p[i] < phi[i]) {
          ++p[i];
          for (std::size_t j = i + 1; j < n_; ++j) p[j] = plo[j];
          advanced = true;
          break;
        }
      }
      if (!advanced) return out;
    }
  }

  static BigInt floor_rational(const Rational& q) {
    BigInt num = numerator(q), den = denominator(q);
    BigInt f = num / den;
    if (num % den != 0 && num < 0) f -= 1;
    return f;
  }
  static BigInt ceil_rational(const Rational& q) { return -floor_rational(-q); }

 private:
  Int128 orient(const std::vector<std::size_t>& face, const ExponentVector& p) const {
    std::vector<std::vector<Int128>> m(n_, std::vector<Int128>(n_));
    const auto& f0 = pts_[face[0]];
    for (std::size_t r = 1; r < n_; ++r)
      for (std::size_t c = 0; c < n_; ++c) m[r - 1][c] = pts_[face[r]][c] - f0[c];
    for (std::size_t c = 0; c < n_; ++c) m[n_ - 1][c] = p[c] - f0[c];
    return det_bareiss(std::move(m));
  }

  Int128 simplex_det(const std::vector<std::size_t>& s) const {
    std::vector<std::vector<Int128>> m(n_, std::vector<Int128>(n_));
    for (std::size_t r = 0; r < n_; ++r)
      for (std::size_t c = 0; c < n_; ++c) m[r][c] = pts_[s[r + 1]][c] - pts_[s[0]][c];
    return det_bareiss(std::move(m));
  }

  Facet make_facet(std::vector<std::size_t> idx, std::size_t inside) const {
    Facet f;
    f.idx = std::move(idx);
    f.normal.resize(n_);
    const auto& f0 = pts_[f.idx[0]];
    for (std::size_t j = 0; j < n_; ++j) f.normal[j] = orient(f.idx, f0 + ExponentVector::unit(n_, j));
    f.offset = 0;
    for (std::size_t j = 0; j < n_; ++j) f.offset += f.normal[j] * Int128(f0[j]);
    Int128 s = side(f, pts_[inside]);
    f.sign = s > 0 ? 1 : -1;
    return f;
  }

  Int128 side(const Facet& f, const ExponentVector& p) const {
    Int128 v = -f.offset;
    for (std::size_t j = 0; j < n_; ++j) v += f.normal[j] * Int128(p[j]);
    return v;
  }

  void build() {
    // initial simplex: grow an affinely independent set greedily
    std::vector<std::size_t> base{0};
    std::vector<std::vector<Rational>> rows;
    for (std::size_t i = 1; i < pts_.size() && base.size() < n_ + 1; ++i) {
      auto trial = rows;
      trial.push_back(to_rational(pts_[i] - pts_[0]));
      if (rank_rational(trial) == trial.size()) {
        rows = std::move(trial);
        base.push_back(i);
      }
    }
    if (base.size() < n_ + 1 || n_ == 0) {
      full_ = false;
      return;
    }
    full_ = true;
    simplices_.push_back(base);
    for (std::size_t drop = 0; drop <= n_; ++drop) {
      std::vector<std::size_t> idx;
      for (std::size_t k = 0; k <= n_; ++k)
        if (k != drop) idx.push_back(base[k]);
      facets_.push_back(make_facet(std::move(idx), base[drop]));
    }
    std::vector<bool> used(pts_.size(), false);
    for (auto b : base) used[b] = true;
    for (std::size_t p = 0; p < pts_.size(); ++p) {
      if (!used[p]) insert(p);
    }
  }

  void insert(std::size_t p) {
    std::vector<std::size_t> visible;
    for (std::size_t f = 0; f < facets_.size(); ++f) {
      if (!facets_[f].alive) continue;
      Int128 s = side(facets_[f], pts_[p]);
      if ((facets_[f].sign > 0 && s < 0) || (facets_[f].sign < 0 && s > 0)) visible.push_back(f);
    }
    if (visible.empty()) return;
    std::map<std::vector<std::size_t>, std::pair<int, std::size_t>> ridges;  // ridge -> (count, opposite vertex)
    for (auto f : visible) {
      auto simplex = facets_[f].idx;
      simplex.push_back(p);
      simplices_.push_back(simplex);
      const auto& idx = facets_[f].idx;
      for (std::size_t drop = 0; drop < idx.size(); ++drop) {
        std::vector<std::size_t> ridge;
        for (std::size_t k = 0; k < idx.size(); ++k)
          if (k != drop) ridge.push_back(idx[k]);
        std::sort(ridge.begin(), ridge.end());
        auto& slot = ridges[ridge];
        slot.first += 1;
        slot.second = idx[drop];
      }
      facets_[f].alive = false;
    }
    for (auto& [ridge, info] : ridges) {
      if (info.first != 1) continue;
      auto idx = ridge;
      idx.push_back(p);
      facets_.push_back(make_facet(std::move(idx), info.second));
    }
  }

  std::vector<ExponentVector> pts_;
  std::size_t n_ = 0;
  bool full_ = false;
  std::vector<std::vector<std::size_t>> simplices_;
  std::vector<Facet> facets_;
};

/// n-dimensional euclidean volume (0 for lower-dimensional polytopes).
inline Rational volume(const Polytope& q) {
  if (q.dim < q.ambient) return 0;
  return Hull(q.vertices).volume();
}

}  // namespace sparseres
