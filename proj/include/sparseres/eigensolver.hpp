#pragma once

// Root finding through a resultant matrix: overconstrain the system, build
// M(x0), split off a constant block, reduce the Schur complement A(x0) to an
// eigenproblem and read the roots off the eigenvectors.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "sparseres/arith.hpp"
#include "sparseres/error.hpp"
#include "sparseres/numeric.hpp"
#include "sparseres/polynomial.hpp"
#include "sparseres/resultant_matrix.hpp"
#include "sparseres/subdivision.hpp"

namespace sparseres {

enum class Mode { u_resultant, hidden };

/// n+1 polynomials in n' variables with coefficients in Q[x0]. In u mode
/// n' = n and polys[0] = x0 + sum c_j x_j; in hidden mode n' = n - 1 and x0
/// stands for the original variable x_k.
struct OverconstrainedSystem {
  Mode mode = Mode::u_resultant;
  std::vector<SparsePolynomial> polys;
  std::vector<SparsePolynomial> original;  // the square input system
  std::vector<Rational> u_coeffs;
  std::size_t hidden_index = 0;

  std::size_t n() const { return original.empty() ? 0 : original.front().dim(); }
};

inline OverconstrainedSystem overconstrain_u(const std::vector<SparsePolynomial>& sys, std::uint64_t seed,
                                             std::vector<Rational> coeffs = {}) {
  if (sys.empty()) throw InputError("empty system");
  const std::size_t n = sys.front().dim();
  if (sys.size() != n) throw InputError("u mode needs n polynomials in n variables");
  for (const auto& p : sys) {
    if (p.dim() != n) throw InputError("polynomials in different numbers of variables");
    if (p.x0_degree() > 0) throw InputError("input coefficients must be constants");
  }
  if (coeffs.empty()) {
    std::mt19937_64 rng(derive_seed(seed, 3000));
    std::uniform_int_distribution<int> d(1, 99);
    std::bernoulli_distribution neg(0.5);
    for (std::size_t j = 0; j < n; ++j) coeffs.emplace_back(neg(rng) ? -d(rng) : d(rng));
  }
  if (coeffs.size() != n) throw InputError("u coefficient count differs from n");
  for (const auto& c : coeffs)
    if (c == 0) throw InputError("u coefficients must be nonzero");
  TermList t{{ExponentVector(n), CoeffPoly::x0()}};
  for (std::size_t j = 0; j < n; ++j) t.emplace_back(ExponentVector::unit(n, j), CoeffPoly(coeffs[j]));
  OverconstrainedSystem oc;
  oc.mode = Mode::u_resultant;
  oc.original = sys;
  oc.u_coeffs = std::move(coeffs);
  oc.polys.push_back(support_of(t));
  oc.polys.insert(oc.polys.end(), sys.begin(), sys.end());
  return oc;
}

/// Hides x_k (0-based). Negative powers of x_k are cleared first, which does
/// not change the roots in the torus.
inline OverconstrainedSystem overconstrain_hidden(const std::vector<SparsePolynomial>& sys, std::size_t k) {
  if (sys.empty()) throw InputError("empty system");
  const std::size_t n = sys.front().dim();
  if (sys.size() != n) throw InputError("hidden mode needs n polynomials in n variables");
  if (n < 2) throw InputError("hidden mode needs at least two variables");
  if (k >= n) throw InputError("hidden variable index out of range");
  OverconstrainedSystem oc;
  oc.mode = Mode::hidden;
  oc.original = sys;
  oc.hidden_index = k;
  for (const auto& p : sys) {
    if (p.dim() != n) throw InputError("polynomials in different numbers of variables");
    if (p.x0_degree() > 0) throw InputError("input coefficients must be constants");
    std::int64_t low = 0;
    for (const auto& e : p.support()) low = std::min(low, e[k]);
    TermList t;
    for (std::size_t j = 0; j < p.size(); ++j) {
      const auto& e = p.support()[j];
      ExponentVector r(n - 1);
      for (std::size_t i = 0, s = 0; i < n; ++i)
        if (i != k) r[s++] = e[i];
      std::vector<Rational> c(static_cast<std::size_t>(e[k] - low) + 1);
      c.back() = p.coeffs()[j].constant();
      t.emplace_back(r, CoeffPoly(std::move(c)));
    }
    oc.polys.push_back(support_of(t));
  }
  return oc;
}

/// Sum of coeffs[k] x0^k.
struct MatrixPolynomial {
  std::vector<Matrix> coeffs;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  Index size() const { return coeffs.empty() ? 0 : coeffs.front().rows(); }
  CMatrix eval(Complex x) const {
    CMatrix acc = CMatrix::Zero(size(), size());
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = (acc * x + it->cast<Complex>()).eval();
    return acc;
  }
  Matrix eval(double x) const {
    Matrix acc = Matrix::Zero(size(), size());
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    return acc;
  }
  /// Drops trailing zero coefficients, keeping at least one.
  void trim() {
    while (coeffs.size() > 1 && coeffs.back().cwiseAbs().maxCoeff() == 0) coeffs.pop_back();
  }
};

/// Polynomials with coefficients scaled to unit max-norm. The u-mode f0 is
/// kept as is so that x0 enters with coefficient 1.
inline std::vector<SparsePolynomial> normalized_polys(const OverconstrainedSystem& oc) {
  std::vector<SparsePolynomial> out;
  for (std::size_t i = 0; i < oc.polys.size(); ++i)
    out.push_back(oc.mode == Mode::u_resultant && i == 0 ? oc.polys[i] : oc.polys[i].normalized());
  return out;
}

inline MatrixPolynomial assemble(const OverconstrainedSystem& oc, const MatrixDefinition& def) {
  const PolyMatrix e = matrix_entries(def, normalized_polys(oc));
  int d = 0;
  for (const auto& row : e)
    for (const auto& c : row) d = std::max(d, c.degree());
  const Index n = static_cast<Index>(def.dim());
  MatrixPolynomial m;
  m.coeffs.assign(d + 1, Matrix::Zero(n, n));
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      for (int k = 0; k <= e[i][j].degree(); ++k) m.coeffs[k](i, j) = to_double(e[i][j].coeff(k));
  return m;
}

/// M permuted to [M11 M12; M21 M22] with M11 constant, and the Schur
/// complement A(x0) = M22(x0) - M21 M11^-1 M12(x0).
struct SchurSystem {
  std::vector<Index> rows11, cols11;  // indices into M for the M11 block
  std::vector<Index> rows2, cols2;    // remaining rows and columns (cols2 = B)
  LUFactorization m11;
  Matrix m21;
  std::vector<Matrix> x;  // M11^-1 M12_k per power of x0
  MatrixPolynomial a;
  Tier tier = Tier::fast;
  bool whole_matrix = false;

  Index m11_dim() const { return static_cast<Index>(rows11.size()); }
  Index r() const { return a.size(); }
  int d() const { return a.degree(); }

  /// Values of all monomials in E (indexed like M's columns) from a kernel
  /// vector of A(lambda) over B.
  CVector expand(const CVector& vb, Complex lambda) const {
    const Index n = static_cast<Index>(cols11.size() + cols2.size());
    CVector out = CVector::Zero(n);
    for (std::size_t j = 0; j < cols2.size(); ++j) out(cols2[j]) = vb(static_cast<Index>(j));
    if (cols11.empty()) return out;
    CVector v1 = CVector::Zero(static_cast<Index>(cols11.size()));
    Complex p = 1;
    for (const auto& xk : x) {
      v1 -= p * (xk.cast<Complex>() * vb);
      p *= lambda;
    }
    for (std::size_t j = 0; j < cols11.size(); ++j) out(cols11[j]) = v1(static_cast<Index>(j));
    return out;
  }
};

namespace detail {

inline Matrix take(const Matrix& m, const std::vector<Index>& rows, const std::vector<Index>& cols) {
  Matrix out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = m(rows[i], cols[j]);
  return out;
}

inline std::vector<Index> complement(const std::vector<Index>& used, Index n) {
  std::vector<bool> in(n, false);
  for (auto i : used) in[i] = true;
  std::vector<Index> out;
  for (Index i = 0; i < n; ++i)
    if (!in[i]) out.push_back(i);
  return out;
}

}  // namespace detail

/// Chooses M11 greedily: leading blocks of a complete-pivoting elimination
/// of the constant columns grow while their condition number stays within
/// `m11_limit`. An empty block, or `whole_matrix`, gives A = M.
inline SchurSystem partition_and_schur(const MatrixPolynomial& m, double m11_limit = 1e12, bool whole_matrix = false,
                                       double cond_threshold = 1e8) {
  const Index n = m.size();
  if (m.coeffs.empty() || m.coeffs.front().cols() != n) throw NumericError("partition_and_schur: matrix not square");
  SchurSystem s;
  auto whole = [&] {
    s.rows2.resize(n);
    s.cols2.resize(n);
    for (Index i = 0; i < n; ++i) s.rows2[i] = s.cols2[i] = i;
    s.a = m;
    s.a.trim();
    s.whole_matrix = true;
  };
  if (!whole_matrix) {
    std::vector<Index> const_cols, nz_rows;
    for (Index j = 0; j < n; ++j) {
      bool constant = true;
      for (std::size_t k = 1; k < m.coeffs.size() && constant; ++k) constant = m.coeffs[k].col(j).cwiseAbs().maxCoeff() == 0;
      if (constant) const_cols.push_back(j);
    }
    for (Index i = 0; i < n && !const_cols.empty(); ++i) {
      bool nz = false;
      for (auto j : const_cols) nz = nz || m.coeffs[0](i, j) != 0;
      if (nz) nz_rows.push_back(i);
    }
    Index k = 0;
    PivotOrder order;
    if (!const_cols.empty() && !nz_rows.empty()) {
      order = complete_pivot_order(detail::take(m.coeffs[0], nz_rows, const_cols));
      for (Index t = 1; t <= order.rank; ++t) {
        std::vector<Index> r(order.rows.begin(), order.rows.begin() + t), c(order.cols.begin(), order.cols.begin() + t);
        Matrix block(t, t);
        for (Index i = 0; i < t; ++i)
          for (Index j = 0; j < t; ++j) block(i, j) = m.coeffs[0](nz_rows[r[i]], const_cols[c[j]]);
        if (lu_col_pivot(block).cond() > m11_limit) break;
        k = t;
      }
    }
    if (k == n) k = n - 1;  // keep A nonempty
    if (k > 0) {
      for (Index t = 0; t < k; ++t) {
        s.rows11.push_back(nz_rows[order.rows[t]]);
        s.cols11.push_back(const_cols[order.cols[t]]);
      }
      s.rows2 = detail::complement(s.rows11, n);
      s.cols2 = detail::complement(s.cols11, n);
      s.m11 = lu_col_pivot(detail::take(m.coeffs[0], s.rows11, s.cols11));
      s.m21 = detail::take(m.coeffs[0], s.rows2, s.cols11);
      const Index r = static_cast<Index>(s.rows2.size());
      const Index nd = static_cast<Index>(m.coeffs.size());
      Matrix m12(k, r * nd);
      for (Index p = 0; p < nd; ++p) m12.middleCols(p * r, r) = detail::take(m.coeffs[p], s.rows11, s.cols2);
      auto sol = solve_tiered(s.m11, m12, Tier::automatic, cond_threshold);
      s.tier = sol.used;
      for (Index p = 0; p < nd; ++p) {
        s.x.push_back(sol.x.middleCols(p * r, r));
        s.a.coeffs.push_back(detail::take(m.coeffs[p], s.rows2, s.cols2) - s.m21 * s.x.back());
      }
      // coefficients beyond the true degree are rounding noise only if M22
      // and M12 both vanish there; both are exact zeros in that case
      while (s.a.coeffs.size() > 1 && detail::take(m.coeffs[s.a.coeffs.size() - 1], s.rows2, s.cols2).cwiseAbs().maxCoeff() == 0 &&
             detail::take(m.coeffs[s.a.coeffs.size() - 1], s.rows11, s.cols2).cwiseAbs().maxCoeff() == 0) {
        s.a.coeffs.pop_back();
        s.x.pop_back();
      }
    } else {
      whole();
    }
  } else {
    whole();
  }
  if (s.d() < 1) throw NumericError("matrix does not depend on x0");
  return s;
}

/// x0 = (t1 y + t2) / (t3 y + t4).
struct RankBalanceTransform {
  std::array<long, 4> t{1, 0, 0, 1};

  bool identity() const { return t == std::array<long, 4>{1, 0, 0, 1}; }
  /// Maps an eigenvalue in y back to x0; nullopt for x0 at infinity.
  std::optional<Complex> back(Complex mu, double tol = 1e-10) const {
    const Complex num = static_cast<double>(t[0]) * mu + static_cast<double>(t[1]);
    const Complex den = static_cast<double>(t[2]) * mu + static_cast<double>(t[3]);
    if (std::abs(den) <= tol * std::abs(num)) return std::nullopt;
    return num / den;
  }
};

/// A'(y) = (t3 y + t4)^d A((t1 y + t2) / (t3 y + t4)).
inline MatrixPolynomial transform(const MatrixPolynomial& a, const RankBalanceTransform& tr) {
  const int d = a.degree();
  auto mul = [](const std::vector<double>& p, double c1, double c0) {
    std::vector<double> out(p.size() + 1, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) {
      out[i] += c0 * p[i];
      out[i + 1] += c1 * p[i];
    }
    return out;
  };
  MatrixPolynomial out;
  out.coeffs.assign(d + 1, Matrix::Zero(a.size(), a.size()));
  for (int k = 0; k <= d; ++k) {
    std::vector<double> p{1.0};
    for (int i = 0; i < k; ++i) p = mul(p, static_cast<double>(tr.t[0]), static_cast<double>(tr.t[1]));
    for (int i = k; i < d; ++i) p = mul(p, static_cast<double>(tr.t[2]), static_cast<double>(tr.t[3]));
    for (int j = 0; j <= d; ++j)
      if (p[j] != 0) out.coeffs[j] += p[j] * a.coeffs[k];
  }
  return out;
}

struct RankBalance {
  RankBalanceTransform transform;
  MatrixPolynomial a;
  double leading_cond = 0;
};

/// Tries the identity and `tries` random integer transforms and keeps the
/// one whose leading coefficient has the smallest condition number.
inline RankBalance rank_balance(const MatrixPolynomial& a, int tries = 3, std::uint64_t seed = 1) {
  RankBalance best{RankBalanceTransform{}, a, lu_col_pivot(a.coeffs.back()).cond()};
  std::mt19937_64 rng(derive_seed(seed, 4000));
  std::uniform_int_distribution<long> d(-9, 9);
  for (int i = 0; i < tries; ++i) {
    RankBalanceTransform tr;
    do {
      for (auto& v : tr.t) v = d(rng);
    } while (tr.t[0] * tr.t[3] - tr.t[1] * tr.t[2] == 0);
    auto b = transform(a, tr);
    const double k = lu_col_pivot(b.coeffs.back()).cond();
    if (k < best.leading_cond) best = {tr, std::move(b), k};
  }
  return best;
}

/// Block companion matrix of A_d^-1 A(y); eigenvectors are stacked
/// [v; y v; ...; y^(d-1) v].
inline Matrix companion(const MatrixPolynomial& a, double cond_threshold = 1e8, double max_cond = 1e14) {
  const int d = a.degree();
  const Index r = a.size();
  if (d < 1) throw NumericError("companion of a constant matrix polynomial");
  auto lead = lu_col_pivot(a.coeffs.back());
  if (lead.singular() || lead.cond() > max_cond) throw NumericError("leading coefficient is ill-conditioned");
  Matrix rhs(r, r * d);
  for (int k = 0; k < d; ++k) rhs.middleCols(k * r, r) = a.coeffs[k];
  Matrix low = solve_tiered(lead, rhs, Tier::automatic, cond_threshold).x;
  Matrix c = Matrix::Zero(r * d, r * d);
  for (int k = 0; k + 1 < d; ++k) c.block(k * r, (k + 1) * r, r, r) = Matrix::Identity(r, r);
  c.bottomRows(r) = -low;
  return c;
}

/// Linearization C1 y + C0 of A(y): C1 = diag(I, ..., I, A_d).
inline std::pair<Matrix, Matrix> pencil(const MatrixPolynomial& a) {
  const int d = a.degree();
  const Index r = a.size();
  Matrix c1 = Matrix::Identity(r * d, r * d), c0 = Matrix::Zero(r * d, r * d);
  c1.bottomRightCorner(r, r) = a.coeffs.back();
  for (int k = 0; k + 1 < d; ++k) c0.block(k * r, (k + 1) * r, r, r) = -Matrix::Identity(r, r);
  for (int k = 0; k < d; ++k) c0.block((d - 1) * r, k * r, r, r) = a.coeffs[k];
  return {c1, c0};
}

enum class RootStatus { accepted, rejected, infinite, multiple };

inline const char* to_string(RootStatus s) {
  switch (s) {
    case RootStatus::accepted: return "accepted";
    case RootStatus::rejected: return "rejected";
    case RootStatus::infinite: return "infinite";
    case RootStatus::multiple: return "multiple";
  }
  return "?";
}

struct RootCandidate {
  Complex eigenvalue;                // x0 (u mode) or the hidden coordinate
  Complex alpha = 0;                 // pencil path only
  double beta = 1;
  CVector eigenvector;               // over B
  std::vector<Complex> point;        // x1..xn of the square system, raw
  std::vector<Complex> refined;      // after Newton, accepted candidates only
  std::vector<double> residuals;     // |f_i| of the overconstrained system, normalized
  double residual = std::numeric_limits<double>::infinity();
  double refined_residual = std::numeric_limits<double>::infinity();
  RootStatus status = RootStatus::rejected;
  bool real_eigenvalue = false;
  std::string note;

  /// Every coordinate real within the eigenvalue tolerance.
  bool real(double tol = 1e-8) const {
    const auto& p = refined.empty() ? point : refined;
    if (p.empty()) return false;
    for (auto z : p)
      if (std::abs(z.imag()) >= tol * (1 + std::abs(z.real()))) return false;
    return true;
  }
};

struct SolveOptions {
  double cond_threshold = 1e8;   // tier switch and leading-coefficient test
  double m11_cond = 1e12;
  bool whole_matrix = false;
  double accept = 1e-4;
  int tries = 3;
  std::uint64_t seed = 1;
  double real_tol = 1e-8;
  double cluster_tol = 1e-6;
  int newton_iters = 3;
  double newton_tol = 1e-12;
  bool force_pencil = false;
};

enum class EigenPath { companion, pencil };

struct RootReport {
  EigenPath path = EigenPath::companion;
  RankBalanceTransform transform;
  double leading_cond = 0;
  bool singular_pencil = false;
  std::size_t finite_real = 0, finite_complex = 0, infinite = 0;
  std::vector<RootCandidate> candidates;

  std::size_t count(RootStatus s) const {
    return static_cast<std::size_t>(std::count_if(candidates.begin(), candidates.end(), [&](const auto& c) { return c.status == s; }));
  }
};

namespace detail {

/// For each unit vector e_i, an integer combination e_i = sum m_j (p_j - p_ref)
/// found by integer row reduction; nullopt when the differences do not
/// generate Z^n.
inline std::optional<std::vector<std::vector<std::int64_t>>> unit_combinations(const std::vector<ExponentVector>& pts,
                                                                                std::size_t ref) {
  const std::size_t n = pts.empty() ? 0 : pts.front().size();
  const std::size_t m = pts.size();
  std::vector<std::vector<Int128>> h(m, std::vector<Int128>(n)), u(m, std::vector<Int128>(m, 0));
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < n; ++i) h[j][i] = pts[j][i] - pts[ref][i];
    u[j][j] = 1;
  }
  auto axpy = [&](std::size_t dst, std::size_t src, Int128 q) {
    for (std::size_t i = 0; i < n; ++i) h[dst][i] -= q * h[src][i];
    for (std::size_t i = 0; i < m; ++i) u[dst][i] -= q * u[src][i];
  };
  auto swap_rows = [&](std::size_t a, std::size_t b) {
    std::swap(h[a], h[b]);
    std::swap(u[a], u[b]);
  };
  try {
    std::size_t row = 0;
    for (std::size_t c = 0; c < n; ++c) {
      if (row >= m) return std::nullopt;
      while (true) {
        std::size_t piv = m;
        for (std::size_t j = row; j < m; ++j)
          if (h[j][c] != 0 && (piv == m || abs(h[j][c]) < abs(h[piv][c]))) piv = j;
        if (piv == m) return std::nullopt;
        swap_rows(row, piv);
        bool done = true;
        for (std::size_t j = row + 1; j < m; ++j) {
          if (h[j][c] == 0) continue;
          axpy(j, row, h[j][c] / h[row][c]);
          done = done && h[j][c] == 0;
        }
        if (done) break;
      }
      if (abs(h[row][c]) != 1) return std::nullopt;
      if (h[row][c] < 0) {
        for (auto& v : h[row]) v = -v;
        for (auto& v : u[row]) v = -v;
      }
      ++row;
    }
    // back substitution to the identity
    for (std::size_t c = n; c-- > 0;)
      for (std::size_t j = 0; j < c; ++j)
        if (h[j][c] != 0) axpy(j, c, h[j][c]);
    std::vector<std::vector<std::int64_t>> out(n, std::vector<std::int64_t>(m));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j) out[i][j] = static_cast<std::int64_t>(u[i][j]);
    return out;
  } catch (const std::exception&) {
    return std::nullopt;  // overflow
  }
}

/// Coordinates from monomial values by ratios val(q + e_i) / val(q).
inline std::optional<std::vector<Complex>> coordinates(const std::vector<ExponentVector>& cols, const CVector& val,
                                                       std::string& note) {
  const std::size_t n = cols.empty() ? 0 : cols.front().size();
  const double big = val.cwiseAbs().maxCoeff();
  const double zero = 1e-14 * big;
  if (!(big > 0)) {
    note = "zero eigenvector";
    return std::nullopt;
  }
  std::map<ExponentVector, Index> where;
  for (std::size_t j = 0; j < cols.size(); ++j) where[cols[j]] = static_cast<Index>(j);
  std::vector<Complex> out(n);
  bool missing = false;
  for (std::size_t i = 0; i < n && !missing; ++i) {
    const auto e = ExponentVector::unit(n, i);
    double best = -1;
    Complex ratio = 0;
    for (const auto& [q2, j2] : where) {  // lexicographic, so ties keep the first pair
      auto it = where.find(q2 + e);
      if (it == where.end()) continue;
      if (std::abs(val(j2)) > best) {
        best = std::abs(val(j2));
        ratio = val(it->second) / val(j2);
      }
    }
    if (best < 0) {
      missing = true;
    } else if (best <= zero) {
      note = "zero denominator";
      return std::nullopt;
    } else {
      out[i] = ratio;
    }
  }
  if (!missing) return out;
  std::size_t ref = 0;
  for (std::size_t j = 0; j < cols.size(); ++j)
    if (std::abs(val(j)) > std::abs(val(ref))) ref = j;
  auto comb = unit_combinations(cols, ref);
  if (!comb) {
    note = "monomials do not generate the lattice";
    return std::nullopt;
  }
  for (std::size_t i = 0; i < n; ++i) {
    Complex x = 1;
    for (std::size_t j = 0; j < cols.size(); ++j) {
      const auto p = (*comb)[i][j];
      if (p == 0) continue;
      if (std::abs(val(j)) <= zero) {
        note = "zero denominator";
        return std::nullopt;
      }
      x *= std::pow(val(j) / val(ref), static_cast<int>(p));
    }
    out[i] = x;
  }
  return out;
}

inline Complex derivative_monomial(const ExponentVector& e, std::span<const Complex> x, std::size_t i) {
  if (e[i] == 0) return 0;
  ExponentVector f = e;
  f[i] -= 1;
  return static_cast<double>(e[i]) * SparsePolynomial::monomial(f, x);
}

inline double max_residual(const std::vector<SparsePolynomial>& polys, std::span<const Complex> x) {
  double r = 0;
  for (const auto& p : polys) r = std::max(r, std::abs(p.eval(x)));
  return r;
}

/// Newton's method on a square system; nullopt when it diverges.
inline std::optional<std::vector<Complex>> newton(const std::vector<SparsePolynomial>& polys, std::vector<Complex> x,
                                                  int iters, double tol) {
  const std::size_t n = x.size();
  const double start = max_residual(polys, x);
  for (int it = 0; it < iters; ++it) {
    CVector f(n);
    CMatrix j(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      f(i) = polys[i].eval(x);
      for (std::size_t c = 0; c < n; ++c) {
        Complex acc = 0;
        for (std::size_t t = 0; t < polys[i].size(); ++t)
          acc += polys[i].coeffs()[t].eval(Complex(0)) * derivative_monomial(polys[i].support()[t], x, c);
        j(i, c) = acc;
      }
    }
    CVector step = j.fullPivLu().solve(f);
    if (!step.allFinite()) return std::nullopt;
    double xn = 0;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] -= step(i);
      xn = std::max(xn, std::abs(x[i]));
    }
    if (step.cwiseAbs().maxCoeff() <= tol * (1 + xn)) break;
  }
  const double end = max_residual(polys, x);
  if (!std::isfinite(end) || end > std::max(start, 1e-14)) return std::nullopt;
  return x;
}

}  // namespace detail

/// Eigenvalues of the Schur complement and the candidate roots read from
/// their eigenvectors; `cols` are the monomials of M's columns.
inline RootReport solve_roots(const OverconstrainedSystem& oc, const std::vector<ExponentVector>& cols,
                               const SchurSystem& schur, const SolveOptions& opt = {}) {
  RootReport res;
  const Index r = schur.r();
  const int d = schur.d();
  struct Raw {
    std::optional<Complex> value;
    Complex alpha;
    double beta;
    CVector vec;  // stacked eigenvector
  };
  std::vector<Raw> raw;

  auto rb = rank_balance(schur.a, opt.tries, opt.seed);
  res.transform = rb.transform;
  res.leading_cond = rb.leading_cond;
  if (!opt.force_pencil && rb.leading_cond <= opt.cond_threshold) {
    res.path = EigenPath::companion;
    for (auto& p : eigen(companion(rb.a, opt.cond_threshold))) {
      if (!p.converged) throw NumericError("eigenvalue iteration did not converge");
      raw.push_back({rb.transform.back(p.value), 0, 1, p.vector});
    }
  } else {
    res.path = EigenPath::pencil;
    res.transform = {};
    auto [c1, c0] = pencil(schur.a);
    auto g = generalized_eigen(c1, c0);
    res.singular_pencil = g.singular_pencil;
    for (auto& p : g.pairs) {
      if (!p.converged) throw NumericError("generalized eigenvalue iteration did not converge");
      std::optional<Complex> v;
      if (!p.infinite()) v = p.value();
      raw.push_back({v, p.alpha, p.beta, p.vector});
    }
  }

  const auto polys = normalized_polys(oc);
  std::vector<SparsePolynomial> square;
  for (const auto& p : oc.original) square.push_back(p.normalized());
  for (const auto& w : raw) {
    RootCandidate c;
    c.alpha = w.alpha;
    c.beta = w.beta;
    if (!w.value) {
      c.status = RootStatus::infinite;
      ++res.infinite;
      res.candidates.push_back(std::move(c));
      continue;
    }
    c.eigenvalue = *w.value;
    c.real_eigenvalue = std::abs(c.eigenvalue.imag()) < opt.real_tol * (1 + std::abs(c.eigenvalue.real()));
    ++(c.real_eigenvalue ? res.finite_real : res.finite_complex);
    // blocks of the stacked vector are powers of the eigenvalue times v1
    Index blk = 0;
    for (Index b = 1; b < d; ++b)
      if (w.vec.segment(b * r, r).norm() > w.vec.segment(blk * r, r).norm()) blk = b;
    c.eigenvector = w.vec.segment(blk * r, r);
    res.candidates.push_back(std::move(c));
  }

  // clusters of nearby finite eigenvalues
  for (std::size_t i = 0; i < res.candidates.size(); ++i) {
    auto& a = res.candidates[i];
    if (a.status == RootStatus::infinite) continue;
    for (std::size_t j = 0; j < res.candidates.size(); ++j) {
      const auto& b = res.candidates[j];
      if (i == j || b.status == RootStatus::infinite) continue;
      if (std::abs(a.eigenvalue - b.eigenvalue) <= opt.cluster_tol * (1 + std::abs(a.eigenvalue))) {
        a.status = RootStatus::multiple;
        a.note = "multiple eigenvalue; coordinates unreliable";
      }
    }
  }

  for (auto& c : res.candidates) {
    if (c.status != RootStatus::rejected) continue;
    const CVector val = schur.expand(c.eigenvector, c.eigenvalue);
    auto xs = detail::coordinates(cols, val, c.note);
    if (!xs) continue;
    std::vector<Complex> local = *xs;  // coordinates of the overconstrained system
    if (oc.mode == Mode::u_resultant) {
      c.point = local;
    } else {
      c.point = local;
      c.point.insert(c.point.begin() + static_cast<std::ptrdiff_t>(oc.hidden_index), c.eigenvalue);
    }
    bool finite = true;
    for (auto z : c.point) finite = finite && std::isfinite(z.real()) && std::isfinite(z.imag());
    if (!finite) {
      c.note = "non-finite coordinates";
      continue;
    }
    c.residual = 0;
    for (const auto& p : polys) {
      c.residuals.push_back(std::abs(p.eval(local, c.eigenvalue)));
      c.residual = std::max(c.residual, c.residuals.back());
    }
    if (!(c.residual < opt.accept)) continue;
    auto refined = detail::newton(square, c.point, opt.newton_iters, opt.newton_tol);
    if (!refined) {
      c.note = "Newton refinement diverged";
      continue;
    }
    c.refined = *refined;
    c.refined_residual = detail::max_residual(square, c.refined);
    c.status = RootStatus::accepted;
  }
  return res;
}

/// Assembly, partition and root finding for a matrix built from `oc`.
struct Pipeline {
  MatrixPolynomial m;
  SchurSystem schur;
  RootReport roots;
};

inline Pipeline run_pipeline(const OverconstrainedSystem& oc, const MatrixDefinition& def, const SolveOptions& opt = {}) {
  Pipeline p;
  p.m = assemble(oc, def);
  p.schur = partition_and_schur(p.m, opt.m11_cond, opt.whole_matrix, opt.cond_threshold);
  p.roots = solve_roots(oc, def.cols, p.schur, opt);
  return p;
}

}  // namespace sparseres
