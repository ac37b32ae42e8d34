#pragma once

// Dense floating-point kernels: LU with complete pivoting, condition
// estimates of leading blocks, two-tier solves, and eigenproblems through
// LAPACK (dgeev / dggev).

#include <lapacke.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <vector>

#include "sparseres/arith.hpp"
#include "sparseres/error.hpp"

namespace sparseres {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Index = Eigen::Index;

inline double inf_norm(const Matrix& a) { return a.size() ? a.cwiseAbs().rowwise().sum().maxCoeff() : 0.0; }
inline double inf_norm(const CMatrix& a) { return a.size() ? a.cwiseAbs().rowwise().sum().maxCoeff() : 0.0; }

/// P A Q = L U with complete pivoting. row_perm[k] is the row of A moved to
/// position k, col_perm likewise. Elimination stops at the first exactly
/// zero pivot; `rank` is the number of pivots taken.
struct LUFactorization {
  Matrix a;   // the factored matrix
  Matrix lu;  // unit-lower L below the diagonal, U on and above
  std::vector<Index> row_perm, col_perm;
  Index rank = 0;

  Index size() const { return a.rows(); }
  bool singular() const { return rank < size(); }

  /// A with rows and columns permuted into pivot order.
  Matrix permuted() const {
    Matrix p(size(), size());
    for (Index i = 0; i < size(); ++i)
      for (Index j = 0; j < size(); ++j) p(i, j) = a(row_perm[i], col_perm[j]);
    return p;
  }

  /// Infinity-norm condition number of the leading k x k block of P A Q;
  /// infinite if that block contains a zero pivot.
  double cond_leading(Index k) const {
    if (k == 0) return 1.0;
    if (k > rank) return std::numeric_limits<double>::infinity();
    Matrix block(k, k);
    for (Index i = 0; i < k; ++i)
      for (Index j = 0; j < k; ++j) block(i, j) = a(row_perm[i], col_perm[j]);
    // the block equals L_k U_k, so its inverse is two triangular solves
    Matrix inv = lu.topLeftCorner(k, k).triangularView<Eigen::UnitLower>().solve(Matrix::Identity(k, k));
    inv = lu.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(inv);
    return std::max(1.0, inf_norm(block) * inf_norm(inv));
  }

  double cond() const { return cond_leading(size()); }

  /// Solves A X = B with the factors (no refinement).
  Matrix solve(const Matrix& b) const {
    if (singular()) throw NumericError("solve with a singular factorization");
    const Index n = size();
    Matrix pb(n, b.cols());
    for (Index i = 0; i < n; ++i) pb.row(i) = b.row(row_perm[i]);
    Matrix y = lu.triangularView<Eigen::UnitLower>().solve(pb);
    y = lu.triangularView<Eigen::Upper>().solve(y);
    Matrix x(n, b.cols());
    for (Index j = 0; j < n; ++j) x.row(col_perm[j]) = y.row(j);
    return x;
  }
};

inline LUFactorization lu_col_pivot(const Matrix& m) {
  if (m.rows() != m.cols()) throw NumericError("LU of a non-square matrix");
  LUFactorization f;
  f.a = m;
  f.lu = m;
  const Index n = m.rows();
  f.row_perm.resize(n);
  f.col_perm.resize(n);
  std::iota(f.row_perm.begin(), f.row_perm.end(), 0);
  std::iota(f.col_perm.begin(), f.col_perm.end(), 0);
  Matrix& lu = f.lu;
  for (Index k = 0; k < n; ++k) {
    Index pr = k, pc = k;
    double best = 0;
    for (Index j = k; j < n; ++j)
      for (Index i = k; i < n; ++i)
        if (std::abs(lu(i, j)) > best) {
          best = std::abs(lu(i, j));
          pr = i;
          pc = j;
        }
    if (best == 0) break;
    lu.row(k).swap(lu.row(pr));
    lu.col(k).swap(lu.col(pc));
    std::swap(f.row_perm[k], f.row_perm[pr]);
    std::swap(f.col_perm[k], f.col_perm[pc]);
    const double piv = lu(k, k);
    for (Index i = k + 1; i < n; ++i) lu(i, k) /= piv;
    if (k + 1 < n)
      lu.bottomRightCorner(n - k - 1, n - k - 1).noalias() -=
          lu.col(k).tail(n - k - 1) * lu.row(k).tail(n - k - 1);
    f.rank = k + 1;
  }
  return f;
}

/// Pivot order of complete-pivoting elimination on a rectangular matrix:
/// rows[k], cols[k] is the k-th pivot; `rank` pivots were nonzero.
struct PivotOrder {
  std::vector<Index> rows, cols;
  Index rank = 0;
};

inline PivotOrder complete_pivot_order(Matrix w) {
  PivotOrder out;
  const Index m = w.rows(), n = w.cols();
  out.rows.resize(m);
  out.cols.resize(n);
  std::iota(out.rows.begin(), out.rows.end(), 0);
  std::iota(out.cols.begin(), out.cols.end(), 0);
  for (Index k = 0; k < std::min(m, n); ++k) {
    Index pr = k, pc = k;
    double best = 0;
    for (Index j = k; j < n; ++j)
      for (Index i = k; i < m; ++i)
        if (std::abs(w(i, j)) > best) {
          best = std::abs(w(i, j));
          pr = i;
          pc = j;
        }
    if (best == 0) break;
    w.row(k).swap(w.row(pr));
    w.col(k).swap(w.col(pc));
    std::swap(out.rows[k], out.rows[pr]);
    std::swap(out.cols[k], out.cols[pc]);
    for (Index i = k + 1; i < m; ++i) {
      const double l = w(i, k) / w(k, k);
      w.row(i).tail(n - k) -= l * w.row(k).tail(n - k);
    }
    out.rank = k + 1;
  }
  return out;
}

enum class Tier { fast, refined, automatic };

struct SolveResult {
  Matrix x;
  Tier used = Tier::fast;
  /// Relative forward-error estimate (refined tier only, else NaN).
  double forward_error = std::numeric_limits<double>::quiet_NaN();
};

/// Solves A X = B. `automatic` picks the refined tier when cond(A) exceeds
/// `cond_threshold`.
inline SolveResult solve_tiered(const LUFactorization& f, const Matrix& b, Tier tier = Tier::automatic,
                                double cond_threshold = 1e8) {
  if (f.singular()) throw NumericError("solve with a singular factorization");
  double kappa = 0;
  if (tier == Tier::automatic) {
    kappa = f.cond();
    tier = kappa > cond_threshold ? Tier::refined : Tier::fast;
  }
  SolveResult out;
  out.x = f.solve(b);
  out.used = tier;
  if (tier == Tier::fast) return out;
  if (kappa == 0) kappa = f.cond();

  using LMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  const LMatrix al = f.a.cast<long double>();
  const LMatrix bl = b.cast<long double>();
  const double eps = std::numeric_limits<double>::epsilon();
  double last = std::numeric_limits<double>::infinity();
  double correction = 0;
  Matrix r;
  for (int it = 0; it < 10; ++it) {
    r = (bl - al * out.x.cast<long double>()).cast<double>();
    Matrix d = f.solve(r);
    out.x += d;
    const double xn = out.x.cwiseAbs().maxCoeff();
    correction = xn > 0 ? d.cwiseAbs().maxCoeff() / xn : 0;
    if (correction <= eps || correction > 0.5 * last) break;
    last = correction;
  }
  r = (bl - al * out.x.cast<long double>()).cast<double>();
  const double denom = inf_norm(f.a) * out.x.cwiseAbs().maxCoeff();
  out.forward_error = correction + (denom > 0 ? kappa * r.cwiseAbs().maxCoeff() / denom : 0);
  return out;
}

struct EigenPair {
  Complex value;
  CVector vector;  // unit 2-norm
  bool converged = true;
};

namespace detail {

/// LAPACK packs complex-conjugate eigenvector pairs into two real columns.
inline CVector unpack_vector(const std::vector<double>& v, Index n, Index j, double imag, bool second) {
  CVector out(n);
  for (Index i = 0; i < n; ++i) {
    if (imag == 0) {
      out(i) = v[i + j * n];
    } else {
      const Index base = second ? j - 1 : j;
      Complex z(v[i + base * n], v[i + (base + 1) * n]);
      out(i) = second ? std::conj(z) : z;
    }
  }
  const double nrm = out.norm();
  if (nrm > 0) out /= nrm;
  return out;
}

inline std::vector<double> col_major(const Matrix& m) { return std::vector<double>(m.data(), m.data() + m.size()); }

}  // namespace detail

/// All eigenpairs of a real square matrix. Eigenvalues that LAPACK did not
/// converge are returned with converged = false and no vector.
inline std::vector<EigenPair> eigen(const Matrix& c) {
  if (c.rows() != c.cols()) throw NumericError("eigen of a non-square matrix");
  const Index n = c.rows();
  if (n == 0) return {};
  auto a = detail::col_major(c);
  std::vector<double> wr(n), wi(n), vr(n * n);
  lapack_int info = LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'V', static_cast<lapack_int>(n), a.data(),
                                  static_cast<lapack_int>(n), wr.data(), wi.data(), nullptr, 1, vr.data(),
                                  static_cast<lapack_int>(n));
  if (info < 0) throw NumericError("dgeev: illegal argument");
  std::vector<EigenPair> out(n);
  if (info > 0) {
    // only wr/wi[info..n) are valid and no vectors were computed
    for (Index j = 0; j < n; ++j) {
      out[j].converged = false;
      if (j >= info) out[j].value = Complex(wr[j], wi[j]);
    }
    return out;
  }
  for (Index j = 0; j < n; ++j) {
    out[j].value = Complex(wr[j], wi[j]);
    const bool second = wi[j] < 0;  // LAPACK lists the positive member first
    out[j].vector = detail::unpack_vector(vr, n, j, wi[j], second);
  }
  return out;
}

struct GeneralizedPair {
  Complex alpha;
  double beta = 0;
  CVector vector;  // unit 2-norm
  bool converged = true;

  /// beta small relative to alpha: an eigenvalue at infinity.
  bool infinite(double tol = 1e-10) const { return std::abs(beta) <= tol * std::abs(alpha); }
  Complex value() const { return alpha / beta; }
};

struct GeneralizedResult {
  std::vector<GeneralizedPair> pairs;
  /// Some pair has alpha = beta = 0 to machine precision: det(C1 x + C0)
  /// vanishes identically.
  bool singular_pencil = false;
};

/// Pairs (alpha, beta) with (beta C0 + alpha C1) v = 0, i.e. eigenvalues
/// x = alpha / beta of the pencil C1 x + C0.
inline GeneralizedResult generalized_eigen(const Matrix& c1, const Matrix& c0) {
  if (c1.rows() != c1.cols() || c0.rows() != c0.cols() || c1.rows() != c0.rows())
    throw NumericError("generalized_eigen: shape mismatch");
  const Index n = c1.rows();
  GeneralizedResult res;
  if (n == 0) return res;
  auto a = detail::col_major(c0);
  auto b = detail::col_major(-c1);
  std::vector<double> ar(n), ai(n), be(n), vr(n * n);
  lapack_int info = LAPACKE_dggev(LAPACK_COL_MAJOR, 'N', 'V', static_cast<lapack_int>(n), a.data(),
                                  static_cast<lapack_int>(n), b.data(), static_cast<lapack_int>(n), ar.data(), ai.data(),
                                  be.data(), nullptr, 1, vr.data(), static_cast<lapack_int>(n));
  if (info < 0) throw NumericError("dggev: illegal argument");
  res.pairs.resize(n);
  if (info > 0) {
    for (auto& p : res.pairs) p.converged = false;
    return res;
  }
  const double eps = std::numeric_limits<double>::epsilon();
  const double tol_a = eps * n * std::max(inf_norm(c1), 1e-300);
  const double tol_b = eps * n * std::max(inf_norm(c0), 1e-300);
  for (Index j = 0; j < n; ++j) {
    auto& p = res.pairs[j];
    p.alpha = Complex(ar[j], ai[j]);
    p.beta = be[j];
    const bool second = ai[j] < 0;
    p.vector = detail::unpack_vector(vr, n, j, ai[j], second);
    // alpha and beta come out scaled like ||C1|| and ||C0||
    if (std::abs(p.alpha) <= tol_a && std::abs(p.beta) <= tol_b) res.singular_pencil = true;
  }
  return res;
}

/// Smallest singular value of a complex matrix.
inline double sigma_min(const CMatrix& a) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<CMatrix> svd(a);
  return svd.singularValues().minCoeff();
}

inline Matrix to_matrix(const std::vector<std::vector<Rational>>& q) {
  Matrix m(static_cast<Index>(q.size()), q.empty() ? 0 : static_cast<Index>(q[0].size()));
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) m(i, j) = to_double(q[i][j]);
  return m;
}

}  // namespace sparseres
