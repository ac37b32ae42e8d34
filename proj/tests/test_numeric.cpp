#include <gtest/gtest.h>

#include <random>

#include "sparseres/numeric.hpp"

using namespace sparseres;

namespace {

Matrix random_matrix(std::mt19937_64& rng, Index n, Index m) {
  std::uniform_real_distribution<double> d(-1, 1);
  Matrix a(n, m);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < m; ++j) a(i, j) = d(rng);
  return a;
}

Matrix companion_of(const std::vector<double>& monic_low) {
  // x^d + c_{d-1} x^{d-1} + ... + c_0
  const Index d = static_cast<Index>(monic_low.size());
  Matrix c = Matrix::Zero(d, d);
  for (Index i = 0; i + 1 < d; ++i) c(i, i + 1) = 1;
  for (Index j = 0; j < d; ++j) c(d - 1, j) = -monic_low[j];
  return c;
}

std::vector<double> sorted_real(const std::vector<Complex>& z) {
  std::vector<double> r;
  for (auto v : z) r.push_back(v.real());
  std::sort(r.begin(), r.end());
  return r;
}

}  // namespace

TEST(LU, IdentityHasUnitCondition) {
  auto f = lu_col_pivot(Matrix::Identity(6, 6));
  EXPECT_EQ(f.rank, 6);
  EXPECT_DOUBLE_EQ(f.cond(), 1.0);
}

TEST(LU, DiagonalConditioning) {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = 1;
  a(1, 1) = 1e-12;
  auto f = lu_col_pivot(a);
  EXPECT_NEAR(f.cond() / 1e12, 1.0, 1e-9);
  EXPECT_GT(f.cond(), 1e8);
  EXPECT_DOUBLE_EQ(f.cond_leading(1), 1.0);
}

TEST(LU, ResidualOnRandomMatrices) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 5; ++trial) {
    Matrix a = random_matrix(rng, 50, 50);
    auto f = lu_col_pivot(a);
    ASSERT_EQ(f.rank, 50);
    Matrix l = f.lu.triangularView<Eigen::UnitLower>();
    Matrix u = f.lu.triangularView<Eigen::Upper>();
    const double rel = inf_norm(Matrix(f.permuted() - l * u)) / inf_norm(a);
    EXPECT_LE(rel, 1e-12);
    EXPECT_LE(rel, 50 * std::numeric_limits<double>::epsilon() * 10);
  }
}

TEST(LU, RankDeficiency) {
  std::mt19937_64 rng(2);
  Matrix b = random_matrix(rng, 5, 2);
  Matrix a = Matrix::Zero(5, 5);
  a.leftCols(2) = b;  // rank 2, exact zeros elsewhere
  auto f = lu_col_pivot(a);
  EXPECT_EQ(f.rank, 2);
  EXPECT_TRUE(f.singular());
  EXPECT_TRUE(std::isinf(f.cond()));
  EXPECT_THROW(f.solve(Matrix::Identity(5, 1)), NumericError);
}

TEST(LU, PivotOrderPutsLargestFirst) {
  Matrix a(3, 3);
  a << 1, 2, 3, 4, 50, 6, 7, 8, 9;
  auto f = lu_col_pivot(a);
  EXPECT_EQ(f.row_perm[0], 1);
  EXPECT_EQ(f.col_perm[0], 1);
}

TEST(Solve, IdentityReturnsRightHandSide) {
  std::mt19937_64 rng(3);
  Matrix b = random_matrix(rng, 4, 3);
  auto f = lu_col_pivot(Matrix::Identity(4, 4));
  for (Tier t : {Tier::fast, Tier::refined, Tier::automatic}) EXPECT_LE((solve_tiered(f, b, t).x - b).norm(), 1e-15);
}

TEST(Solve, HilbertRefined) {
  const Index n = 8;
  Matrix h(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) h(i, j) = 1.0 / static_cast<double>(i + j + 1);
  std::mt19937_64 rng(4);
  // b from a random solution of modest size: for an arbitrary b the
  // solution has norm ~1e9 and rounding it to doubles alone leaves a
  // residual far above 1e-10 |b|
  Matrix x_true = random_matrix(rng, n, 1);
  Matrix b = h * x_true;
  auto f = lu_col_pivot(h);
  auto r = solve_tiered(f, b, Tier::refined);
  auto fast = solve_tiered(f, b, Tier::fast);
  EXPECT_EQ(r.used, Tier::refined);
  EXPECT_LE((h * r.x - b).norm(), 1e-10 * b.norm());
  EXPECT_LE((r.x - x_true).norm(), (fast.x - x_true).norm());
  EXPECT_TRUE(std::isfinite(r.forward_error));
  EXPECT_GE(r.forward_error, (r.x - x_true).cwiseAbs().maxCoeff() / x_true.cwiseAbs().maxCoeff());
}

TEST(Solve, AutomaticTierFollowsThreshold) {
  Matrix a = Matrix::Identity(3, 3);
  a(2, 2) = 1e-10;
  auto f = lu_col_pivot(a);
  Matrix b = Matrix::Ones(3, 1);
  EXPECT_EQ(solve_tiered(f, b, Tier::automatic, 1e8).used, Tier::refined);
  EXPECT_EQ(solve_tiered(f, b, Tier::automatic, 1e12).used, Tier::fast);
  EXPECT_TRUE(std::isnan(solve_tiered(f, b, Tier::fast).forward_error));
}

TEST(Eigen, Diagonal) {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = 2;
  a(1, 1) = 3;
  auto e = eigen(a);
  std::vector<Complex> v{e[0].value, e[1].value};
  EXPECT_EQ(sorted_real(v), (std::vector<double>{2, 3}));
}

TEST(Eigen, CompanionOfQuadratic) {
  auto e = eigen(companion_of({2, -3}));
  std::vector<Complex> v{e[0].value, e[1].value};
  auto r = sorted_real(v);
  EXPECT_NEAR(r[0], 1, 1e-12);
  EXPECT_NEAR(r[1], 2, 1e-12);
}

TEST(Eigen, ResidualsAndUnitVectors) {
  std::mt19937_64 rng(5);
  Matrix c = random_matrix(rng, 30, 30);
  auto e = eigen(c);
  ASSERT_EQ(e.size(), 30u);
  CMatrix cc = c.cast<Complex>();
  int complex_count = 0;
  for (const auto& p : e) {
    ASSERT_TRUE(p.converged);
    EXPECT_NEAR(p.vector.norm(), 1.0, 1e-12);
    EXPECT_LE((cc * p.vector - p.value * p.vector).norm(), 1e-8 * inf_norm(c));
    complex_count += p.value.imag() != 0;
  }
  EXPECT_EQ(complex_count % 2, 0);
}

TEST(Eigen, TriangularDiagonal) {
  std::mt19937_64 rng(6);
  Matrix t = random_matrix(rng, 8, 8).triangularView<Eigen::Upper>();
  for (Index i = 0; i < 8; ++i) t(i, i) = static_cast<double>(i + 1);
  auto e = eigen(t);
  std::vector<Complex> v;
  for (auto& p : e) v.push_back(p.value);
  auto r = sorted_real(v);
  for (Index i = 0; i < 8; ++i) EXPECT_NEAR(r[i], static_cast<double>(i + 1), 1e-12);
}

TEST(GeneralizedEigen, IdentityLeadingReducesToStandard) {
  std::mt19937_64 rng(7);
  Matrix c0 = random_matrix(rng, 10, 10);
  auto g = generalized_eigen(Matrix::Identity(10, 10), c0);
  auto e = eigen(-c0);
  EXPECT_FALSE(g.singular_pencil);
  for (const auto& p : g.pairs) {
    ASSERT_FALSE(p.infinite());
    double best = 1e300;
    for (const auto& q : e) best = std::min(best, std::abs(p.value() - q.value));
    EXPECT_LE(best, 1e-8);
    // residual of the pencil
    CMatrix m = p.beta * c0.cast<Complex>() + p.alpha * Matrix::Identity(10, 10).cast<Complex>();
    EXPECT_LE((m * p.vector).norm(), 1e-10 * (std::abs(p.alpha) + std::abs(p.beta)) * 10);
  }
}

TEST(GeneralizedEigen, OneInfiniteEigenvalue) {
  Matrix c1 = Matrix::Zero(2, 2), c0 = Matrix::Identity(2, 2);
  c1(0, 0) = 1;
  auto g = generalized_eigen(c1, c0);
  int finite = 0, infinite = 0;
  for (const auto& p : g.pairs) {
    if (p.infinite()) {
      ++infinite;
    } else {
      ++finite;
      EXPECT_NEAR(p.value().real(), -1.0, 1e-14);
    }
  }
  EXPECT_EQ(finite, 1);
  EXPECT_EQ(infinite, 1);
  EXPECT_FALSE(g.singular_pencil);
}

TEST(GeneralizedEigen, SingularPencilFlagged) {
  Matrix c1 = Matrix::Zero(2, 2), c0 = Matrix::Zero(2, 2);
  c1(0, 0) = 1;
  c0(0, 0) = 2;  // second row and column identically zero
  EXPECT_TRUE(generalized_eigen(c1, c0).singular_pencil);
}

TEST(SigmaMin, Diagonal) {
  CMatrix a = CMatrix::Zero(3, 3);
  a(0, 0) = 3;
  a(1, 1) = Complex(0, 2);
  a(2, 2) = 0.5;
  EXPECT_NEAR(sigma_min(a), 0.5, 1e-15);
}
