#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "sparseres/polytope.hpp"
#include "sparseres/subdivision.hpp"
#include "systems.hpp"

using namespace sparseres;

namespace {

using Pts = std::vector<ExponentVector>;

Pts random_points(std::mt19937_64& rng, std::size_t n, std::size_t count, int lo, int hi) {
  std::uniform_int_distribution<int> d(lo, hi);
  Pts out;
  for (std::size_t k = 0; k < count; ++k) {
    ExponentVector e(n);
    for (std::size_t i = 0; i < n; ++i) e[i] = d(rng);
    out.push_back(e);
  }
  return out;
}

std::vector<Support> as_supports(const std::vector<Pts>& v) {
  std::vector<Support> out;
  for (const auto& p : v) out.emplace_back(p);
  return out;
}

Pts dense(std::size_t n, int degree) {
  Pts out;
  ExponentVector e(n);
  for (;;) {
    std::int64_t s = 0;
    for (auto x : e) s += x;
    if (s <= degree) out.push_back(e);
    std::size_t i = 0;
    while (i < n && ++e[i] > degree) e[i++] = 0;
    if (i == n) break;
  }
  return out;
}

Pts scaled(const Pts& a, int mu, const Pts& b, int rho) {
  // points of mu*A + rho*B as a point set (repeated Minkowski sums)
  Pts acc{ExponentVector(a.front().size())};
  for (int k = 0; k < mu; ++k) acc = oracle::msum(acc, a);
  for (int k = 0; k < rho; ++k) acc = oracle::msum(acc, b);
  return acc;
}

}  // namespace

TEST(SupportOf, DropsZeroCoefficients) {
  auto p = support_of(std::vector<std::pair<ExponentVector, Rational>>{
      {{0, 0}, 1}, {{2, 0}, 3}, {{1, 1}, 0}});
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(p.support()[0], (ExponentVector{0, 0}));
  EXPECT_EQ(p.support()[1], (ExponentVector{2, 0}));
  EXPECT_EQ(p.coeffs()[0], CoeffPoly(1));
  EXPECT_EQ(p.coeffs()[1], CoeffPoly(3));
}

TEST(SupportOf, MergesDuplicates) {
  auto p = support_of(std::vector<std::pair<ExponentVector, Rational>>{
      {{1, 0}, 2}, {{0, 1}, 1}, {{1, 0}, Rational(1, 2)}});
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(p.coeff_of({1, 0}), CoeffPoly(Rational(5, 2)));
}

TEST(SupportOf, CancellationIsZeroPolynomial) {
  try {
    support_of(std::vector<std::pair<ExponentVector, Rational>>{{{1, 0}, 2}, {{1, 0}, -2}});
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_STREQ(e.what(), "zero polynomial");
  }
}

TEST(SupportOf, RejectsMixedLengths) {
  EXPECT_THROW(support_of(std::vector<std::pair<ExponentVector, Rational>>{{{1, 0}, 2}, {{1}, 1}}), InputError);
}

TEST(SupportOf, MoleculeEquationsHaveFivePoints) {
  for (const auto& f : systems::molecule(systems::kCyclohexane)) {
    EXPECT_EQ(f.size(), 5u);
    for (const auto& c : f.coeffs()) EXPECT_FALSE(c.is_zero());
  }
  auto f1 = systems::molecule(systems::kSynthetic)[0];
  Support expect{{0, 0, 0}, {0, 0, 2}, {0, 1, 1}, {0, 2, 0}, {0, 2, 2}};
  EXPECT_EQ(f1.support(), expect);
  EXPECT_EQ(f1.coeff_of({0, 1, 1}), CoeffPoly(8));
}

TEST(NewtonPolytope, UnitSquare) {
  auto q = newton_polytope(Support{{0, 0}, {1, 0}, {0, 1}, {1, 1}});
  EXPECT_EQ(q.vertices.size(), 4u);
  EXPECT_EQ(q.dim, 2u);
}

TEST(NewtonPolytope, BoundaryPointExcluded) {
  auto q = newton_polytope(Support{{0, 0}, {2, 0}, {0, 2}, {1, 1}});
  Pts expect{{0, 0}, {0, 2}, {2, 0}};
  EXPECT_EQ(q.vertices, expect);
  EXPECT_EQ(q.dim, 2u);
}

TEST(NewtonPolytope, SinglePoint) {
  auto q = newton_polytope(Support{{3, 1}});
  EXPECT_EQ(q.vertices.size(), 1u);
  EXPECT_EQ(q.dim, 0u);
}

TEST(NewtonPolytope, CollinearPoints) {
  auto q = newton_polytope(Support{{0, 0}, {1, 1}, {2, 2}, {3, 3}});
  Pts expect{{0, 0}, {3, 3}};
  EXPECT_EQ(q.vertices, expect);
  EXPECT_EQ(q.dim, 1u);
}

TEST(NewtonPolytope, MatchesBruteForceOnRandomSets) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    Support s(random_points(rng, 2, 3 + trial % 7, -3, 3));
    auto q = newton_polytope(s);
    for (const auto& p : s) {
      std::vector<oracle::P2> others;
      for (const auto& o : s)
        if (o != p) others.push_back({o[0], o[1]});
      bool vertex = !oracle::in_hull_2d_bruteforce({p[0], p[1]}, others);
      bool listed = std::find(q.vertices.begin(), q.vertices.end(), p) != q.vertices.end();
      EXPECT_EQ(vertex, listed) << p;
    }
    // every support point is a convex combination of the vertices
    for (const auto& p : s) EXPECT_TRUE(in_convex_hull(q.vertices, to_rational(p)));
  }
}

TEST(MinkowskiSum, SegmentsMakeSquare) {
  auto a = newton_polytope(Support{{0, 0}, {1, 0}});
  auto b = newton_polytope(Support{{0, 0}, {0, 1}});
  auto q = minkowski_sum(a, b);
  Pts expect{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  EXPECT_EQ(q.vertices, expect);
  EXPECT_EQ(minkowski_sum(b, a), q);
}

TEST(MinkowskiSum, PointTranslates) {
  auto a = newton_polytope(Support{{0, 0}, {2, 0}, {0, 2}, {1, 1}});
  auto q = minkowski_sum(a, newton_polytope(Support{{5, -1}}));
  Pts expect{{5, -1}, {5, 1}, {7, -1}};
  EXPECT_EQ(q.vertices, expect);
}

TEST(MinkowskiSum, DimensionMismatch) {
  EXPECT_THROW(minkowski_sum(newton_polytope(Support{{0, 0}}), newton_polytope(Support{{0, 0, 0}})), InputError);
}

TEST(MinkowskiSum, MoleculeSumMatchesPairwiseSums) {
  auto polys = systems::molecule(systems::kSynthetic);
  std::vector<Polytope> qs;
  Pts all{ExponentVector(3)};
  for (const auto& f : polys) {
    qs.push_back(newton_polytope(f.support()));
    all = oracle::msum(all, f.support().points());
  }
  auto q = minkowski_sum(qs);
  EXPECT_EQ(q.dim, 3u);
  EXPECT_EQ(q, newton_polytope(all));
  // each summand is a square in a coordinate plane: the sum is the cube [0,4]^3
  EXPECT_EQ(q.vertices.size(), 8u);
  EXPECT_EQ(volume(q), Rational(64));
  EXPECT_EQ(oracle::volume(all), Rational(64));
}

TEST(Hull, VolumeMatchesOracle) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + trial % 2;
    auto pts = random_points(rng, n, 5 + trial % 6, -3, 3);
    Hull h(pts);
    if (!h.full_dimensional()) {
      EXPECT_EQ(oracle::volume(pts), 0);
      continue;
    }
    EXPECT_EQ(h.volume(), oracle::volume(pts)) << "trial " << trial;
  }
}

TEST(Hull, LatticePointsOfShiftedTriangle) {
  Hull h(Pts{{0, 0}, {2, 0}, {0, 2}});
  // closed triangle has 6 lattice points; a small shift moves the hull off
  // the diagonal edge, leaving the 3 points strictly below it
  EXPECT_EQ(h.lattice_points({0, 0}).size(), 6u);
  auto pts = h.lattice_points({Rational(1, 10), Rational(1, 7)});
  Pts expect{{1, 1}};
  EXPECT_EQ(pts, expect);
}

TEST(MixedSubdivision, AxisSegments) {
  std::vector<Support> s{Support{{0, 0}, {1, 0}}, Support{{0, 0}, {0, 1}}};
  auto sub = mixed_subdivision(s, 3);
  ASSERT_EQ(sub.cells.size(), 1u);
  EXPECT_TRUE(sub.cells[0].is_mixed);
  EXPECT_EQ(sub.cells[0].volume, 1);
}

TEST(MixedSubdivision, TwoTriangles) {
  Support tri{{0, 0}, {1, 0}, {0, 1}};
  std::vector<Support> s{tri, tri};
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto sub = mixed_subdivision(s, seed);
    EXPECT_EQ(sub.total_volume(), 2);
    EXPECT_EQ(sub.mixed_cell_volume(), oracle::mixed_volume_ie({tri.points(), tri.points()}));
    EXPECT_EQ(sub.mixed_cell_volume(), 1);
    EXPECT_TRUE(pairwise_disjoint(sub));
  }
}

TEST(MixedSubdivision, MoleculeMixedCellsSumTo16) {
  auto sub = mixed_subdivision(supports_of(systems::molecule(systems::kSynthetic)), 1);
  EXPECT_EQ(sub.mixed_cell_volume(), 16);
  EXPECT_EQ(sub.total_volume(), 64);
  EXPECT_TRUE(pairwise_disjoint(sub));
}

TEST(MixedSubdivision, NonGenericLiftingRejected) {
  // constant lifting: the whole square is one lower face with an ambiguous
  // decomposition
  Support sq{{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  std::vector<Support> s{sq, sq};
  Lifting w;
  w.values = {std::vector<std::int64_t>(4, 1), std::vector<std::int64_t>(4, 1)};
  EXPECT_THROW(mixed_subdivision(s, w), NonGenericError);
}

TEST(MixedSubdivision, DumpListsCells) {
  std::vector<Support> s{Support{{0, 0}, {1, 0}}, Support{{0, 0}, {0, 1}}};
  EXPECT_EQ(mixed_subdivision(s, 3).dump(), "((0,0) (1,0)|(0,0) (0,1)) 1 mixed\n");
}

TEST(MixedSubdivision, ConsistencyOnRandomInstances) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + trial % 2;
    const std::size_t k = n + trial % 2;  // n or n+1 supports
    std::vector<Pts> pts;
    for (std::size_t i = 0; i < k; ++i) pts.push_back(random_points(rng, n, 2 + trial % 4, 0, 2));
    Pts sum{ExponentVector(n)};
    for (const auto& p : pts) sum = oracle::msum(sum, p);
    auto sub = mixed_subdivision(as_supports(pts), trial + 1);
    EXPECT_EQ(sub.total_volume(), oracle::volume(sum)) << "trial " << trial;
    EXPECT_TRUE(pairwise_disjoint(sub));
  }
}

TEST(MixedSubdivision, LocateIsUniqueOnGrid) {
  auto sub = mixed_subdivision(supports_of(systems::molecule(systems::kSynthetic)), 1);
  // generic rational points: every one lies in exactly one cell interior
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) {
      std::vector<Rational> x{Rational(2 * a + 1, 4) + Rational(1, 997), Rational(2 * b + 1, 4) + Rational(1, 1009),
                              Rational(7, 3) + Rational(1, 1013)};
      auto loc = sub.locate(x);
      ASSERT_EQ(loc.where, Location::interior);
      std::size_t count = 0;
      for (const auto& cell : sub.cells) {
        MixedSubdivision one = sub;
        one.cells = {cell};
        count += one.locate(x).where == Location::interior;
      }
      EXPECT_EQ(count, 1u);
    }
  EXPECT_EQ(sub.locate({5, 1, 1}).where, Location::outside);
  EXPECT_EQ(sub.locate({0, 1, 1}).where, Location::boundary);
}

TEST(MixedVolume, Molecule) {
  EXPECT_EQ(mixed_volume(supports_of(systems::molecule(systems::kSynthetic))), 16);
  EXPECT_EQ(mixed_volume(supports_of(systems::molecule(systems::kCyclohexane))), 16);
}

TEST(MixedVolume, UnitSquareTwice) {
  Support sq{{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  EXPECT_EQ(mixed_volume({sq, sq}), 2);
}

TEST(MixedVolume, RequiresNSupports) {
  Support sq{{0, 0}, {1, 0}};
  EXPECT_THROW(mixed_volume({sq}), InputError);
}

TEST(MixedVolume, DegenerateIsZero) {
  Support seg{{0, 0}, {1, 0}};
  EXPECT_EQ(mixed_volume({seg, seg}), 0);
  Support pt{{1, 1}};
  EXPECT_EQ(mixed_volume({pt, Support{{0, 0}, {1, 1}, {2, 0}}}), 0);
}

TEST(MixedVolume, MatchesInclusionExclusion2D) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 80; ++trial) {
    std::vector<Pts> pts{random_points(rng, 2, 1 + trial % 5, -2, 3), random_points(rng, 2, 1 + (trial / 5) % 5, -2, 3)};
    EXPECT_EQ(Rational(mixed_volume(as_supports(pts), trial)), oracle::mixed_volume_ie(pts)) << "trial " << trial;
  }
}

TEST(MixedVolume, MatchesInclusionExclusion3D) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<Pts> pts;
    for (int i = 0; i < 3; ++i) pts.push_back(random_points(rng, 3, 2 + (trial + i) % 3, 0, 2));
    EXPECT_EQ(Rational(mixed_volume(as_supports(pts), trial)), oracle::mixed_volume_ie(pts)) << "trial " << trial;
  }
}

TEST(MixedVolume, Symmetry) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 15; ++trial) {
    std::vector<Pts> pts;
    for (int i = 0; i < 3; ++i) pts.push_back(random_points(rng, 3, 3, 0, 2));
    auto base = mixed_volume(as_supports(pts));
    std::vector<int> perm{0, 1, 2};
    while (std::next_permutation(perm.begin(), perm.end())) {
      std::vector<Pts> q{pts[perm[0]], pts[perm[1]], pts[perm[2]]};
      EXPECT_EQ(mixed_volume(as_supports(q)), base);
    }
  }
}

TEST(MixedVolume, Multilinearity) {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 12; ++trial) {
    Pts a = random_points(rng, 2, 3, 0, 2), b = random_points(rng, 2, 3, 0, 2), c = random_points(rng, 2, 3, 0, 2);
    const int mu = 1 + trial % 2, rho = 1 + (trial / 2) % 2;
    auto lhs = mixed_volume(as_supports({scaled(a, mu, b, rho), c}));
    auto rhs = mu * mixed_volume(as_supports({a, c})) + rho * mixed_volume(as_supports({b, c}));
    EXPECT_EQ(lhs, rhs);
    EXPECT_EQ(Rational(lhs), oracle::mixed_volume_ie({scaled(a, mu, b, rho), c}));
  }
  // one 3D instance
  Pts a = random_points(rng, 3, 3, 0, 1), b = random_points(rng, 3, 3, 0, 1);
  Pts c = dense(3, 1), d = dense(3, 2);
  EXPECT_EQ(mixed_volume(as_supports({scaled(a, 1, b, 1), c, d})),
            mixed_volume(as_supports({a, c, d})) + mixed_volume(as_supports({b, c, d})));
}

TEST(MixedVolume, Diagonal) {
  std::mt19937_64 rng(25);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + trial % 2;
    Pts q = random_points(rng, n, 4 + trial % 3, 0, 3);
    std::vector<Pts> pts(n, q);
    Rational expect = oracle::volume(q) * (n == 2 ? 2 : 6);
    EXPECT_EQ(Rational(mixed_volume(as_supports(pts))), expect);
  }
}

TEST(MixedVolume, TranslationInvariance) {
  std::mt19937_64 rng(26);
  for (int trial = 0; trial < 15; ++trial) {
    std::vector<Support> s;
    for (int i = 0; i < 3; ++i) s.emplace_back(random_points(rng, 3, 4, 0, 2));
    auto base = mixed_volume(s);
    EXPECT_GE(base, 0);
    s[trial % 3] = translate(s[trial % 3], ExponentVector{trial - 7, 3, -2});
    EXPECT_EQ(mixed_volume(s), base);
  }
}

TEST(MixedVolume, BezoutForDenseSupports) {
  for (int d1 = 1; d1 <= 3; ++d1)
    for (int d2 = 1; d2 <= 3; ++d2) {
      EXPECT_EQ(mixed_volume(as_supports({dense(2, d1), dense(2, d2)})), d1 * d2);
      for (int d3 = 1; d3 <= 2; ++d3)
        EXPECT_EQ(mixed_volume(as_supports({dense(3, d1), dense(3, d2), dense(3, d3)})), d1 * d2 * d3);
    }
}

TEST(MvDeficient, MoleculeWithLinearForm) {
  auto s = supports_of(systems::molecule(systems::kSynthetic));
  s.insert(s.begin(), systems::linear_support(3));
  auto mv = mv_deficient(s);
  EXPECT_EQ(mv.per_poly, (std::vector<std::int64_t>{16, 12, 12, 12}));
  EXPECT_EQ(mv.degree, 52);
}

TEST(MvDeficient, MoleculeHiddenX3) {
  std::vector<Support> s;
  for (const auto& f : systems::molecule(systems::kCyclohexane)) s.push_back(systems::hide(f.support(), 2));
  auto mv = mv_deficient(s);
  EXPECT_EQ(mv.per_poly, (std::vector<std::int64_t>{4, 4, 4}));
  EXPECT_EQ(mv.degree, 12);
}

TEST(MvDeficient, SegmentsInOneVariable) {
  Support seg{{1}, {4}};
  auto mv = mv_deficient({seg, seg});
  EXPECT_EQ(mv.per_poly, (std::vector<std::int64_t>{3, 3}));
  EXPECT_EQ(mv.degree, 6);
}

TEST(MvDeficient, RequiresNPlusOne) {
  Support seg{{0}, {1}};
  EXPECT_THROW(mv_deficient({seg}), InputError);
}
