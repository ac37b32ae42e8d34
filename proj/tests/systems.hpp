#pragma once

// Polynomial systems shared by several test binaries.

#include <array>
#include <vector>

#include "sparseres/polynomial.hpp"

namespace systems {

using sparseres::ExponentVector;
using sparseres::Rational;
using sparseres::SparsePolynomial;
using sparseres::Support;

using Beta = std::array<std::array<long, 5>, 3>;

/// Cyclic six-atom molecule equations:
///   f_i = b_i1 + b_i2 x_j^2 + b_i3 x_k^2 + b_i4 x_j^2 x_k^2 + b_i5 x_j x_k
/// with (j, k) = (2,3), (1,3), (1,2) for i = 1, 2, 3.
inline std::vector<SparsePolynomial> molecule(const Beta& b) {
  const std::array<std::array<int, 2>, 3> jk{{{1, 2}, {0, 2}, {0, 1}}};
  std::vector<SparsePolynomial> out;
  for (int i = 0; i < 3; ++i) {
    auto mono = [&](int pj, int pk) {
      ExponentVector e(3);
      e[jk[i][0]] = pj;
      e[jk[i][1]] = pk;
      return e;
    };
    out.push_back(sparseres::support_of(std::vector<std::pair<ExponentVector, Rational>>{
        {mono(0, 0), b[i][0]},
        {mono(2, 0), b[i][1]},
        {mono(0, 2), b[i][2]},
        {mono(2, 2), b[i][3]},
        {mono(1, 1), b[i][4]}}));
  }
  return out;
}

inline const Beta kSynthetic{{{-9, -1, -1, 3, 8}, {-9, -1, -1, 3, 8}, {-9, -1, -1, 3, 8}}};
inline const Beta kCyclohexane{{{-310, 959, 774, 1313, 1389}, {-365, 755, 917, 1269, 1451}, {-413, 837, 838, 1352, 1655}}};
inline const Beta kGeneric{{{-13, -1, -1, -1, 24}, {-13, -1, -1, -1, 24}, {-13, -1, -1, -1, 24}}};

/// Support of a linear form c0 + c1 x1 + ... + cn xn.
inline Support linear_support(std::size_t n) {
  std::vector<ExponentVector> pts{ExponentVector(n)};
  for (std::size_t i = 0; i < n; ++i) pts.push_back(ExponentVector::unit(n, i));
  return Support(pts);
}

/// Drops coordinate k from every exponent (the variable becomes a coefficient).
inline Support hide(const Support& s, std::size_t k) {
  std::vector<ExponentVector> pts;
  for (const auto& e : s) {
    ExponentVector r(e.size() - 1);
    for (std::size_t i = 0, t = 0; i < e.size(); ++i)
      if (i != k) r[t++] = e[i];
    pts.push_back(r);
  }
  return Support(pts);
}

}  // namespace systems

namespace systems {

/// f0 = x0 + c1 x1 + ... + cn xn, x0 symbolic.
inline SparsePolynomial u_polynomial(const std::vector<long>& c) {
  const std::size_t n = c.size();
  sparseres::TermList t{{ExponentVector(n), sparseres::CoeffPoly::x0()}};
  for (std::size_t i = 0; i < n; ++i) t.emplace_back(ExponentVector::unit(n, i), sparseres::CoeffPoly(Rational(c[i])));
  return sparseres::support_of(t);
}

/// Univariate polynomial from coefficients, index = degree.
inline SparsePolynomial univariate(const std::vector<Rational>& c) {
  std::vector<std::pair<ExponentVector, Rational>> t;
  for (std::size_t k = 0; k < c.size(); ++k) t.push_back({ExponentVector{static_cast<std::int64_t>(k)}, c[k]});
  return sparseres::support_of(t);
}

/// Affine linear polynomial c0 + c1 x1 + ... + cn xn.
inline SparsePolynomial linear(const std::vector<Rational>& c) {
  const std::size_t n = c.size() - 1;
  std::vector<std::pair<ExponentVector, Rational>> t{{ExponentVector(n), c[0]}};
  for (std::size_t i = 0; i < n; ++i) t.push_back({ExponentVector::unit(n, i), c[i + 1]});
  return sparseres::support_of(t);
}

}  // namespace systems
