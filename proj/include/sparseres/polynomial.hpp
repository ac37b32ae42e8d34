#pragma once

// Exponent vectors, supports and sparse Laurent polynomials.

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sparseres/arith.hpp"
#include "sparseres/error.hpp"

namespace sparseres {

/// Exponent vector of a Laurent monomial x^e. Ordered lexicographically.
class ExponentVector {
 public:
  using value_type = std::int64_t;

  ExponentVector() = default;
  explicit ExponentVector(std::size_t n) : e_(n, 0) {}
  explicit ExponentVector(std::vector<value_type> e) : e_(std::move(e)) {}
  ExponentVector(std::initializer_list<value_type> e) : e_(e) {}

  static ExponentVector unit(std::size_t n, std::size_t i) {
    ExponentVector u(n);
    u.e_[i] = 1;
    return u;
  }

  std::size_t size() const { return e_.size(); }
  value_type operator[](std::size_t i) const { return e_[i]; }
  value_type& operator[](std::size_t i) { return e_[i]; }
  const std::vector<value_type>& values() const { return e_; }
  auto begin() const { return e_.begin(); }
  auto end() const { return e_.end(); }

  ExponentVector& operator+=(const ExponentVector& o) {
    check_same(o);
    for (std::size_t i = 0; i < e_.size(); ++i) e_[i] += o.e_[i];
    return *this;
  }
  ExponentVector& operator-=(const ExponentVector& o) {
    check_same(o);
    for (std::size_t i = 0; i < e_.size(); ++i) e_[i] -= o.e_[i];
    return *this;
  }
  friend ExponentVector operator+(ExponentVector a, const ExponentVector& b) { return a += b; }
  friend ExponentVector operator-(ExponentVector a, const ExponentVector& b) { return a -= b; }

  friend auto operator<=>(const ExponentVector&, const ExponentVector&) = default;
  friend bool operator==(const ExponentVector&, const ExponentVector&) = default;

  std::string str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < e_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(e_[i]);
    }
    return s + ")";
  }
  friend std::ostream& operator<<(std::ostream& os, const ExponentVector& e) { return os << e.str(); }

 private:
  void check_same(const ExponentVector& o) const {
    if (o.e_.size() != e_.size()) throw InputError("exponent vectors of different length");
  }
  std::vector<value_type> e_;
};

/// Finite nonempty set of exponent vectors in canonical (sorted) order.
class Support {
 public:
  Support() = default;
  explicit Support(std::vector<ExponentVector> points) : pts_(std::move(points)) {
    if (pts_.empty()) throw InputError("empty support");
    const std::size_t n = pts_.front().size();
    for (const auto& p : pts_)
      if (p.size() != n) throw InputError("support points of different dimension");
    std::sort(pts_.begin(), pts_.end());
    pts_.erase(std::unique(pts_.begin(), pts_.end()), pts_.end());
  }
  Support(std::initializer_list<ExponentVector> points)
      : Support(std::vector<ExponentVector>(points)) {}

  std::size_t size() const { return pts_.size(); }
  std::size_t dim() const { return pts_.empty() ? 0 : pts_.front().size(); }
  const ExponentVector& operator[](std::size_t i) const { return pts_[i]; }
  const std::vector<ExponentVector>& points() const { return pts_; }
  auto begin() const { return pts_.begin(); }
  auto end() const { return pts_.end(); }
  bool contains(const ExponentVector& e) const { return std::binary_search(pts_.begin(), pts_.end(), e); }
  /// Position of e in canonical order, or size() if absent.
  std::size_t index_of(const ExponentVector& e) const {
    auto it = std::lower_bound(pts_.begin(), pts_.end(), e);
    return (it != pts_.end() && *it == e) ? static_cast<std::size_t>(it - pts_.begin()) : pts_.size();
  }

  friend bool operator==(const Support&, const Support&) = default;

 private:
  std::vector<ExponentVector> pts_;
};

/// Translate every point of a support.
inline Support translate(const Support& s, const ExponentVector& by) {
  std::vector<ExponentVector> out;
  out.reserve(s.size());
  for (const auto& p : s) out.push_back(p + by);
  return Support(std::move(out));
}

/// Laurent polynomial with one nonzero coefficient per support point.
/// Coefficients live in Q[x0]; ordinary input has constant coefficients.
class SparsePolynomial {
 public:
  SparsePolynomial() = default;
  SparsePolynomial(Support support, std::vector<CoeffPoly> coeffs)
      : support_(std::move(support)), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != support_.size()) throw InputError("coefficient count differs from support size");
    for (const auto& c : coeffs_)
      if (c.is_zero()) throw InputError("zero coefficient stored in a support");
  }

  const Support& support() const { return support_; }
  const std::vector<CoeffPoly>& coeffs() const { return coeffs_; }
  std::size_t dim() const { return support_.dim(); }
  std::size_t size() const { return support_.size(); }

  /// Highest power of x0 among the coefficients.
  int x0_degree() const {
    int d = 0;
    for (const auto& c : coeffs_) d = std::max(d, c.degree());
    return d;
  }

  CoeffPoly coeff_of(const ExponentVector& e) const {
    auto i = support_.index_of(e);
    return i < support_.size() ? coeffs_[i] : CoeffPoly{};
  }

  /// Value at a complex point; x0 is used only when coefficients depend on it.
  Complex eval(std::span<const Complex> x, Complex x0 = 0) const {
    Complex acc = 0;
    for (std::size_t j = 0; j < support_.size(); ++j) acc += coeffs_[j].eval(x0) * monomial(support_[j], x);
    return acc;
  }

  static Complex monomial(const ExponentVector& e, std::span<const Complex> x) {
    Complex v = 1;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] != 0) v *= std::pow(x[i], static_cast<int>(e[i]));
    }
    return v;
  }

  /// Same polynomial with every coefficient divided by the largest
  /// coefficient magnitude, so the max-norm of the coefficients is 1.
  SparsePolynomial normalized() const {
    Rational m = 0;
    for (const auto& c : coeffs_) m = std::max(m, c.max_abs());
    std::vector<CoeffPoly> out;
    out.reserve(coeffs_.size());
    for (const auto& c : coeffs_) {
      std::vector<Rational> v = c.coeffs();
      for (auto& x : v) x /= m;
      out.emplace_back(std::move(v));
    }
    return SparsePolynomial(support_, std::move(out));
  }

  friend bool operator==(const SparsePolynomial&, const SparsePolynomial&) = default;

 private:
  Support support_;
  std::vector<CoeffPoly> coeffs_;
};

/// Term list as read from input: (exponent, coefficient) pairs in any order.
using TermList = std::vector<std::pair<ExponentVector, CoeffPoly>>;

/// Merges duplicate exponents by summing, drops zero coefficients and
/// returns the resulting sparse polynomial.
inline SparsePolynomial support_of(const TermList& terms) {
  if (terms.empty()) throw InputError("zero polynomial");
  const std::size_t n = terms.front().first.size();
  std::map<ExponentVector, CoeffPoly> merged;
  for (const auto& [e, c] : terms) {
    if (e.size() != n) throw InputError("exponent vectors of different length in one polynomial");
    merged[e] += c;
  }
  std::vector<ExponentVector> pts;
  std::vector<CoeffPoly> coeffs;
  for (auto& [e, c] : merged) {
    if (c.is_zero()) continue;
    pts.push_back(e);
    coeffs.push_back(c);
  }
  if (pts.empty()) throw InputError("zero polynomial");
  // map iteration is already sorted, so Support keeps the same order
  return SparsePolynomial(Support(std::move(pts)), std::move(coeffs));
}

inline SparsePolynomial support_of(const std::vector<std::pair<ExponentVector, Rational>>& terms) {
  TermList t;
  t.reserve(terms.size());
  for (const auto& [e, c] : terms) t.emplace_back(e, CoeffPoly(c));
  return support_of(t);
}

inline std::vector<Support> supports_of(const std::vector<SparsePolynomial>& polys) {
  std::vector<Support> out;
  out.reserve(polys.size());
  for (const auto& p : polys) out.push_back(p.support());
  return out;
}

}  // namespace sparseres
