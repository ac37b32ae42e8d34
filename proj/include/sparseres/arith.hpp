#pragma once

// Exact scalar types and small exact linear algebra helpers shared by the
// geometry and matrix-construction code.

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "sparseres/error.hpp"

namespace sparseres {

using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;
/// Fixed-width integer that throws on overflow instead of wrapping.
using Int128 = boost::multiprecision::checked_int128_t;

using Complex = std::complex<double>;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

/// Parses "a", "-a" or "a/b" (integers only; floats are rejected).
inline Rational parse_rational(const std::string& text) {
  if (text.empty()) throw InputError("empty rational literal");
  for (char c : text) {
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '/')) {
      throw InputError("not an exact rational: '" + text + "'");
    }
  }
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational(BigInt(text));
    BigInt num(text.substr(0, slash));
    BigInt den(text.substr(slash + 1));
    if (den == 0) throw InputError("zero denominator in '" + text + "'");
    return Rational(num, den);
  } catch (const InputError&) {
    throw;
  } catch (const std::exception&) {
    throw InputError("not an exact rational: '" + text + "'");
  }
}

inline std::string to_string(const Rational& q) { return q.str(); }

/// Determinant of a square integer matrix by Bareiss fraction-free
/// elimination. Every intermediate value is a minor of the input, so the
/// checked 128-bit type is exact for desk-scale geometry.
inline Int128 det_bareiss(std::vector<std::vector<Int128>> a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  Int128 prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t swap = k + 1;
      while (swap < n && a[swap][k] == 0) ++swap;
      if (swap == n) return 0;
      std::swap(a[k], a[swap]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
      }
    }
    prev = a[k][k];
  }
  return sign > 0 ? a[n - 1][n - 1] : Int128(-a[n - 1][n - 1]);
}

/// Exact rank over Q.
inline std::size_t rank_rational(std::vector<std::vector<Rational>> a) {
  std::size_t rank = 0;
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rank;
    while (piv < rows && a[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[rank], a[piv]);
    for (std::size_t i = rank + 1; i < rows; ++i) {
      if (a[i][c] == 0) continue;
      Rational f = a[i][c] / a[rank][c];
      for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[rank][j];
    }
    ++rank;
  }
  return rank;
}

/// Exact determinant over Q by Gaussian elimination.
inline Rational det_rational(std::vector<std::vector<Rational>> a) {
  const std::size_t n = a.size();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && a[piv][c] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      std::swap(a[c], a[piv]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      if (a[i][c] == 0) continue;
      Rational f = a[i][c] / a[c][c];
      for (std::size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
    }
  }
  return det;
}

/// Inverse of a nonsingular square rational matrix (Gauss-Jordan).
inline std::vector<std::vector<Rational>> inverse_rational(std::vector<std::vector<Rational>> a) {
  const std::size_t n = a.size();
  std::vector<std::vector<Rational>> inv(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && a[piv][c] == 0) ++piv;
    if (piv == n) throw ConstructionError("singular matrix in exact inverse");
    std::swap(a[c], a[piv]);
    std::swap(inv[c], inv[piv]);
    Rational p = a[c][c];
    for (std::size_t j = 0; j < n; ++j) {
      a[c][j] /= p;
      inv[c][j] /= p;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || a[i][c] == 0) continue;
      Rational f = a[i][c];
      for (std::size_t j = 0; j < n; ++j) {
        a[i][j] -= f * a[c][j];
        inv[i][j] -= f * inv[c][j];
      }
    }
  }
  return inv;
}

/// Univariate polynomial in the distinguished variable x0 with exact
/// coefficients; index k holds the coefficient of x0^k. Plain rational
/// coefficients are the degree-0 case.
class CoeffPoly {
 public:
  CoeffPoly() = default;
  CoeffPoly(Rational constant) : c_{std::move(constant)} { trim(); }  // NOLINT: implicit by design of the coefficient ring
  explicit CoeffPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

  static CoeffPoly x0() { return CoeffPoly(std::vector<Rational>{0, 1}); }

  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }
  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<Rational>& coeffs() const { return c_; }
  Rational coeff(std::size_t k) const { return k < c_.size() ? c_[k] : Rational(0); }

  Rational constant() const { return coeff(0); }

  CoeffPoly& operator+=(const CoeffPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    trim();
    return *this;
  }
  friend CoeffPoly operator+(CoeffPoly a, const CoeffPoly& b) { return a += b; }
  friend CoeffPoly operator*(const CoeffPoly& a, const CoeffPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> out(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
    return CoeffPoly(std::move(out));
  }
  friend bool operator==(const CoeffPoly& a, const CoeffPoly& b) { return a.c_ == b.c_; }

  Rational eval(const Rational& x) const {
    Rational acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }
  Complex eval(Complex x) const {
    Complex acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + to_double(*it);
    return acc;
  }
  /// Largest coefficient magnitude.
  Rational max_abs() const {
    Rational m = 0;
    for (const auto& v : c_) m = std::max(m, Rational(abs(v)));
    return m;
  }

  std::string str() const {
    if (c_.empty()) return "0";
    std::string out;
    for (std::size_t k = 0; k < c_.size(); ++k) {
      if (c_[k] == 0) continue;
      if (!out.empty()) out += " + ";
      out += "(" + c_[k].str() + ")";
      if (k == 1) out += "*x0";
      if (k > 1) out += "*x0^" + std::to_string(k);
    }
    return out;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<Rational> c_;
};

}  // namespace sparseres
