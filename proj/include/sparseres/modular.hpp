#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sparseres/arith.hpp"

namespace sparseres {

/// Arithmetic in Z/p for a prime p < 2^32.
class PrimeField {
 public:
  explicit PrimeField(std::uint64_t p) : p_(p) {}

  std::uint64_t p() const { return p_; }
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const { return (a + b) % p_; }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return (a + p_ - b) % p_; }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const { return a * b % p_; }
  std::uint64_t pow(std::uint64_t a, std::uint64_t e) const {
    std::uint64_t r = 1;
    for (a %= p_; e; e >>= 1, a = mul(a, a))
      if (e & 1) r = mul(r, a);
    return r;
  }
  std::uint64_t inv(std::uint64_t a) const { return pow(a, p_ - 2); }

  std::uint64_t of(const BigInt& z) const {
    BigInt r = z % p_;
    if (r < 0) r += p_;
    return r.convert_to<std::uint64_t>();
  }

  /// Image of a rational, or nothing when p divides the denominator.
  std::optional<std::uint64_t> of(const Rational& q) const {
    const std::uint64_t d = of(BigInt(denominator(q)));
    if (d == 0) return std::nullopt;
    return mul(of(BigInt(numerator(q))), inv(d));
  }

 private:
  std::uint64_t p_;
};

inline bool is_prime(std::uint64_t m) {
  if (m < 2) return false;
  for (std::uint64_t d = 2; d * d <= m; ++d)
    if (m % d == 0) return false;
  return true;
}

/// The k-th prime counting down from 2^31 - 1 (k = 0 is 2^31 - 1 itself).
inline std::uint64_t large_prime(std::size_t k) {
  std::uint64_t m = (std::uint64_t{1} << 31) - 1;
  for (;; --m)
    if (is_prime(m) && k-- == 0) return m;
}

using ModMatrix = std::vector<std::vector<std::uint64_t>>;

/// Rank by Gaussian elimination over Z/p. The matrix is consumed.
inline std::size_t modular_rank(ModMatrix a, const PrimeField& f) {
  if (a.empty()) return 0;
  const std::size_t rows = a.size(), cols = a.front().size();
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rank;
    while (piv < rows && a[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[rank]);
    const std::uint64_t inv = f.inv(a[rank][c]);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      if (a[r][c] == 0) continue;
      const std::uint64_t m = f.mul(a[r][c], inv);
      for (std::size_t k = c; k < cols; ++k) a[r][k] = f.sub(a[r][k], f.mul(m, a[rank][k]));
    }
    ++rank;
  }
  return rank;
}

/// Rank of a rational matrix reduced mod p; nothing if p divides a
/// denominator (the caller should switch primes).
inline std::optional<std::size_t> modular_rank(const std::vector<std::vector<Rational>>& a, const PrimeField& f) {
  ModMatrix m(a.size());
  for (std::size_t r = 0; r < a.size(); ++r)
    for (const auto& q : a[r]) {
      auto v = f.of(q);
      if (!v) return std::nullopt;
      m[r].push_back(*v);
    }
  return modular_rank(std::move(m), f);
}

/// Incremental row basis over Z/p: feed rows one at a time, each is kept
/// iff it is independent of the rows kept so far.
class RowBasis {
 public:
  RowBasis(std::size_t cols, PrimeField f) : cols_(cols), f_(f) {}

  bool add(std::vector<std::uint64_t> row) {
    for (std::size_t b = 0; b < basis_.size(); ++b) {
      const std::size_t c = pivots_[b];
      if (row[c] == 0) continue;
      const std::uint64_t m = row[c];  // basis rows are normalized to pivot 1
      for (std::size_t k = c; k < cols_; ++k) row[k] = f_.sub(row[k], f_.mul(m, basis_[b][k]));
    }
    std::size_t c = 0;
    while (c < cols_ && row[c] == 0) ++c;
    if (c == cols_) return false;
    const std::uint64_t inv = f_.inv(row[c]);
    for (std::size_t k = c; k < cols_; ++k) row[k] = f_.mul(row[k], inv);
    // keep earlier rows reduced in the new pivot column so later reductions
    // can run in a single pass
    for (auto& other : basis_) {
      if (other[c] == 0) continue;
      const std::uint64_t m = other[c];
      for (std::size_t k = c; k < cols_; ++k) other[k] = f_.sub(other[k], f_.mul(m, row[k]));
    }
    basis_.push_back(std::move(row));
    pivots_.push_back(c);
    return true;
  }

  std::size_t rank() const { return basis_.size(); }

 private:
  std::size_t cols_;
  PrimeField f_;
  ModMatrix basis_;
  std::vector<std::size_t> pivots_;
};

/// Indices of a maximal independent subset of rows, scanning in order.
inline std::vector<std::size_t> independent_rows(const ModMatrix& a, const PrimeField& f) {
  std::vector<std::size_t> out;
  if (a.empty()) return out;
  RowBasis basis(a.front().size(), f);
  for (std::size_t r = 0; r < a.size(); ++r)
    if (basis.add(a[r])) out.push_back(r);
  return out;
}

}  // namespace sparseres
