#pragma once

// Dense univariate polynomials over F_p or F_{p^2}; coefficient i multiplies T^i.
// Only what the bivariate code needs: gcd, evaluation, root scans, square test.

#include <algorithm>
#include <utility>
#include <vector>

#include "smk/ff.hpp"

namespace smk {

template <class K>
class UniPoly {
 public:
  explicit UniPoly(K zero) : zero_(zero.zero()) {}
  UniPoly(std::vector<K> coeffs, K zero) : zero_(zero.zero()), c_(std::move(coeffs)) { trim(); }

  const K& field() const { return zero_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<K>& coeffs() const { return c_; }
  K coeff(std::size_t i) const { return i < c_.size() ? c_[i] : zero_; }
  K leading() const { return c_.empty() ? zero_ : c_.back(); }

  K eval(const K& x) const {
    K acc = zero_;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  UniPoly derivative() const {
    std::vector<K> out;
    for (std::size_t i = 1; i < c_.size(); ++i) out.push_back(c_[i] * zero_.scalar(static_cast<i64>(i)));
    return UniPoly(std::move(out), zero_);
  }

  UniPoly monic() const {
    if (c_.empty()) return *this;
    K inv = c_.back().inv();
    std::vector<K> out = c_;
    for (auto& v : out) v *= inv;
    return UniPoly(std::move(out), zero_);
  }

  friend UniPoly operator+(const UniPoly& a, const UniPoly& b) {
    std::vector<K> out(std::max(a.c_.size(), b.c_.size()), a.zero_);
    for (std::size_t i = 0; i < a.c_.size(); ++i) out[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) out[i] += b.c_[i];
    return UniPoly(std::move(out), a.zero_);
  }
  friend UniPoly operator-(const UniPoly& a, const UniPoly& b) {
    std::vector<K> out(std::max(a.c_.size(), b.c_.size()), a.zero_);
    for (std::size_t i = 0; i < a.c_.size(); ++i) out[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) out[i] -= b.c_[i];
    return UniPoly(std::move(out), a.zero_);
  }
  friend UniPoly operator*(const UniPoly& a, const UniPoly& b) {
    if (a.is_zero() || b.is_zero()) return UniPoly(a.zero_);
    std::vector<K> out(a.c_.size() + b.c_.size() - 1, a.zero_);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
    return UniPoly(std::move(out), a.zero_);
  }
  friend bool operator==(const UniPoly& a, const UniPoly& b) { return a.c_ == b.c_; }

  /// Euclidean division; divisor must be nonzero.
  std::pair<UniPoly, UniPoly> divmod(const UniPoly& d) const {
    std::vector<K> rem = c_;
    const int dd = d.degree();
    if (static_cast<int>(rem.size()) - 1 < dd) return {UniPoly(zero_), *this};
    std::vector<K> quot(rem.size() - static_cast<std::size_t>(dd), zero_);
    const K lc_inv = d.leading().inv();
    for (int i = static_cast<int>(rem.size()) - 1; i >= dd; --i) {
      K f = rem[static_cast<std::size_t>(i)] * lc_inv;
      if (f.is_zero()) continue;
      quot[static_cast<std::size_t>(i - dd)] = f;
      for (int j = 0; j <= dd; ++j) rem[static_cast<std::size_t>(i - dd + j)] -= f * d.c_[static_cast<std::size_t>(j)];
    }
    return {UniPoly(std::move(quot), zero_), UniPoly(std::move(rem), zero_)};
  }

  /// Monic gcd (zero when both are zero).
  static UniPoly gcd(UniPoly a, UniPoly b) {
    while (!b.is_zero()) {
      UniPoly r = a.divmod(b).second;
      a = std::move(b);
      b = std::move(r);
    }
    return a.monic();
  }

  /// True when the polynomial is c * g^2 over the algebraic closure. For monic f
  /// a monic square root, if any, has coefficients in the base field, so the
  /// test reduces to top-down coefficient matching.
  bool is_square_over_closure() const {
    if (c_.size() <= 1) return true;
    if (degree() % 2 != 0) return false;
    UniPoly f = monic();
    const std::size_t k = static_cast<std::size_t>(degree() / 2);
    std::vector<K> g(k + 1, zero_);
    g[k] = zero_.one();
    const K two_inv = zero_.scalar(2).inv();
    // coefficient of T^{k+i} in g^2 for i = k-1 .. 0 determines g[i]
    for (std::size_t step = 1; step <= k; ++step) {
      const std::size_t i = k - step;
      K acc = zero_;
      for (std::size_t a = i + 1; a <= k; ++a) {
        const std::size_t b = k + i - a;
        if (b >= i + 1 && b <= k) acc += g[a] * g[b];
      }
      g[i] = (f.coeff(k + i) - acc) * two_inv;
    }
    UniPoly gp(g, zero_);
    return gp * gp == f;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }

  K zero_;
  std::vector<K> c_;
};

}  // namespace smk
