#pragma once

// Exact arithmetic in F_p and F_{p^2} = F_p[w]/(w^2 - d).
//
// Moduli are odd primes below 2^62; products go through unsigned __int128 so
// nothing overflows. FieldElement and QuadExtElement are small value types that
// carry their modulus and refuse to mix with elements of another field.
// Hot loops elsewhere in the library use the raw *_mod helpers on u64 directly.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "smk/errors.hpp"

namespace smk {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

inline constexpr u64 kMaxModulus = u64{1} << 62;

struct PrimePower {
  u64 prime = 0;
  unsigned exponent = 0;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

inline u64 add_mod(u64 a, u64 b, u64 m) {
  u64 s = a + b;
  return s >= m ? s - m : s;
}
inline u64 sub_mod(u64 a, u64 b, u64 m) { return a >= b ? a - b : a + m - b; }
inline u64 neg_mod(u64 a, u64 m) { return a == 0 ? 0 : m - a; }
inline u64 mul_mod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}
u64 pow_mod(u64 base, u64 exp, u64 m);
/// Inverse modulo m (m need not be prime). Throws InverseOfZero for a = 0 mod m
/// and std::domain_error when gcd(a, m) != 1.
u64 inv_mod(u64 a, u64 m);
u64 reduce_signed(i64 v, u64 m);

class FieldElement {
 public:
  FieldElement() = default;
  FieldElement(u64 value, u64 modulus);
  static FieldElement from_int(i64 v, u64 modulus);

  u64 value() const { return value_; }
  u64 modulus() const { return modulus_; }
  bool is_zero() const { return value_ == 0; }
  bool is_one() const { return value_ == 1; }

  FieldElement zero() const { return FieldElement(0, modulus_); }
  FieldElement one() const { return FieldElement(1, modulus_); }
  FieldElement scalar(i64 v) const { return from_int(v, modulus_); }

  FieldElement inv() const;
  FieldElement pow(u64 e) const;

  FieldElement operator-() const { return FieldElement(neg_mod(value_, modulus_), modulus_, Raw{}); }
  FieldElement& operator+=(const FieldElement& o);
  FieldElement& operator-=(const FieldElement& o);
  FieldElement& operator*=(const FieldElement& o);
  FieldElement& operator/=(const FieldElement& o);
  friend FieldElement operator+(FieldElement a, const FieldElement& b) { return a += b; }
  friend FieldElement operator-(FieldElement a, const FieldElement& b) { return a -= b; }
  friend FieldElement operator*(FieldElement a, const FieldElement& b) { return a *= b; }
  friend FieldElement operator/(FieldElement a, const FieldElement& b) { return a /= b; }
  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    return a.value_ == b.value_ && a.modulus_ == b.modulus_;
  }
  friend auto operator<=>(const FieldElement& a, const FieldElement& b) {
    return a.value_ <=> b.value_;
  }

  bool same_field(const FieldElement& o) const { return modulus_ == o.modulus_; }
  std::string to_string() const { return std::to_string(value_); }

 private:
  struct Raw {};
  FieldElement(u64 value, u64 modulus, Raw) : value_(value), modulus_(modulus) {}
  void check(const FieldElement& o) const;

  u64 value_ = 0;
  u64 modulus_ = 0;
};

/// a + b*w with w^2 = d, d a fixed quadratic non-residue mod p.
class QuadExtElement {
 public:
  QuadExtElement() = default;
  QuadExtElement(const FieldElement& a, const FieldElement& b, const FieldElement& d);
  QuadExtElement(u64 a, u64 b, u64 d, u64 p) : a_(a % p), b_(b % p), d_(d), p_(p) {}
  static QuadExtElement embed(const FieldElement& x, u64 d) { return {x.value(), 0, d, x.modulus()}; }

  FieldElement a() const { return {a_, p_}; }
  FieldElement b() const { return {b_, p_}; }
  u64 a_raw() const { return a_; }
  u64 b_raw() const { return b_; }
  u64 d() const { return d_; }
  u64 modulus() const { return p_; }

  bool is_zero() const { return a_ == 0 && b_ == 0; }
  bool is_one() const { return a_ == 1 && b_ == 0; }
  bool in_base_field() const { return b_ == 0; }

  QuadExtElement zero() const { return {0, 0, d_, p_}; }
  QuadExtElement one() const { return {1, 0, d_, p_}; }
  QuadExtElement scalar(i64 v) const { return {reduce_signed(v, p_), 0, d_, p_}; }

  FieldElement norm() const;
  QuadExtElement conj() const { return {a_, neg_mod(b_, p_), d_, p_}; }
  QuadExtElement inv() const;
  QuadExtElement pow(u64 e) const;

  QuadExtElement operator-() const { return {neg_mod(a_, p_), neg_mod(b_, p_), d_, p_}; }
  QuadExtElement& operator+=(const QuadExtElement& o);
  QuadExtElement& operator-=(const QuadExtElement& o);
  QuadExtElement& operator*=(const QuadExtElement& o);
  QuadExtElement& operator/=(const QuadExtElement& o) { return *this *= o.inv(); }
  friend QuadExtElement operator+(QuadExtElement x, const QuadExtElement& y) { return x += y; }
  friend QuadExtElement operator-(QuadExtElement x, const QuadExtElement& y) { return x -= y; }
  friend QuadExtElement operator*(QuadExtElement x, const QuadExtElement& y) { return x *= y; }
  friend QuadExtElement operator/(QuadExtElement x, const QuadExtElement& y) { return x /= y; }
  friend bool operator==(const QuadExtElement& x, const QuadExtElement& y) {
    return x.a_ == y.a_ && x.b_ == y.b_ && x.p_ == y.p_ && x.d_ == y.d_;
  }
  /// Lexicographic on (a, b); used for canonical sorted element lists.
  friend auto operator<=>(const QuadExtElement& x, const QuadExtElement& y) {
    if (auto c = x.a_ <=> y.a_; c != 0) return c;
    return x.b_ <=> y.b_;
  }

  bool same_field(const QuadExtElement& o) const { return p_ == o.p_ && d_ == o.d_; }
  std::string to_string() const;

 private:
  void check(const QuadExtElement& o) const;

  u64 a_ = 0;
  u64 b_ = 0;
  u64 d_ = 0;
  u64 p_ = 0;
};

/// Legendre symbol (a/p) in {-1, 0, 1}.
int legendre(const FieldElement& a);

/// Square roots of a: {} for non-residues, {0} for zero, otherwise {r, p - r}
/// with the smaller representative first.
std::vector<FieldElement> sqrt_mod(const FieldElement& a);

/// Smallest positive quadratic non-residue mod p; fixes the F_{p^2} model.
u64 smallest_nonresidue(u64 p);

/// Exact multiplicative order of x given the factorization of the ambient group
/// order (p - 1 for F_p^*, p^2 - 1 for F_{p^2}^*). Throws ZeroElement on 0 and
/// std::invalid_argument when the factorization does not annihilate x.
u64 mult_order(const FieldElement& x, std::span<const PrimePower> group_order);
u64 mult_order(const QuadExtElement& x, std::span<const PrimePower> group_order);

/// Roots xi, 1/xi of Z^2 - sZ + 1.
struct RootInfo {
  FieldElement s;
  FieldElement discriminant;  // s^2 - 4
  bool in_base_field = false;
  bool degenerate = false;  // discriminant 0, xi = +-1
  QuadExtElement xi;        // base-field roots are embedded with b = 0
  QuadExtElement xi_inv;
};

/// Canonical choice of xi: in F_p the smaller representative of the two roots;
/// in F_{p^2} the root whose w-coefficient is the smaller representative.
RootInfo quad_roots(const FieldElement& s);

}  // namespace smk
