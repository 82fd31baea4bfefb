#include "smk/ff.hpp"

#include <stdexcept>

namespace smk {

u64 pow_mod(u64 base, u64 exp, u64 m) {
  if (m == 1) return 0;
  u64 result = 1;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

u64 inv_mod(u64 a, u64 m) {
  a %= m;
  if (a == 0) throw InverseOfZero("inverse of zero modulo " + std::to_string(m));
  // extended Euclid on signed 128-bit to stay exact for m < 2^63
  __int128 old_r = a, r = m, old_s = 1, s = 0;
  while (r != 0) {
    __int128 q = old_r / r;
    __int128 tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
  }
  if (old_r != 1) throw std::domain_error("element not invertible modulo " + std::to_string(m));
  __int128 res = old_s % static_cast<__int128>(m);
  if (res < 0) res += m;
  return static_cast<u64>(res);
}

u64 reduce_signed(i64 v, u64 m) {
  if (v >= 0) return static_cast<u64>(v) % m;
  u64 mag = static_cast<u64>(-(v + 1)) + 1;  // |v| without overflow at INT64_MIN
  return neg_mod(mag % m, m);
}

// ---------------------------------------------------------------------------
// FieldElement

FieldElement::FieldElement(u64 value, u64 modulus) : modulus_(modulus) {
  if (modulus < 2 || modulus >= kMaxModulus)
    throw std::invalid_argument("modulus out of range: " + std::to_string(modulus));
  value_ = value % modulus;
}

FieldElement FieldElement::from_int(i64 v, u64 modulus) {
  if (modulus < 2 || modulus >= kMaxModulus)
    throw std::invalid_argument("modulus out of range: " + std::to_string(modulus));
  return FieldElement(reduce_signed(v, modulus), modulus, Raw{});
}

void FieldElement::check(const FieldElement& o) const {
  if (modulus_ != o.modulus_)
    throw ModulusMismatch("moduli differ: " + std::to_string(modulus_) + " vs " +
                          std::to_string(o.modulus_));
}

FieldElement& FieldElement::operator+=(const FieldElement& o) {
  check(o);
  value_ = add_mod(value_, o.value_, modulus_);
  return *this;
}

FieldElement& FieldElement::operator-=(const FieldElement& o) {
  check(o);
  value_ = sub_mod(value_, o.value_, modulus_);
  return *this;
}

FieldElement& FieldElement::operator*=(const FieldElement& o) {
  check(o);
  value_ = mul_mod(value_, o.value_, modulus_);
  return *this;
}

FieldElement& FieldElement::operator/=(const FieldElement& o) {
  check(o);
  value_ = mul_mod(value_, inv_mod(o.value_, modulus_), modulus_);
  return *this;
}

FieldElement FieldElement::inv() const { return FieldElement(inv_mod(value_, modulus_), modulus_, Raw{}); }

FieldElement FieldElement::pow(u64 e) const {
  return FieldElement(pow_mod(value_, e, modulus_), modulus_, Raw{});
}

// ---------------------------------------------------------------------------
// QuadExtElement

QuadExtElement::QuadExtElement(const FieldElement& a, const FieldElement& b, const FieldElement& d)
    : a_(a.value()), b_(b.value()), d_(d.value()), p_(a.modulus()) {
  if (!a.same_field(b) || !a.same_field(d)) throw ModulusMismatch("QuadExtElement parts differ in modulus");
}

void QuadExtElement::check(const QuadExtElement& o) const {
  if (p_ != o.p_ || d_ != o.d_)
    throw ModulusMismatch("F_{p^2} models differ (p=" + std::to_string(p_) + ",d=" + std::to_string(d_) +
                          " vs p=" + std::to_string(o.p_) + ",d=" + std::to_string(o.d_) + ")");
}

QuadExtElement& QuadExtElement::operator+=(const QuadExtElement& o) {
  check(o);
  a_ = add_mod(a_, o.a_, p_);
  b_ = add_mod(b_, o.b_, p_);
  return *this;
}

QuadExtElement& QuadExtElement::operator-=(const QuadExtElement& o) {
  check(o);
  a_ = sub_mod(a_, o.a_, p_);
  b_ = sub_mod(b_, o.b_, p_);
  return *this;
}

QuadExtElement& QuadExtElement::operator*=(const QuadExtElement& o) {
  check(o);
  u64 aa = mul_mod(a_, o.a_, p_);
  u64 bb = mul_mod(mul_mod(b_, o.b_, p_), d_, p_);
  u64 ab = add_mod(mul_mod(a_, o.b_, p_), mul_mod(o.a_, b_, p_), p_);
  a_ = add_mod(aa, bb, p_);
  b_ = ab;
  return *this;
}

FieldElement QuadExtElement::norm() const {
  return FieldElement(sub_mod(mul_mod(a_, a_, p_), mul_mod(d_, mul_mod(b_, b_, p_), p_), p_), p_);
}

QuadExtElement QuadExtElement::inv() const {
  if (is_zero()) throw InverseOfZero("inverse of zero in F_{p^2}");
  u64 n_inv = inv_mod(norm().value(), p_);
  return {mul_mod(a_, n_inv, p_), mul_mod(neg_mod(b_, p_), n_inv, p_), d_, p_};
}

QuadExtElement QuadExtElement::pow(u64 e) const {
  QuadExtElement result = one();
  QuadExtElement base = *this;
  while (e > 0) {
    if (e & 1) result *= base;
    base *= base;
    e >>= 1;
  }
  return result;
}

std::string QuadExtElement::to_string() const {
  if (b_ == 0) return std::to_string(a_);
  return std::to_string(a_) + "+" + std::to_string(b_) + "w";
}

// ---------------------------------------------------------------------------

int legendre(const FieldElement& a) {
  if (a.is_zero()) return 0;
  u64 p = a.modulus();
  u64 r = pow_mod(a.value(), (p - 1) / 2, p);
  return r == 1 ? 1 : -1;
}

std::vector<FieldElement> sqrt_mod(const FieldElement& a) {
  const u64 p = a.modulus();
  if (a.is_zero()) return {a};
  if (legendre(a) != 1) return {};

  u64 root;
  if (p % 4 == 3) {
    root = pow_mod(a.value(), (p + 1) / 4, p);
  } else {
    // Tonelli-Shanks
    u64 q = p - 1;
    unsigned s = 0;
    while ((q & 1) == 0) {
      q >>= 1;
      ++s;
    }
    u64 z = smallest_nonresidue(p);
    u64 m = s;
    u64 c = pow_mod(z, q, p);
    u64 t = pow_mod(a.value(), q, p);
    root = pow_mod(a.value(), (q + 1) / 2, p);
    while (t != 1) {
      u64 i = 0;
      u64 tt = t;
      while (tt != 1) {
        tt = mul_mod(tt, tt, p);
        ++i;
      }
      u64 b = c;
      for (u64 j = 0; j + i + 1 < m; ++j) b = mul_mod(b, b, p);
      m = i;
      c = mul_mod(b, b, p);
      t = mul_mod(t, c, p);
      root = mul_mod(root, b, p);
    }
  }
  u64 other = p - root;
  if (other < root) std::swap(root, other);
  return {FieldElement(root, p), FieldElement(other, p)};
}

u64 smallest_nonresidue(u64 p) {
  if (p < 3 || p % 2 == 0) throw std::invalid_argument("smallest_nonresidue needs an odd prime");
  for (u64 n = 2; n < p; ++n) {
    if (pow_mod(n, (p - 1) / 2, p) == p - 1) return n;
  }
  throw std::invalid_argument("no quadratic non-residue modulo " + std::to_string(p));
}

namespace {

template <class G>
u64 order_by_division(const G& x, std::span<const PrimePower> group_order) {
  if (x.is_zero()) throw ZeroElement("multiplicative order of zero");
  u64 order = 1;
  for (const auto& pp : group_order)
    for (unsigned e = 0; e < pp.exponent; ++e) order *= pp.prime;
  if (!x.pow(order).is_one())
    throw std::invalid_argument("factorization does not annihilate the element");
  for (const auto& pp : group_order) {
    for (unsigned e = 0; e < pp.exponent; ++e) {
      if (x.pow(order / pp.prime).is_one()) {
        order /= pp.prime;
      } else {
        break;
      }
    }
  }
  return order;
}

}  // namespace

u64 mult_order(const FieldElement& x, std::span<const PrimePower> group_order) {
  return order_by_division(x, group_order);
}

u64 mult_order(const QuadExtElement& x, std::span<const PrimePower> group_order) {
  return order_by_division(x, group_order);
}

RootInfo quad_roots(const FieldElement& s) {
  const u64 p = s.modulus();
  const u64 d = smallest_nonresidue(p);
  RootInfo info;
  info.s = s;
  info.discriminant = s * s - s.scalar(4);
  const FieldElement half = s.scalar(2).inv();

  if (info.discriminant.is_zero()) {
    info.in_base_field = true;
    info.degenerate = true;
    FieldElement xi = s * half;
    info.xi = QuadExtElement::embed(xi, d);
    info.xi_inv = info.xi;
    return info;
  }

  auto roots = sqrt_mod(info.discriminant);
  if (!roots.empty()) {
    info.in_base_field = true;
    FieldElement r1 = (s + roots[0]) * half;
    FieldElement r2 = (s - roots[0]) * half;
    if (r2 < r1) std::swap(r1, r2);
    info.xi = QuadExtElement::embed(r1, d);
    info.xi_inv = QuadExtElement::embed(r2, d);
    return info;
  }

  // disc = d * c^2 for some c in F_p, so sqrt(disc) = c*w
  FieldElement dd(d, p);
  auto c_roots = sqrt_mod(info.discriminant / dd);
  FieldElement c = c_roots.at(0);
  FieldElement re = s * half;
  FieldElement im = c * half;
  if ((-im) < im) im = -im;
  info.xi = QuadExtElement(re, im, dd);
  info.xi_inv = QuadExtElement(re, -im, dd);
  return info;
}

}  // namespace smk
