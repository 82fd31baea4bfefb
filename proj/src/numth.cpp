#include "smk/numth.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

namespace smk::numth {

u64 Factorization::recompose() const {
  u128 acc = 1;
  for (const auto& pp : factors)
    for (unsigned e = 0; e < pp.exponent; ++e) acc *= pp.prime;
  return static_cast<u64>(acc);
}

u64 Factorization::divisor_count() const {
  u64 c = 1;
  for (const auto& pp : factors) c *= pp.exponent + 1;
  return c;
}

std::vector<u64> Factorization::divisors() const {
  std::vector<u64> out{1};
  for (const auto& pp : factors) {
    const std::size_t base = out.size();
    u64 pk = 1;
    for (unsigned e = 1; e <= pp.exponent; ++e) {
      pk *= pp.prime;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  static constexpr u64 kSmall[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (u64 q : kSmall) {
    if (n % q == 0) return n == q;
  }
  u64 d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : kSmall) {
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

namespace {

u64 pollard_brent(u64 n) {
  if (n % 2 == 0) return 2;
  // deterministic sequence of polynomial constants
  for (u64 c = 1;; ++c) {
    u64 y = 2, g = 1, r = 1, q = 1, x = 0, ys = 0;
    const u64 m = 128;
    auto f = [&](u64 v) { return add_mod(mul_mod(v, v, n), c, n); };
    while (g == 1) {
      x = y;
      for (u64 i = 0; i < r; ++i) y = f(y);
      u64 k = 0;
      while (k < r && g == 1) {
        ys = y;
        for (u64 i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = mul_mod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
        k += m;
      }
      r <<= 1;
    }
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_rec(u64 n, std::map<u64, unsigned>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    ++out[n];
    return;
  }
  u64 d = pollard_brent(n);
  factor_rec(d, out);
  factor_rec(n / d, out);
}

Factorization from_map(u64 n, const std::map<u64, unsigned>& m) {
  Factorization f;
  f.n = n;
  for (auto [q, e] : m) f.factors.push_back({q, e});
  return f;
}

}  // namespace

Factorization factorize(u64 n) {
  if (n == 0) throw std::invalid_argument("factorize(0)");
  std::map<u64, unsigned> found;
  u64 rest = n;
  for (u64 q = 2; q < 1000 && q * q <= rest; ++q) {
    while (rest % q == 0) {
      ++found[q];
      rest /= q;
    }
  }
  factor_rec(rest, found);
  return from_map(n, found);
}

Factorization multiply(const Factorization& a, const Factorization& b) {
  u128 prod = static_cast<u128>(a.n) * b.n;
  if (prod >> 64) throw RangeTooLarge("product of factorizations exceeds 64 bits");
  std::map<u64, unsigned> m;
  for (const auto& pp : a.factors) m[pp.prime] += pp.exponent;
  for (const auto& pp : b.factors) m[pp.prime] += pp.exponent;
  return from_map(static_cast<u64>(prod), m);
}

Factorization factorize_p2_minus_1(u64 p) { return multiply(factorize(p - 1), factorize(p + 1)); }

u64 tau_z(const Factorization& f, double z) {
  if (z < 1) return 0;
  u64 count = 0;
  for (u64 d : f.divisors()) {
    if (static_cast<double>(d) <= z) ++count;
  }
  return count;
}

u64 tau_z(u64 n, double z) {
  if (n == 0) throw std::invalid_argument("tau_z needs n >= 1");
  return tau_z(factorize(n), z);
}

namespace {

std::vector<u64> simple_sieve(u64 limit) {
  std::vector<bool> composite(limit + 1, false);
  std::vector<u64> primes;
  for (u64 i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (u64 j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return primes;
}

u64 isqrt(u64 n) {
  u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

}  // namespace

void for_each_prime(u64 lo, u64 hi, const std::function<void(u64)>& fn) {
  if (hi > kSieveLimit) throw RangeTooLarge("prime sieve limited to 1e9, got " + std::to_string(hi));
  if (lo < 2) lo = 2;
  if (hi < lo) return;
  const std::vector<u64> base = simple_sieve(isqrt(hi));
  constexpr u64 kSegment = u64{1} << 18;
  std::vector<char> composite(kSegment);
  for (u64 seg_lo = lo; seg_lo <= hi; seg_lo += kSegment) {
    const u64 seg_hi = std::min(hi, seg_lo + kSegment - 1);
    std::fill(composite.begin(), composite.end(), 0);
    for (u64 q : base) {
      if (q * q > seg_hi) break;
      u64 start = std::max(q * q, (seg_lo + q - 1) / q * q);
      for (u64 j = start; j <= seg_hi; j += q) composite[j - seg_lo] = 1;
    }
    for (u64 v = seg_lo; v <= seg_hi; ++v)
      if (!composite[v - seg_lo]) fn(v);
  }
}

std::vector<u64> primes_in_range(u64 lo, u64 hi) {
  std::vector<u64> out;
  for_each_prime(lo, hi, [&](u64 q) { out.push_back(q); });
  return out;
}

u64 psi(u64 x, u64 y) {
  if (x < 1 || y < 2) throw std::invalid_argument("psi needs x >= 1 and y >= 2");
  if (x > kPsiLimit) throw RangeTooLarge("psi limited to x <= 1e8, got " + std::to_string(x));
  if (y >= x) return x;

  // y >= sqrt(x): a non-smooth n <= x has exactly one prime factor above y
  if (y * y >= x) {
    u64 non_smooth = 0;
    for_each_prime(y + 1, x, [&](u64 q) { non_smooth += x / q; });
    return x - non_smooth;
  }

  const std::vector<u64> primes = simple_sieve(y);
  constexpr u64 kSegment = u64{1} << 18;
  std::vector<std::uint32_t> rest(kSegment);
  u64 count = 0;
  for (u64 lo = 1; lo <= x; lo += kSegment) {
    const u64 hi = std::min(x, lo + kSegment - 1);
    for (u64 v = lo; v <= hi; ++v) rest[v - lo] = static_cast<std::uint32_t>(v);
    for (u64 q : primes) {
      for (u64 j = (lo + q - 1) / q * q; j <= hi; j += q) {
        std::uint32_t& r = rest[j - lo];
        do {
          r /= static_cast<std::uint32_t>(q);
        } while (r % q == 0);
      }
    }
    for (u64 v = lo; v <= hi; ++v) count += rest[v - lo] == 1;
  }
  return count;
}

std::vector<PsiAuditRow> bound_audit_psi(std::span<const u64> x_grid, std::span<const u64> y_grid) {
  std::vector<PsiAuditRow> rows;
  rows.reserve(x_grid.size() * y_grid.size());
  for (u64 x : x_grid) {
    for (u64 y : y_grid) {
      PsiAuditRow row;
      row.x = x;
      row.y = y;
      row.u = std::log(static_cast<double>(x)) / std::log(static_cast<double>(y));
      row.psi = psi(x, y);
      row.ratio = static_cast<double>(row.psi) / (std::exp(-row.u / 2) * static_cast<double>(x));
      rows.push_back(row);
    }
  }
  return rows;
}

double empirical_c0(std::span<const PsiAuditRow> rows) {
  double best = 0;
  for (const auto& r : rows) best = std::max(best, r.ratio);
  return best;
}

std::vector<u64> primitive_prime_divisors(unsigned n) {
  if (n < 1 || n > kMaxMersenneExponent)
    throw RangeTooLarge("primitive_prime_divisors needs 1 <= n <= 40, got " + std::to_string(n));
  const u64 mersenne = (u64{1} << n) - 1;
  std::vector<u64> out;
  for (const auto& pp : factorize(mersenne).factors) {
    const u64 q = pp.prime;
    if (q == 2) continue;
    const Factorization group = factorize(q - 1);
    if (mult_order(FieldElement(2, q), group.factors) == n) out.push_back(q);
  }
  return out;
}

u64 primitive_root(u64 p) {
  if (p == 2) return 1;
  const Factorization f = factorize(p - 1);
  for (u64 g = 2; g < p; ++g) {
    bool ok = true;
    for (const auto& pp : f.factors) {
      if (pow_mod(g, (p - 1) / pp.prime, p) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  throw std::invalid_argument("no primitive root modulo " + std::to_string(p));
}

}  // namespace smk::numth
