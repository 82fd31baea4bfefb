#pragma once

// Integer factorization, divisor and smooth-number counting, primitive prime
// divisors of 2^n - 1, and a segmented prime sieve.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "smk/ff.hpp"

namespace smk::numth {

inline constexpr u64 kPsiLimit = 100'000'000;
inline constexpr u64 kSieveLimit = 1'000'000'000;
inline constexpr unsigned kMaxMersenneExponent = 40;

struct Factorization {
  u64 n = 1;
  std::vector<PrimePower> factors;  // strictly increasing primes

  u64 recompose() const;
  u64 divisor_count() const;
  std::vector<u64> divisors() const;  // ascending
};

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime(u64 n);

/// Trial division followed by Pollard-rho (Brent). n = 0 is rejected.
Factorization factorize(u64 n);

/// Factorization of a*b from factorizations of a and b; throws RangeTooLarge
/// when the product does not fit in 64 bits.
Factorization multiply(const Factorization& a, const Factorization& b);

/// Factorization of p^2 - 1 = (p - 1)(p + 1).
Factorization factorize_p2_minus_1(u64 p);

/// Number of divisors d of n with d <= z.
u64 tau_z(u64 n, double z);
u64 tau_z(const Factorization& f, double z);

/// Number of y-smooth integers in [1, x]. Requires x <= 1e8.
u64 psi(u64 x, u64 y);

struct PsiAuditRow {
  u64 x = 0;
  u64 y = 0;
  double u = 0;
  u64 psi = 0;
  double ratio = 0;  // psi / (exp(-u/2) x)
};

/// Every (x, y) cell of the grid; the empirical constant is the max ratio.
std::vector<PsiAuditRow> bound_audit_psi(std::span<const u64> x_grid, std::span<const u64> y_grid);
double empirical_c0(std::span<const PsiAuditRow> rows);

/// Primes q | 2^n - 1 with ord_q(2) = n, ascending. Requires 1 <= n <= 40.
std::vector<u64> primitive_prime_divisors(unsigned n);

/// Primes in [lo, hi] ascending via a segmented sieve. Requires hi <= 1e9.
void for_each_prime(u64 lo, u64 hi, const std::function<void(u64)>& fn);
std::vector<u64> primes_in_range(u64 lo, u64 hi);

/// Smallest generator of F_p^*.
u64 primitive_root(u64 p);

}  // namespace smk::numth
