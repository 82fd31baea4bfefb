#pragma once

// Cyclic subgroups of F_p^* and F_{p^2}^*, exact solution counts of polynomial
// and Moebius-type equations on subgroup grids, the empirical check of the
// subgroup bound, the conjecture scanner and the two small explicit
// constructions (a nine-point family and the coset pigeonhole).

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "smk/ff.hpp"
#include "smk/numth.hpp"
#include "smk/poly.hpp"

namespace smk::subgrp {

enum class Ambient { Fp, Fp2 };
std::string to_string(Ambient a);

inline constexpr u64 kMaxMaterialized = 1'000'000;
inline constexpr u64 kMaxGrid = 1'000'000'000;

template <class K>
struct SubgroupSpec {
  Ambient ambient = Ambient::Fp;
  u64 p = 0;
  u64 order = 0;
  K generator;
  std::vector<K> elements;  // sorted

  bool contains(const K& x) const { return std::binary_search(elements.begin(), elements.end(), x); }
};

/// Order-t subgroup of F_p^* generated by g^((p-1)/t), g the smallest primitive root.
SubgroupSpec<FieldElement> build_subgroup(u64 p, u64 t);

/// Smallest generator of F_{p^2}^* in the order (b, a) with b >= 1, i.e. the
/// first a + b*w with b = 1, 2, ... and a = 0, 1, ... of full order.
QuadExtElement primitive_element_ext(u64 p);

/// Order-t subgroup of F_{p^2}^*, generated by gamma^((p^2-1)/t).
SubgroupSpec<QuadExtElement> build_subgroup_ext(u64 p, u64 t);

/// Number of (u, v) in G1 x G2 (or aG1 x bG2) with P(u, v) = 0.
template <class K>
u64 count_poly_solutions(const BivariatePoly<K>& poly, const SubgroupSpec<K>& g1, const SubgroupSpec<K>& g2,
                         const std::type_identity_t<std::optional<std::pair<K, K>>>& cosets = std::nullopt) {
  if (static_cast<unsigned __int128>(g1.elements.size()) * g2.elements.size() > kMaxGrid)
    throw TooLarge("grid exceeds 1e9 cells");
  if (poly.is_zero()) return g1.elements.size() * g2.elements.size();
  std::vector<K> vs = g2.elements;
  if (cosets)
    for (auto& v : vs) v *= cosets->second;
  u64 count = 0;
  for (K u : g1.elements) {
    if (cosets) u *= cosets->first;
    const UniPoly<K> f = poly.specialize_x(u);
    if (f.is_zero()) {
      count += vs.size();
      continue;
    }
    for (const auto& v : vs) count += f.eval(v).is_zero();
  }
  return count;
}

/// True when no (u, v) in G^2 and scalar gamma give Q(uX, vY) = gamma P.
template <class K>
bool g_independent(const BivariatePoly<K>& p, const BivariatePoly<K>& q, const SubgroupSpec<K>& g) {
  if (p.num_terms() != q.num_terms()) return true;
  for (std::size_t k = 0; k < p.num_terms(); ++k)
    if (p.terms()[k].first != q.terms()[k].first) return true;
  if (p.is_zero()) return false;
  for (const auto& u : g.elements) {
    for (const auto& v : g.elements) {
      const auto qs = q.substitute_scale(u, v);
      const K gamma = qs.terms()[0].second / p.terms()[0].second;
      if (qs == p.scale(gamma)) return false;
    }
  }
  return true;
}

struct Bound {
  u64 coefficient = 0;  // 12 m n (m + n) g
  u64 ceil_value = 0;   // ceil(coefficient * (h t)^{2/3})
  double value = 0;
};

/// The subgroup bound 12mn(m+n)g (ht)^{2/3}, evaluated exactly via integer cube
/// roots: N >= bound iff N^3 >= coefficient^3 (ht)^2.
Bound theorem_bound(u64 m, u64 n, u64 g, u64 h, u64 t);

/// N >= 12mn(m+n)g (ht)^{2/3}, decided exactly.
bool reaches_bound(u64 count, const Bound& b);

/// Admissibility window h^2 <= t <= p^{3/4} h^{-1/4} / 2, i.e. 16 t^4 h <= p^3.
bool in_window(u64 p, u64 h, u64 t);

enum class Verdict { within_bound, violation, outside_window };
std::string to_string(Verdict v);

struct TheoremReport {
  u64 p = 0, t = 0, h = 0, m = 0, n = 0, g = 0;
  std::vector<u64> counts;  // one per scaled copy
  u64 total = 0;            // N_h
  Bound bound;
  bool window = false;
  Verdict verdict = Verdict::within_bound;
  Irreducibility irreducible = Irreducibility::unknown;
  std::vector<std::string> warnings;
};

/// Sum over i of #{(u, v) in G^2 : P(lambda_i u, mu_i v) = 0} against the bound.
/// Throws PreconditionFailure when the lowest homogeneous part is a single
/// monomial, the family is not pairwise G-independent, or P is known reducible.
TheoremReport check_theorem(const FpPoly& poly, const std::vector<std::pair<FieldElement, FieldElement>>& scalings,
                            const SubgroupSpec<FieldElement>& g);

/// XY + X + Y and two polynomials with the monomial pattern of the coincidence
/// polynomial X^2 Y, X Y^2, X, Y (so g = 2), in the poly text format.
std::vector<std::string> default_theorem_family();

struct TheoremScanRow {
  u64 p = 0, t = 0;
  std::size_t poly_index = 0;
  std::string status;  // a Verdict name, or "skipped" when P is reducible mod p
  TheoremReport report;
};

struct TheoremScanConfig {
  u64 p_min = 5;
  u64 p_max = 500;
  std::vector<std::string> family = default_theorem_family();
  unsigned threads = 1;
};

struct TheoremScanReport {
  TheoremScanConfig config;
  std::vector<TheoremScanRow> rows;  // ordered by (p, t, poly_index)
  u64 in_window = 0;
  u64 violations = 0;
  u64 skipped = 0;
};

/// check_theorem with h = 1 for every prime in range, every t | p - 1 and
/// every family member.
TheoremScanReport theorem_scan(const TheoremScanConfig& cfg);

/// (a11 u - a12) / (a21 u - a22) = v.
template <class K>
struct MobiusEquation {
  K a11, a12, a21, a22;

  K determinant() const { return a11 * a22 - a12 * a21; }
  bool admissible() const { return !a11.is_zero() && !a12.is_zero() && !determinant().is_zero(); }
  void require_admissible() const {
    if (!admissible()) throw ConditionViolation("Moebius equation needs a11 != 0, a12 != 0, a11 a22 - a12 a21 != 0");
  }
  /// Value at u, or nullopt when the denominator vanishes.
  std::optional<K> apply(const K& u) const {
    const K den = a21 * u - a22;
    if (den.is_zero()) return std::nullopt;
    return (a11 * u - a12) / den;
  }
  std::string to_string() const {
    return "(" + a11.to_string() + "," + a12.to_string() + "," + a21.to_string() + "," + a22.to_string() + ")";
  }
};

/// Number of u in G whose image lies in G; u with zero denominator are skipped.
template <class K>
u64 count_mobius(const MobiusEquation<K>& eq, const SubgroupSpec<K>& g) {
  eq.require_admissible();
  u64 count = 0;
  for (const auto& u : g.elements) {
    auto v = eq.apply(u);
    if (v && g.contains(*v)) ++count;
  }
  return count;
}

struct ScanRow {
  u64 p = 0;
  u64 t = 0;
  u64 samples = 0;
  u64 rejected = 0;  // resampled because the admissibility conditions failed
  u64 max_count = 0;
  MobiusEquation<FieldElement> argmax;
  std::map<u64, u64> histogram;  // count -> number of samples
};

struct ScanConfig {
  u64 p_min = 5;
  u64 p_max = 2000;
  double t_exponent = 0.5;  // t | p - 1 with t <= p^t_exponent
  u64 trials = 500;
  u64 seed = 0;
  unsigned threads = 1;
};

struct ScanReport {
  ScanConfig config;
  std::vector<ScanRow> rows;  // ordered by (p, t)
  u64 global_max = 0;
  std::size_t argmax_row = 0;
};

/// Random admissible equations per (p, t). Task i draws from its own generator
/// seeded by (seed, i), so the output does not depend on the thread count.
ScanReport conjecture_scan(const ScanConfig& cfg);

/// splitmix64 finalizer, used to derive per-task seeds.
u64 mix_seed(u64 seed, u64 index);

struct Sec6Member {
  std::string label;
  u64 value = 0;
  bool in_g = false;
  bool plus_one_in_g = false;
};

struct Sec6Report {
  u64 m = 0, n = 0, p = 0;
  std::vector<u64> primitive_divisors;
  u64 xi = 0;
  u64 xi_order = 0;
  u64 group_order = 0;
  u64 zeta4 = 0, zeta6 = 0, zeta6_conj = 0;
  std::vector<Sec6Member> d;  // the nine elements
  bool all_members_ok = false;
  bool eighth_roots_ok = false;  // ((+-zeta4 +- 1)/xi)^8 = 1
  bool cube_roots_ok = false;    // (zeta6 - 1)^3 = (zeta6' - 1)^3 = 1
  bool literal_minus_zeta6_minus_1_in_g = false;
  std::string readings;
  u64 mobius_count = 0;  // v = u + 1 on G
  std::vector<u64> mobius_solutions;
};

/// Builds the nine-element set for n = 24m and p the largest primitive prime
/// divisor of 2^n - 1. Throws NoQualifyingPrime when none is 1 mod 24.
Sec6Report sec6_construction(u64 m);

struct CosetReport {
  u64 p = 0, t = 0;
  u64 cosets = 0;  // (p-1)/t
  MobiusEquation<FieldElement> equation;
  u64 total = 0;  // N over (F_p^*)^2
  u64 best_count = 0;
  u64 a = 0, b = 0;
  u64 pigeonhole_floor = 0;  // ceil(N t^2 / (p-1)^2)
  MobiusEquation<FieldElement> rescaled;
  u64 rescaled_count = 0;  // count_mobius of the rescaled equation on G
  bool ok = false;
};

/// Scans all coset products aG x bG via a discrete-log table.
CosetReport pigeonhole_coset_demo(u64 p, u64 t, const MobiusEquation<FieldElement>& eq);

}  // namespace smk::subgrp
