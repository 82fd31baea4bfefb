#include "smk/subgrp.hpp"

#include <cmath>
#include <random>
#include <set>

#include "smk/parallel.hpp"

namespace smk::subgrp {

std::string to_string(Ambient a) { return a == Ambient::Fp ? "Fp" : "Fp2"; }

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::within_bound: return "within_bound";
    case Verdict::violation: return "violation";
    case Verdict::outside_window: return "outside_window";
  }
  return "?";
}

namespace {

template <class K>
SubgroupSpec<K> materialize(Ambient amb, u64 p, u64 t, const K& gen) {
  if (t > kMaxMaterialized) throw TooLarge("subgroup of order " + std::to_string(t) + " is too large to list");
  SubgroupSpec<K> g;
  g.ambient = amb;
  g.p = p;
  g.order = t;
  g.generator = gen;
  g.elements.reserve(t);
  K cur = gen.one();
  for (u64 k = 0; k < t; ++k) {
    g.elements.push_back(cur);
    cur *= gen;
  }
  if (!cur.is_one()) throw std::logic_error("generator does not have the requested order");
  std::sort(g.elements.begin(), g.elements.end());
  if (std::adjacent_find(g.elements.begin(), g.elements.end()) != g.elements.end())
    throw std::logic_error("generator order is smaller than requested");
  return g;
}

}  // namespace

SubgroupSpec<FieldElement> build_subgroup(u64 p, u64 t) {
  if (t == 0 || (p - 1) % t != 0)
    throw NonDivisorOrder(std::to_string(t) + " does not divide p - 1 = " + std::to_string(p - 1));
  const FieldElement gamma(numth::primitive_root(p), p);
  return materialize(Ambient::Fp, p, t, gamma.pow((p - 1) / t));
}

QuadExtElement primitive_element_ext(u64 p) {
  const u64 d = smallest_nonresidue(p);
  const auto f = numth::factorize_p2_minus_1(p);
  const u64 order = p * p - 1;
  for (u64 b = 1; b < p; ++b) {
    for (u64 a = 0; a < p; ++a) {
      const QuadExtElement x(a, b, d, p);
      bool ok = true;
      for (const auto& pp : f.factors) {
        if (x.pow(order / pp.prime).is_one()) {
          ok = false;
          break;
        }
      }
      if (ok) return x;
    }
  }
  throw std::logic_error("no primitive element of F_{p^2}");
}

SubgroupSpec<QuadExtElement> build_subgroup_ext(u64 p, u64 t) {
  const u64 order = p * p - 1;
  if (t == 0 || order % t != 0)
    throw NonDivisorOrder(std::to_string(t) + " does not divide p^2 - 1 = " + std::to_string(order));
  return materialize(Ambient::Fp2, p, t, primitive_element_ext(p).pow(order / t));
}

namespace {

using i128 = __int128;

u64 icbrt_ceil(i128 v) {
  u64 lo = 0, hi = 1;
  while (static_cast<i128>(hi) * hi * hi < v) hi <<= 1;
  while (lo < hi) {
    const u64 mid = lo + (hi - lo) / 2;
    if (static_cast<i128>(mid) * mid * mid >= v)
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

u128 mul_sat(u128 a, u128 b) {
  if (a != 0 && b > ~u128{0} / a) return ~u128{0};
  return a * b;
}

}  // namespace

Bound theorem_bound(u64 m, u64 n, u64 g, u64 h, u64 t) {
  Bound b;
  b.coefficient = 12 * m * n * (m + n) * g;
  const i128 k = b.coefficient;
  const i128 ht = static_cast<i128>(h) * t;
  const long double approx = static_cast<long double>(k) * std::cbrt(static_cast<long double>(ht) * ht);
  if (approx > 1e36L) throw RangeTooLarge("subgroup bound exceeds exact range");
  b.ceil_value = icbrt_ceil(k * k * k * ht * ht);
  b.value = static_cast<double>(approx);
  return b;
}

bool reaches_bound(u64 count, const Bound& b) { return count >= b.ceil_value; }

bool in_window(u64 p, u64 h, u64 t) {
  if (t < h * h) return false;
  const u128 lhs = mul_sat(mul_sat(mul_sat(mul_sat(16, t), t), mul_sat(t, t)), h);
  const u128 rhs = mul_sat(mul_sat(p, p), p);
  if (lhs == ~u128{0} || rhs == ~u128{0}) {
    const long double tl = t;
    return 16.0L * tl * tl * tl * tl * h <= static_cast<long double>(p) * p * p;
  }
  return lhs <= rhs;
}

TheoremReport check_theorem(const FpPoly& poly, const std::vector<std::pair<FieldElement, FieldElement>>& scalings,
                            const SubgroupSpec<FieldElement>& g) {
  if (scalings.empty()) throw PreconditionFailure("need at least one scaled copy (h >= 1)");
  const auto sharp = sharp_part(poly);
  if (sharp.monomials < 2) throw PreconditionFailure("lowest homogeneous part is a single monomial");
  TheoremReport rep;
  rep.p = g.p;
  rep.t = g.order;
  rep.h = scalings.size();
  rep.m = static_cast<u64>(std::max(poly.deg_x(), 0));
  rep.n = static_cast<u64>(std::max(poly.deg_y(), 0));
  rep.g = g_invariant(poly).g;
  rep.irreducible = heuristic_irreducible(poly);
  if (rep.irreducible == Irreducibility::no) throw PreconditionFailure("polynomial is reducible");
  if (rep.irreducible == Irreducibility::unknown) rep.warnings.push_back("irreducibility not certified");

  std::vector<FpPoly> family;
  for (const auto& [l, m] : scalings) {
    if (l.is_zero() || m.is_zero()) throw PreconditionFailure("scaling constants must be nonzero");
    family.push_back(poly.substitute_scale(l, m));
  }
  for (std::size_t i = 0; i < family.size(); ++i)
    for (std::size_t j = i + 1; j < family.size(); ++j)
      if (!g_independent(family[i], family[j], g))
        throw PreconditionFailure("copies " + std::to_string(i) + " and " + std::to_string(j) + " are not G-independent");

  for (const auto& f : family) {
    rep.counts.push_back(count_poly_solutions(f, g, g));
    rep.total += rep.counts.back();
  }
  rep.bound = theorem_bound(rep.m, rep.n, rep.g, rep.h, rep.t);
  rep.window = in_window(rep.p, rep.h, rep.t);
  if (!rep.window)
    rep.verdict = Verdict::outside_window;
  else if (reaches_bound(rep.total, rep.bound))
    rep.verdict = Verdict::violation;
  else
    rep.verdict = Verdict::within_bound;
  return rep;
}

std::vector<std::string> default_theorem_family() {
  return {"1,1,1;1,0,1;0,1,1", "2,1,1;1,2,-2;1,0,-3;0,1,5", "2,1,2;1,2,1;1,0,1;0,1,-4"};
}

TheoremScanReport theorem_scan(const TheoremScanConfig& cfg) {
  TheoremScanReport rep;
  rep.config = cfg;
  const auto primes = numth::primes_in_range(std::max<u64>(cfg.p_min, 3), cfg.p_max);
  std::vector<std::vector<TheoremScanRow>> per_prime(primes.size());
  parallel_for(primes.size(), cfg.threads, [&](std::size_t i) {
    const u64 p = primes[i];
    std::vector<FpPoly> polys;
    for (const auto& text : cfg.family) polys.push_back(parse_poly(text, p));
    for (u64 t : numth::factorize(p - 1).divisors()) {
      const auto g = build_subgroup(p, t);
      const std::vector<std::pair<FieldElement, FieldElement>> one{{FieldElement(1, p), FieldElement(1, p)}};
      for (std::size_t k = 0; k < polys.size(); ++k) {
        TheoremScanRow row;
        row.p = p;
        row.t = t;
        row.poly_index = k;
        if (heuristic_irreducible(polys[k]) == Irreducibility::no) {
          row.status = "skipped";
        } else {
          row.report = check_theorem(polys[k], one, g);
          row.status = to_string(row.report.verdict);
        }
        per_prime[i].push_back(std::move(row));
      }
    }
  });
  for (auto& rows : per_prime)
    for (auto& row : rows) {
      if (row.status == "skipped") ++rep.skipped;
      if (row.report.window && row.status != "skipped") ++rep.in_window;
      if (row.status == "violation") ++rep.violations;
      rep.rows.push_back(std::move(row));
    }
  return rep;
}

u64 mix_seed(u64 seed, u64 index) {
  u64 z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

ScanReport conjecture_scan(const ScanConfig& cfg) {
  struct Task {
    u64 p, t;
  };
  std::vector<Task> tasks;
  for (u64 p : numth::primes_in_range(std::max<u64>(cfg.p_min, 3), cfg.p_max)) {
    const double cap = cfg.t_exponent * std::log(static_cast<double>(p)) + 1e-12;
    for (u64 t : numth::factorize(p - 1).divisors())
      if (std::log(static_cast<double>(t)) <= cap) tasks.push_back({p, t});
  }

  ScanReport rep;
  rep.config = cfg;
  rep.rows.resize(tasks.size());
  parallel_for(tasks.size(), cfg.threads, [&](std::size_t i) {
    const auto [p, t] = tasks[i];
    const auto g = build_subgroup(p, t);
    std::mt19937_64 rng(mix_seed(cfg.seed, i));
    auto draw = [&] { return FieldElement(rng() % p, p); };
    ScanRow row;
    row.p = p;
    row.t = t;
    row.argmax = {draw().one(), draw().one(), draw().zero(), draw().one()};
    bool first = true;
    while (row.samples < cfg.trials) {
      MobiusEquation<FieldElement> eq{draw(), draw(), draw(), draw()};
      if (!eq.admissible()) {
        ++row.rejected;
        continue;
      }
      ++row.samples;
      const u64 c = count_mobius(eq, g);
      ++row.histogram[c];
      if (first || c > row.max_count) {
        row.max_count = c;
        row.argmax = eq;
        first = false;
      }
    }
    rep.rows[i] = std::move(row);
  });
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    if (rep.rows[i].max_count > rep.global_max) {
      rep.global_max = rep.rows[i].max_count;
      rep.argmax_row = i;
    }
  }
  return rep;
}

Sec6Report sec6_construction(u64 m) {
  Sec6Report rep;
  rep.m = m;
  rep.n = 24 * m;
  if (m == 0 || rep.n > numth::kMaxMersenneExponent)
    throw RangeTooLarge("2^(24m) - 1 must be factorable: m = 1 is the only supported value");
  rep.primitive_divisors = numth::primitive_prime_divisors(static_cast<unsigned>(rep.n));
  if (rep.primitive_divisors.empty() || rep.primitive_divisors.back() % 24 != 1)
    throw NoQualifyingPrime("largest primitive prime divisor of 2^" + std::to_string(rep.n) + " - 1 is not 1 mod 24");
  const u64 p = rep.p = rep.primitive_divisors.back();
  const auto f = numth::factorize(p - 1);

  // the root of 2 that generates a group of order 2n; the smaller one on a tie
  std::optional<FieldElement> xi;
  for (const auto& r : sqrt_mod(FieldElement(2, p))) {
    if (mult_order(r, f.factors) == 2 * rep.n) {
      xi = r;
      break;
    }
  }
  if (!xi) throw NoQualifyingPrime("no square root of 2 has order 2n modulo " + std::to_string(p));
  rep.xi = xi->value();
  rep.xi_order = mult_order(*xi, f.factors);

  SubgroupSpec<FieldElement> g = build_subgroup(p, 2 * rep.n);
  rep.group_order = g.elements.size();
  if (!g.contains(*xi)) throw std::logic_error("xi outside the subgroup of order 2n");

  const FieldElement one(1, p);
  const FieldElement z4 = xi->pow(2 * rep.n / 4);
  const FieldElement z6 = xi->pow(2 * rep.n / 6);
  const FieldElement z6c = z6.inv();
  rep.zeta4 = z4.value();
  rep.zeta6 = z6.value();
  rep.zeta6_conj = z6c.value();

  const std::vector<std::pair<std::string, FieldElement>> d = {
      {"(p-1)/2 = -1/2", FieldElement(2, p).inv() * FieldElement::from_int(-1, p)},
      {"1", one},
      {"-2", FieldElement::from_int(-2, p)},
      {"zeta4", z4},
      {"-zeta4", -z4},
      {"zeta4-1", z4 - one},
      {"-zeta4-1", -z4 - one},
      {"zeta6-1", z6 - one},
      {"conj(zeta6)-1", z6c - one},
  };
  rep.all_members_ok = true;
  for (const auto& [label, x] : d) {
    Sec6Member mbr{label, x.value(), g.contains(x), g.contains(x + one)};
    rep.all_members_ok = rep.all_members_ok && mbr.in_g && mbr.plus_one_in_g;
    rep.d.push_back(mbr);
  }

  rep.eighth_roots_ok = true;
  for (const auto& a : {z4, -z4})
    for (const auto& b : {one, -one}) rep.eighth_roots_ok = rep.eighth_roots_ok && ((a + b) / *xi).pow(8).is_one();
  rep.cube_roots_ok = (z6 - one).pow(3).is_one() && (z6c - one).pow(3).is_one();
  rep.literal_minus_zeta6_minus_1_in_g = g.contains(-z6 - one) || g.contains(-z6c - one);
  rep.readings =
      "(p-1/2) read as (p-1)/2 = -1/2 mod p; +-zeta6 read as the two primitive sixth roots zeta6 and 1/zeta6 "
      "(the literal -zeta6-1 is " +
      std::string(rep.literal_minus_zeta6_minus_1_in_g ? "" : "not ") + "in G)";

  const MobiusEquation<FieldElement> eq{one, -one, one.zero(), -one};
  rep.mobius_count = count_mobius(eq, g);
  for (const auto& u : g.elements)
    if (auto v = eq.apply(u); v && g.contains(*v)) rep.mobius_solutions.push_back(u.value());
  return rep;
}

CosetReport pigeonhole_coset_demo(u64 p, u64 t, const MobiusEquation<FieldElement>& eq) {
  if (t == 0 || (p - 1) % t != 0) throw NonDivisorOrder(std::to_string(t) + " does not divide p - 1");
  if (p > 10'000'000) throw TooLarge("coset demo needs a discrete-log table of size p");
  eq.require_admissible();
  CosetReport rep;
  rep.p = p;
  rep.t = t;
  rep.equation = eq;
  const u64 k = rep.cosets = (p - 1) / t;
  if (k * k > 100'000'000) throw TooLarge("too many coset pairs");

  // coset index of x = discrete log of x modulo k; coset i is g^i G
  const u64 gamma = numth::primitive_root(p);
  std::vector<u64> coset(p, 0);
  u64 v = 1;
  for (u64 e = 0; e < p - 1; ++e) {
    coset[v] = e % k;
    v = mul_mod(v, gamma, p);
  }
  std::vector<u64> counts(k * k, 0);
  for (u64 u = 1; u < p; ++u) {
    auto w = eq.apply(FieldElement(u, p));
    if (!w || w->is_zero()) continue;
    ++counts[coset[u] * k + coset[w->value()]];
    ++rep.total;
  }
  const auto best = std::max_element(counts.begin(), counts.end());
  rep.best_count = *best;
  const u64 i = static_cast<u64>(best - counts.begin()) / k, j = static_cast<u64>(best - counts.begin()) % k;
  rep.a = pow_mod(gamma, i, p);
  rep.b = pow_mod(gamma, j, p);
  rep.pigeonhole_floor = (rep.total * t * t + (p - 1) * (p - 1) - 1) / ((p - 1) * (p - 1));

  const FieldElement a(rep.a, p), b_inv = FieldElement(rep.b, p).inv();
  rep.rescaled = {eq.a11 * a * b_inv, eq.a12 * b_inv, eq.a21 * a, eq.a22};
  rep.rescaled_count = count_mobius(rep.rescaled, build_subgroup(p, t));
  rep.ok = rep.best_count >= rep.pigeonhole_floor && rep.rescaled_count == rep.best_count;
  return rep;
}

}  // namespace smk::subgrp
