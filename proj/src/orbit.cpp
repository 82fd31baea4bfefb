#include "smk/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "smk/parallel.hpp"

namespace smk::orbit {

std::vector<FieldElement> recurrence(const FieldElement& x, const FieldElement& y, const FieldElement& z,
                                     std::size_t length) {
  std::vector<FieldElement> u;
  u.reserve(length);
  const FieldElement s = x.scalar(3) * x;
  if (length >= 1) u.push_back(y);
  if (length >= 2) u.push_back(z);
  while (u.size() < length) u.push_back(s * u[u.size() - 1] - u[u.size() - 2]);
  return u;
}

u64 recurrence_period(const FieldElement& x, const FieldElement& y, const FieldElement& z) {
  const u64 p = x.modulus();
  const u64 s = 3 * x.value() % p;
  u64 a = y.value(), b = z.value();
  for (u64 n = 1; n <= p * p; ++n) {
    const u64 c = sub_mod(mul_mod(s, b, p), a, p);
    a = b;
    b = c;
    if (a == y.value() && b == z.value()) return n;
  }
  throw std::logic_error("recurrence did not return to its initial state");
}

RotationData rotation_data(const FieldElement& x, const numth::Factorization& p2_minus_1) {
  RotationData rd;
  rd.x = x;
  const RootInfo info = quad_roots(x.scalar(3) * x);
  rd.xi = info.xi;
  rd.xi_inv = info.xi_inv;
  rd.in_base_field = info.in_base_field;
  rd.degenerate = info.degenerate;
  rd.zero_x = x.is_zero();
  rd.t = mult_order(rd.xi, p2_minus_1.factors);
  return rd;
}

RotationData rotation_data(const FieldElement& x) {
  return rotation_data(x, numth::factorize_p2_minus_1(x.modulus()));
}

FieldElement r_value(const FieldElement& x) {
  const FieldElement den = x.scalar(9) * x * x - x.scalar(4);
  if (den.is_zero()) throw DegenerateRotation("r(x) has a pole at 9x^2 = 4");
  return x * x / den;
}

QuadExtElement r_from_xi(const QuadExtElement& xi) {
  const QuadExtElement one = xi.one();
  const QuadExtElement s = xi * xi;
  const QuadExtElement num = (s + one) * (s + one);
  const QuadExtElement den = xi.scalar(9) * (s - one) * (s - one);
  if (den.is_zero()) throw DegenerateRotation("r has a pole at xi^2 = 1");
  return num / den;
}

ZSet z_set(const FieldElement& x, const FieldElement& y, const FieldElement& z,
           const numth::Factorization& p2_minus_1) {
  if (x.is_zero()) throw ZeroX("Z(x) analytics exclude x = 0");
  ZSet zs;
  zs.seed = {x, y, z};
  zs.rot = rotation_data(x, p2_minus_1);
  if (zs.rot.degenerate) throw DegenerateRotation("xi = +-1 at x = " + x.to_string());
  zs.r = r_value(x);

  const u64 d = zs.rot.xi.d();
  const QuadExtElement xi = zs.rot.xi, xi_inv = zs.rot.xi_inv;
  const QuadExtElement ye = QuadExtElement::embed(y, d), ze = QuadExtElement::embed(z, d);
  const QuadExtElement det = xi_inv - xi;
  zs.alpha = (ye * xi_inv * xi_inv - ze * xi_inv) / det;
  zs.beta = (ze * xi - ye * xi * xi) / det;
  if (!(zs.alpha * zs.beta == QuadExtElement::embed(zs.r, d)))
    throw VerificationFailure("alpha * beta != r(x) at " + zs.seed.to_string());

  const auto seq = recurrence(x, y, z, zs.rot.t);
  std::map<u64, u64> mult;
  for (const auto& v : seq) ++mult[v.value()];
  for (const auto& [v, c] : mult) {
    zs.elements.push_back(v);
    zs.max_multiplicity = std::max(zs.max_multiplicity, c);
  }
  zs.period = recurrence_period(x, y, z);
  if (parametric_elements(zs) != zs.elements)
    throw VerificationFailure("parametric form of Z(x) disagrees with the sequence at " + zs.seed.to_string());
  return zs;
}

ZSet z_set(const FieldElement& x, const FieldElement& y, const FieldElement& z) {
  return z_set(x, y, z, numth::factorize_p2_minus_1(x.modulus()));
}

std::vector<u64> parametric_elements(const ZSet& zs) {
  const QuadExtElement r = QuadExtElement::embed(zs.r, zs.alpha.d());
  std::vector<u64> out;
  QuadExtElement u = zs.alpha.one();
  for (u64 k = 0; k < zs.rot.t; ++k) {
    const QuadExtElement au = zs.alpha * u;
    const QuadExtElement w = au + r / au;
    if (!w.in_base_field()) throw VerificationFailure("parametric value outside F_p");
    out.push_back(w.a_raw());
    u *= zs.rot.xi;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Fp2Poly intersection_poly(const ZSet& a, const ZSet& b) {
  if (a.r == b.r) throw EqualR("r(x) = r(x*) for x = " + a.rot.x.to_string() + ", x* = " + b.rot.x.to_string());
  const u64 d = a.alpha.d();
  const QuadExtElement al = a.alpha, as = b.alpha;
  const QuadExtElement r = QuadExtElement::embed(a.r, d), rs = QuadExtElement::embed(b.r, d);
  std::vector<Fp2Poly::Term> terms = {
      {{2, 1}, al * al * as},
      {{1, 2}, -(al * as * as)},
      {{1, 0}, -(al * rs)},
      {{0, 1}, as * r},
  };
  return Fp2Poly::from_terms(std::move(terms), al.zero());
}

subgrp::MobiusEquation<QuadExtElement> mobius_reduce(const ZSet& a, const ZSet& b) {
  if (a.r == b.r) throw EqualR("r(x) = r(x*)");
  const u64 d = a.alpha.d();
  const QuadExtElement al = a.alpha, as = b.alpha;
  const QuadExtElement r = QuadExtElement::embed(a.r, d), rs = QuadExtElement::embed(b.r, d);
  subgrp::MobiusEquation<QuadExtElement> eq{al * al * as, al * as * as, al * rs, as * r};
  eq.require_admissible();
  return eq;
}

AuditReport intersection_audit(const markoff::SurfaceIndex& idx, const AuditConfig& cfg) {
  const u64 p = idx.p();
  const auto comps = markoff::label_components(idx);
  const u32 cp = comps.label[*idx.id(1, 1, 1)];
  const auto f = numth::factorize_p2_minus_1(p);

  AuditReport rep;
  rep.p = p;
  rep.A = cfg.A;
  rep.component_size = comps.sizes[cp];

  // first point of the component above each x
  std::vector<std::optional<u32>> seed(p);
  for (u32 id = 0; id < idx.size(); ++id) {
    if (comps.label[id] != cp) continue;
    const u64 x = idx.raw(id)[0];
    if (!seed[x]) seed[x] = id;
  }

  std::vector<u64> period(p, 0);
  std::vector<char> nondegenerate(p, 0);
  for (u64 x = 0; x < p; ++x) {
    if (!seed[x]) continue;
    ++rep.M;
    const auto t = idx.triple(*seed[x]);
    period[x] = recurrence_period(t.x, t.y, t.z);
    const auto rd = rotation_data(t.x, f);
    nondegenerate[x] = !rd.degenerate && !rd.zero_x;
    if (!rd.degenerate && rd.t != period[x]) ++rep.period_order_mismatches;
    ++rep.g[period[x]];
  }
  for (const auto& [t, c] : rep.g) {
    rep.sum_g += c;
    rep.max_t = std::max(rep.max_t, t);
  }
  rep.sum_ok = rep.sum_g == rep.M;
  rep.tail_ok = rep.max_t <= 2 * rep.M;

  // L: t(x)^2 > 16 A M; L*: one representative of each pair +-x
  std::vector<u64> lstar;
  for (u64 x = 1; x < p; ++x) {
    if (!seed[x] || !nondegenerate[x]) continue;
    if (static_cast<u128>(period[x]) * period[x] <= static_cast<u128>(16) * cfg.A * rep.M) continue;
    ++rep.l_size;
    const u64 neg = p - x;
    const bool neg_in_l = seed[neg] && nondegenerate[neg] &&
                          static_cast<u128>(period[neg]) * period[neg] > static_cast<u128>(16) * cfg.A * rep.M;
    if (!neg_in_l || x < neg) lstar.push_back(x);
  }
  rep.lstar_size = lstar.size();
  const u64 n = lstar.size();
  rep.pairs_available = n * (n - 1) / 2;

  std::vector<std::pair<u64, u64>> pairs;
  if (rep.pairs_available <= cfg.max_pairs) {
    for (u64 i = 0; i < n; ++i)
      for (u64 j = i + 1; j < n; ++j) pairs.push_back({lstar[i], lstar[j]});
  } else {
    std::mt19937_64 rng(subgrp::mix_seed(cfg.seed, p));
    std::set<std::pair<u64, u64>> chosen;
    while (chosen.size() < cfg.max_pairs) {
      u64 i = rng() % n, j = rng() % n;
      if (i == j) continue;
      if (i > j) std::swap(i, j);
      chosen.insert({lstar[i], lstar[j]});
    }
    pairs.assign(chosen.begin(), chosen.end());
  }
  rep.pairs_sampled = pairs.size();

  // Z sets only for the x that occur in some pair
  std::vector<u64> needed;
  for (const auto& [a, b] : pairs) {
    needed.push_back(a);
    needed.push_back(b);
  }
  std::sort(needed.begin(), needed.end());
  needed.erase(std::unique(needed.begin(), needed.end()), needed.end());
  std::vector<std::vector<u64>> zsets(p);
  parallel_for(needed.size(), cfg.threads, [&](std::size_t k) {
    const u64 x = needed[k];
    const auto t = idx.triple(*seed[x]);
    zsets[x] = z_set(t.x, t.y, t.z, f).elements;
  });
  const auto sizes = parallel_map<u64>(pairs.size(), cfg.threads, [&](std::size_t k) {
    const auto& za = zsets[pairs[k].first];
    const auto& zb = zsets[pairs[k].second];
    u64 c = 0;
    for (std::size_t i = 0, j = 0; i < za.size() && j < zb.size();) {
      if (za[i] < zb[j]) {
        ++i;
      } else if (zb[j] < za[i]) {
        ++j;
      } else {
        ++c;
        ++i;
        ++j;
      }
    }
    return c;
  });
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    if (k == 0 || sizes[k] > rep.max_intersection) {
      rep.max_intersection = sizes[k];
      rep.argmax_x = pairs[k].first;
      rep.argmax_xstar = pairs[k].second;
    }
    if (sizes[k] > 2 * cfg.A) ++rep.pairs_above_2a;
  }
  return rep;
}

}  // namespace smk::orbit
