#include "smk/stepanov.hpp"

#include <algorithm>
#include <stdexcept>

#include "smk/parallel.hpp"

namespace smk::stepanov {

namespace {

// largest x >= 0 with x^3 * mult <= bound
u64 max_cube_under(u128 bound, u128 mult) {
  u64 lo = 0, hi = 1;
  auto fits = [&](u64 x) {
    const u128 c = static_cast<u128>(x) * x * x;
    return c <= bound / mult;
  };
  while (fits(hi)) hi *= 2;
  while (hi - lo > 1) {
    const u64 mid = lo + (hi - lo) / 2;
    (fits(mid) ? lo : hi) = mid;
  }
  return lo;
}

// Barrett reduction for p < 2^32, so that a*b + c stays below 2^64
struct Reducer {
  u64 p;
  u64 inv;
  explicit Reducer(u64 modulus) : p(modulus), inv(~u64{0} / modulus) {}
  u64 reduce(u64 x) const {
    const u64 q = static_cast<u64>((static_cast<u128>(x) * inv) >> 64);
    u64 r = x - q * p;
    while (r >= p) r -= p;
    return r;
  }
};

FieldElement fe(u64 v, u64 p) { return FieldElement(v % p, p); }

}  // namespace

bool StepanovParams::feasible() const {
  return std::all_of(checks.begin(), checks.end(), [](const ParamCheck& c) { return c.ok; });
}

StepanovParams derive_params(u64 t, u64 h, u64 m, u64 n, u64 g, u64 p) {
  if (t == 0 || h == 0 || m == 0 || n == 0 || g == 0) throw PreconditionFailure("t, h, m, n, g must be positive");
  if (!numth::is_prime(p)) throw PreconditionFailure(std::to_string(p) + " is not prime");
  StepanovParams s;
  s.p = p;
  s.t = t;
  s.h = h;
  s.m = m;
  s.n = n;
  s.g = g;
  const u128 t2 = static_cast<u128>(t) * t;
  s.A = max_cube_under(t2, static_cast<u128>(g) * g * g * h);
  s.B = s.C = max_cube_under(static_cast<u128>(h) * t, 1);
  const u128 k = 4 * static_cast<u128>(g) * m * n;
  s.D = max_cube_under(t2, k * k * k * h);
  s.unknowns = s.A * s.B * s.C;
  for (u64 kk = 0; kk < s.D; ++kk) s.L += h * m * n * (4 * kk * (m + n) + 2 * s.A + 1);
  s.sufficient_lhs = 2 * h * m * n * (s.A * s.D + (m + n) * s.D * s.D);
  s.psi_degree = (s.B + s.C - 1) * t;

  s.checks = {
      {"A >= 1", s.A >= 1},
      {"D >= 1", s.D >= 1},
      {"A < t", s.A < t},
      {"gAB <= t", g * s.A * s.B <= t},
      {"(B+C-1)t < p", s.B + s.C >= 1 && s.psi_degree < p},
      {"L < ABC", s.L < s.unknowns},
  };
  if (!s.feasible()) {
    std::string msg = "infeasible Stepanov parameters (A,B,C,D) = (" + std::to_string(s.A) + "," +
                      std::to_string(s.B) + "," + std::to_string(s.C) + "," + std::to_string(s.D) + "):";
    for (const auto& c : s.checks)
      if (!c.ok) msg += " " + c.name + " fails;";
    throw InfeasibleParams(msg);
  }
  return s;
}

std::vector<FpPoly> operator_multipliers(const FpPoly& P, u64 alpha, u64 beta, unsigned k) {
  const FieldElement zero = P.field();
  const u64 p = zero.modulus();
  const FieldElement al = fe(alpha, p), be = fe(beta, p);
  std::vector<FpPoly> R;
  R.push_back(FpPoly::constant(zero.one()));
  if (k == 0) return R;

  const FpPoly px = P.partial_x(), py = P.partial_y();
  const FpPoly pxy = px.partial_y(), pyy = py.partial_y();
  const FpPoly t1 = (py * py).shift(1, 1);
  const FpPoly t2 = (px * py).shift(1, 1);
  const FpPoly t3 = (py * py).shift(0, 1);
  const FpPoly t4 = (px * py).shift(1, 0);
  const FpPoly t5 = (pxy * py - pyy * px).shift(1, 1);

  R.push_back(py.shift(0, 1).scale(al) - px.shift(1, 0).scale(be));
  for (unsigned j = 1; j < k; ++j) {
    const FpPoly& r = R.back();
    const FieldElement jj = zero.scalar(j);
    const FpPoly mult = t3.scale(al - jj) - t4.scale(be - jj) - t5.scale(zero.scalar(2 * static_cast<i64>(j) - 1));
    R.push_back(t1 * r.partial_x() - t2 * r.partial_y() + r * mult);
  }
  return R;
}

namespace {

void check_lemma_bounds(const FpPoly& r, const StepanovParams& prm, unsigned k) {
  if (r.deg_x() > static_cast<int>(prm.A + 4 * k * prm.m) || r.deg_y() > static_cast<int>(prm.A + 4 * k * prm.n))
    throw std::logic_error("restricted operator polynomial exceeds its degree bound at k=" + std::to_string(k));
}

void check_curve(const FpPoly& P) {
  if (P.deg_x() < 1 || P.deg_y() < 1) throw PreconditionFailure("P must involve both X and Y");
  if (heuristic_irreducible(P) == Irreducibility::no) throw PreconditionFailure("P is reducible");
  if (sharp_part(P).monomials < 2) throw PreconditionFailure("P^sharp is a single monomial");
}

FieldElement grid_constant(const std::pair<FieldElement, FieldElement>& s, const StepanovParams& prm, u64 b, u64 c) {
  return s.first.pow(b * prm.t) * s.second.pow((c + 1) * prm.t);
}

}  // namespace

FpPoly basis_restriction(const FpPoly& P, const StepanovParams& prm, u64 a, u64 b, u64 c,
                         const std::pair<FieldElement, FieldElement>& scaling, unsigned k) {
  if (a >= prm.A || b >= prm.B || c >= prm.C || k >= prm.D) throw std::out_of_range("basis index out of range");
  const auto R = operator_multipliers(P, a + b * prm.t, (c + 1) * prm.t - a, k);
  const FpPoly out = R[k].shift(static_cast<u32>(a), static_cast<u32>(prm.A - 1 - a)).scale(grid_constant(scaling, prm, b, c));
  check_lemma_bounds(out, prm, k);
  return out;
}

LinearSystem build_system(const FpPoly& P, const std::vector<std::pair<FieldElement, FieldElement>>& scalings,
                          const StepanovParams& prm, unsigned threads) {
  if (!prm.feasible()) throw InfeasibleParams("build_system needs feasible parameters");
  if (scalings.empty()) throw PreconditionFailure("need at least one scaled copy (h >= 1)");
  if (scalings.size() != prm.h) throw PreconditionFailure("number of scalings differs from h");
  if (P.deg_x() != static_cast<int>(prm.m) || P.deg_y() != static_cast<int>(prm.n))
    throw PreconditionFailure("bi-degree of P differs from (m, n)");
  check_curve(P);

  const u64 p = prm.p;
  const FieldElement zero = P.field();
  const u32 n = static_cast<u32>(prm.n);
  const std::size_t ncols = prm.unknowns;

  // lc_Y(P) as a polynomial in X
  std::vector<FpPoly::Term> lc_terms;
  for (const auto& [mo, c] : P.terms())
    if (mo.j == n) lc_terms.push_back({{mo.i, 0}, c});
  const FpPoly lc = FpPoly::from_terms(lc_terms, zero);

  // Y^j reduced modulo P with the minimal multiplier, j <= nu_max
  const u64 nu_max = prm.A + 4 * (prm.D - 1) * prm.n;
  std::vector<FpPoly> V;
  std::vector<unsigned> e;
  for (u64 j = 0; j <= nu_max; ++j) {
    auto pd = pseudo_divide_y(FpPoly::monomial(0, static_cast<u32>(j), zero.one()), P);
    V.push_back(std::move(pd.remainder));
    e.push_back(pd.power);
  }
  std::vector<FpPoly> lc_pow{FpPoly::constant(zero.one())};

  // per k: U_j = lc^{delta_k - e_j} V_j, stored densely as [y-power < n][x-degree]
  struct Block {
    std::size_t width = 0;
    std::vector<std::vector<u64>> U;  // index j, flat n * width_u
    std::size_t width_u = 0;
  };
  std::vector<Block> blocks(prm.D);
  for (unsigned k = 0; k < prm.D; ++k) {
    const u64 nu = prm.A + 4 * k * prm.n;
    const u64 delta = nu + 1 > prm.n ? nu + 1 - prm.n : 0;
    while (lc_pow.size() <= delta) lc_pow.push_back(lc_pow.back() * lc);
    std::vector<FpPoly> U;
    int wx = 0;
    for (u64 j = 0; j <= nu; ++j) {
      U.push_back(lc_pow[delta - e[j]] * V[j]);
      wx = std::max(wx, U.back().deg_x());
    }
    Block& bl = blocks[k];
    bl.width_u = static_cast<std::size_t>(wx + 1);
    bl.width = bl.width_u + prm.A + 4 * k * prm.m;
    for (const auto& u : U) {
      std::vector<u64> dense(n * bl.width_u, 0);
      for (const auto& [mo, c] : u.terms()) dense[mo.j * bl.width_u + mo.i] = c.value();
      bl.U.push_back(std::move(dense));
    }
  }

  // column vectors per k, before the grid constants
  std::vector<std::vector<std::vector<u64>>> colvec(prm.D, std::vector<std::vector<u64>>(ncols));
  parallel_for(ncols, threads, [&](std::size_t col) {
    const u64 a = col / (prm.B * prm.C), b = (col / prm.C) % prm.B, c = col % prm.C;
    const auto R = operator_multipliers(P, a + b * prm.t, (c + 1) * prm.t - a, static_cast<unsigned>(prm.D - 1));
    for (unsigned k = 0; k < prm.D; ++k) {
      const Block& bl = blocks[k];
      std::vector<u64> out(n * bl.width, 0);
      check_lemma_bounds(R[k].shift(static_cast<u32>(a), static_cast<u32>(prm.A - 1 - a)), prm, k);
      for (const auto& [mo, cf] : R[k].terms()) {
        const std::size_t jy = mo.j + prm.A - 1 - a;
        const std::size_t sx = mo.i + a;
        const auto& u = bl.U.at(jy);
        for (u32 r = 0; r < n; ++r)
          for (std::size_t i = 0; i < bl.width_u; ++i) {
            const u64 v = u[r * bl.width_u + i];
            if (v == 0) continue;
            u64& dst = out[r * bl.width + sx + i];
            dst = add_mod(dst, mul_mod(v, cf.value(), p), p);
          }
      }
      colvec[k][col] = std::move(out);
    }
  });

  LinearSystem sys;
  sys.row_ceiling = prm.L;
  std::vector<std::vector<u64>> rows;
  for (const auto& s : scalings) {
    std::vector<u64> consts(ncols);
    for (std::size_t col = 0; col < ncols; ++col)
      consts[col] = grid_constant(s, prm, (col / prm.C) % prm.B, col % prm.C).value();
    for (unsigned k = 0; k < prm.D; ++k) {
      const std::size_t len = n * blocks[k].width;
      std::size_t emitted = 0;
      for (std::size_t r = 0; r < len; ++r) {
        std::vector<u64> row(ncols);
        bool nonzero = false;
        for (std::size_t col = 0; col < ncols; ++col) {
          row[col] = mul_mod(colvec[k][col][r], consts[col], p);
          nonzero |= row[col] != 0;
        }
        if (!nonzero) continue;
        rows.push_back(std::move(row));
        ++emitted;
      }
      const u64 ceiling = prm.m * prm.n * (4 * k * (prm.m + prm.n) + 2 * prm.A + 1);
      if (emitted > ceiling)
        throw std::logic_error("constraint rows at k=" + std::to_string(k) + " exceed the divisibility count");
      sys.block_rows.push_back(emitted);
    }
  }
  sys.matrix = Matrix(p, rows.size(), ncols);
  for (std::size_t r = 0; r < rows.size(); ++r) std::copy(rows[r].begin(), rows[r].end(), sys.matrix.data.begin() + r * ncols);
  return sys;
}

NullVector solve_nullspace(Matrix M) {
  const u64 p = M.p;
  if (M.cols == 0) throw FullRank("no unknowns");
  const bool fast = p < (u64{1} << 32);
  const Reducer red(fast ? p : 3);

  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t col = 0; col < M.cols && r < M.rows; ++col) {
    std::size_t piv = r;
    while (piv < M.rows && M.at(piv, col) == 0) ++piv;
    if (piv == M.rows) continue;
    if (piv != r)
      std::swap_ranges(M.data.begin() + piv * M.cols, M.data.begin() + (piv + 1) * M.cols, M.data.begin() + r * M.cols);
    u64* prow = &M.data[r * M.cols];
    const u64 inv = inv_mod(prow[col], p);
    for (std::size_t j = col; j < M.cols; ++j) prow[j] = mul_mod(prow[j], inv, p);
    for (std::size_t i = r + 1; i < M.rows; ++i) {
      u64* row = &M.data[i * M.cols];
      if (row[col] == 0) continue;
      const u64 f = neg_mod(row[col], p);
      if (fast) {
        for (std::size_t j = col; j < M.cols; ++j) row[j] = red.reduce(row[j] + f * prow[j]);
      } else {
        for (std::size_t j = col; j < M.cols; ++j) row[j] = add_mod(row[j], mul_mod(f, prow[j], p), p);
      }
    }
    pivot_col.push_back(col);
    ++r;
  }

  NullVector out;
  out.rank = pivot_col.size();
  if (out.rank == M.cols) throw FullRank("constraint matrix has full column rank " + std::to_string(M.cols));
  std::size_t f = 0;
  for (std::size_t q = 0; q < pivot_col.size() && pivot_col[q] == f; ++q) ++f;
  out.free_column = f;
  out.x.assign(M.cols, 0);
  out.x[f] = 1;
  for (std::size_t q = pivot_col.size(); q-- > 0;) {
    const std::size_t pc = pivot_col[q];
    u64 acc = 0;
    for (std::size_t j = pc + 1; j < M.cols; ++j)
      if (out.x[j] != 0) acc = add_mod(acc, mul_mod(M.at(q, j), out.x[j], p), p);
    out.x[pc] = neg_mod(acc, p);
  }
  return out;
}

FpPoly assemble_psi(const std::vector<u64>& w, const StepanovParams& prm) {
  if (w.size() != prm.unknowns) throw std::invalid_argument("coefficient vector has the wrong length");
  if (prm.A >= prm.t) throw PreconditionFailure("need A < t");
  std::vector<FpPoly::Term> terms;
  for (std::size_t col = 0; col < w.size(); ++col) {
    if (w[col] % prm.p == 0) continue;
    const u64 a = col / (prm.B * prm.C), b = (col / prm.C) % prm.B, c = col % prm.C;
    terms.push_back({{static_cast<u32>(a + b * prm.t), static_cast<u32>((c + 1) * prm.t - a)}, fe(w[col], prm.p)});
  }
  if (terms.empty()) throw ZeroPsi("all coefficients of Phi vanish");
  return FpPoly::from_terms(std::move(terms), FieldElement(0, prm.p));
}

std::vector<FieldElement> taylor_along_curve(const FpPoly& P, const FpPoly& psi, const FieldElement& x0,
                                             const FieldElement& y0, unsigned order) {
  const FieldElement zero = P.field();
  if (order == 0) return {};
  if (order >= zero.modulus()) throw PreconditionFailure("expansion order must stay below p");
  if (!P.eval(x0, y0).is_zero()) throw PreconditionFailure("point is not on the curve");
  if (x0.is_zero() || y0.is_zero() || P.partial_y().eval(x0, y0).is_zero())
    throw PreconditionFailure("point lies in the singular locus");

  using Series = std::vector<FieldElement>;
  auto mul = [&](const Series& f, const Series& g) {
    Series h(order, zero);
    for (unsigned i = 0; i < order; ++i)
      if (!f[i].is_zero())
        for (unsigned j = 0; i + j < order; ++j) h[i + j] += f[i] * g[j];
    return h;
  };

  // y(x0 + s) = sum y_l s^l with y_l = (q_l / r_l)(x0, y0) / l!
  Series ys(order, zero);
  ys[0] = y0;
  FieldElement fact = zero.one();
  if (order > 1) {
    const auto cd = curve_derivatives(P, order - 1);
    for (unsigned l = 1; l < order; ++l) {
      fact *= zero.scalar(l);
      ys[l] = cd[l - 1].q.eval(x0, y0) / (cd[l - 1].r.eval(x0, y0) * fact);
    }
  }
  // Y^j = y0^j (1 + w)^j with w = (y - y0) / y0
  Series w(order, zero);
  const FieldElement y0inv = y0.inv();
  for (unsigned l = 1; l < order; ++l) w[l] = ys[l] * y0inv;
  std::vector<Series> wpow{Series(order, zero)};
  wpow[0][0] = zero.one();
  for (unsigned l = 1; l < order; ++l) wpow.push_back(mul(wpow.back(), w));
  std::vector<FieldElement> inv_l(order, zero);
  for (unsigned l = 1; l < order; ++l) inv_l[l] = zero.scalar(l).inv();

  auto binoms = [&](u64 e) {
    Series b(order, zero);
    b[0] = zero.one();
    for (unsigned l = 1; l < order; ++l) b[l] = b[l - 1] * zero.scalar(static_cast<i64>(e) - l + 1) * inv_l[l];
    return b;
  };

  Series total(order, zero);
  for (const auto& [mo, c] : psi.terms()) {
    const Series bx = binoms(mo.i), by = binoms(mo.j);
    Series xs(order, zero), yser(order, zero);
    for (unsigned l = 0; l < order && l <= mo.i; ++l) xs[l] = bx[l] * x0.pow(mo.i - l);
    for (unsigned l = 0; l < order; ++l)
      if (!by[l].is_zero())
        for (unsigned q = 0; q < order; ++q) yser[q] += by[l] * wpow[l][q];
    const FieldElement scale = c * y0.pow(mo.j);
    const Series prod = mul(xs, yser);
    for (unsigned l = 0; l < order; ++l) total[l] += scale * prod[l];
  }
  return total;
}

std::string CertificateReport::failed_stage() const {
  if (!psi_nonzero) return "psi_nonzero";
  if (!coprime_with_P) return "coprime_with_P";
  if (!vanishing_verified) return "vanishing";
  if (!bound_ok) return "bezout_bound";
  return "";
}

CertificateReport verify_certificate(const FpPoly& P, const std::vector<std::pair<FieldElement, FieldElement>>& scalings,
                                     const subgrp::SubgroupSpec<FieldElement>& G, const FpPoly& psi,
                                     const StepanovParams& prm, bool strict, unsigned threads) {
  CertificateReport rep;
  rep.params = prm;
  rep.psi_nonzero = !psi.is_zero();
  const u64 p = prm.p;

  // (i) P does not divide Psi, witnessed at one specialization X = x0
  if (rep.psi_nonzero) {
    for (u64 x = 0; x < p && !rep.coprime_with_P; ++x) {
      const auto f = P.specialize_x(FieldElement(x, p));
      if (f.degree() != P.deg_y()) continue;
      if (!psi.specialize_x(FieldElement(x, p)).divmod(f).second.is_zero()) {
        rep.coprime_with_P = true;
        rep.coprime_witness_x = x;
      }
    }
  }
  if (heuristic_irreducible(P) != Irreducibility::yes)
    rep.warnings.push_back("irreducibility of P not decided; P not dividing Psi implies coprimality only for irreducible P");
  if (prm.sufficient_lhs >= prm.unknowns)
    rep.warnings.push_back("t is small: 2hmn(AD+(m+n)D^2) >= ABC, solvability rests on the exact count L");

  // (ii) vanishing at every solution off M_sing, (iii) the count
  const auto sing = singular_locus(P);
  rep.m_sing = sing.points.size();
  rep.bezout_bound = (prm.m + prm.n) * prm.psi_degree / prm.D + rep.m_sing;

  std::vector<std::pair<FieldElement, FieldElement>> points;
  for (const auto& [lam, mu] : scalings) {
    const FpPoly Pi = P.substitute_scale(lam, mu);
    for (const auto& u : G.elements) {
      const auto f = Pi.specialize_x(u);
      for (const auto& v : G.elements)
        if (f.is_zero() || f.eval(v).is_zero()) points.push_back({lam * u, mu * v});
    }
  }
  rep.brute_count = points.size();
  rep.bound_ok = rep.brute_count <= rep.bezout_bound;

  const auto ok = parallel_map<char>(points.size(), threads, [&](std::size_t i) -> char {
    const auto& [x, y] = points[i];
    if (sing.contains(x, y)) return 2;
    const auto series = taylor_along_curve(P, psi, x, y, static_cast<unsigned>(prm.D));
    return std::all_of(series.begin(), series.end(), [](const FieldElement& c) { return c.is_zero(); }) ? 1 : 0;
  });
  rep.vanishing_verified = rep.psi_nonzero;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (ok[i] == 2) {
      ++rep.solutions_singular;
      continue;
    }
    ++rep.solutions_checked;
    if (ok[i] == 0 && rep.vanishing_verified) {
      rep.vanishing_verified = false;
      rep.first_failure = std::pair{points[i].first.value(), points[i].second.value()};
    }
  }
  if (strict && !rep.verified()) throw VerificationFailure("Stepanov certificate failed at stage " + rep.failed_stage());
  return rep;
}

CertificateReport certify(const FpPoly& P, u64 p, u64 t, std::vector<std::pair<FieldElement, FieldElement>> scalings,
                          bool strict, unsigned threads) {
  if (P.is_zero() || P.field().modulus() != p) throw PreconditionFailure("P must be a nonzero polynomial over F_p");
  check_curve(P);
  if (scalings.empty()) scalings.push_back({FieldElement(1, p), FieldElement(1, p)});
  const auto G = subgrp::build_subgroup(p, t);
  for (std::size_t i = 0; i < scalings.size(); ++i)
    for (std::size_t j = i + 1; j < scalings.size(); ++j)
      if (!subgrp::g_independent(P.substitute_scale(scalings[i].first, scalings[i].second),
                                 P.substitute_scale(scalings[j].first, scalings[j].second), G))
        throw PreconditionFailure("scaled copies " + std::to_string(i) + " and " + std::to_string(j) +
                                  " are not G-independent");

  const auto prm = derive_params(t, scalings.size(), static_cast<u64>(P.deg_x()), static_cast<u64>(P.deg_y()),
                                 g_invariant(P).g, p);
  const auto sys = build_system(P, scalings, prm, threads);
  const auto nv = solve_nullspace(sys.matrix);
  const FpPoly psi = assemble_psi(nv.x, prm);
  auto rep = verify_certificate(P, scalings, G, psi, prm, strict, threads);
  rep.phi_coeffs = nv.x;
  rep.system_rows = sys.matrix.rows;
  rep.system_rank = nv.rank;
  return rep;
}

}  // namespace smk::stepanov
