#include <random>
#include <set>

#include "doctest.h"
#include "smk/poly.hpp"

using namespace smk;

namespace {

FpPoly P(const std::string& s, u64 p) { return parse_poly(s, p); }

FpPoly random_poly(std::mt19937_64& rng, u64 p, u32 max_i, u32 max_j, int terms) {
  std::vector<FpPoly::Term> t;
  for (int k = 0; k < terms; ++k)
    t.push_back({{static_cast<u32>(rng() % (max_i + 1)), static_cast<u32>(rng() % (max_j + 1))},
                 FieldElement(rng() % p, p)});
  return FpPoly::from_terms(std::move(t), FieldElement(0, p));
}

}  // namespace

TEST_CASE("poly_arith examples") {
  const u64 p = 7;
  CHECK(P("2,1,1", p).partial_y() == P("2,0,1", p));
  CHECK(P("1,1,1", p).substitute_scale(FieldElement(2, p), FieldElement(3, p)) == P("1,1,6", p));
  CHECK(P("2,1,1;1,0,1", 5).eval(FieldElement(1, 5), FieldElement(1, 5)).value() == 2);
  CHECK_THROWS_AS(P("1,0,1", 5) + P("1,0,1", 7), ModulusMismatch);
}

TEST_CASE("parse and format") {
  auto f = P("1,1,1;1,0,1;0,1,1", 97);
  CHECK(f.num_terms() == 3);
  CHECK(format_poly(f) == "0,1,1;1,0,1;1,1,1");
  CHECK(P("1,0,-1", 7).coeff(1, 0).value() == 6);
  CHECK_THROWS_AS(P("1,1,1;1,1,2", 7), ParseError);
  CHECK_THROWS_AS(P("1,1", 7), ParseError);
  CHECK_THROWS_AS(P("a,1,1", 7), ParseError);
  CHECK_THROWS_AS(P("-1,1,1", 7), ParseError);
}

TEST_CASE("sharp part and g invariant") {
  const u64 p = 101;
  auto a = sharp_part(P("2,1,1;1,0,1", p));
  CHECK(a.d_sharp == 1);
  CHECK(a.p_sharp == P("1,0,1", p));

  auto b = sharp_part(P("1,1,1;1,0,1;0,1,1", p));
  CHECK(b.d_sharp == 1);
  CHECK(b.monomials == 2);
  CHECK(b.p_sharp == P("1,0,1;0,1,1", p));

  auto c = sharp_part(P("2,1,1;1,2,-1;1,0,-1;0,1,1", p));
  CHECK(c.p_sharp == P("1,0,-1;0,1,1", p));
  CHECK_THROWS_AS(sharp_part(FpPoly(FieldElement(0, p))), ZeroPolynomial);

  CHECK(g_invariant(P("2,1,1;1,0,1", p)).g == 2);
  CHECK(g_invariant(P("2,1,1;1,2,-1;1,0,-1;0,1,1", p)).g == 2);
  CHECK(g_invariant(P("1,1,1;1,0,1;0,1,1", p)).g == 1);
  auto single = g_invariant(P("3,3,1", p));
  CHECK(single.single_term);
  CHECK(single.g == 0);
}

TEST_CASE("pseudo_divide_y") {
  const u64 p = 97;
  auto f = P("1,1,1;1,0,1;0,1,1", p);
  CHECK(pseudo_divide_y(f, f).remainder.is_zero());

  auto r = pseudo_divide_y(P("0,1,1", p), P("0,1,1;1,0,-1", p));
  CHECK(r.remainder == P("1,0,1", p));

  // (XY+X+Y)(X+Y) + 1: independent oracle, reduce Y = -X/(X+1) by hand:
  // lc = X+1, delta = 2, remainder = (X+1)^2 after clearing
  auto q = f * P("1,0,1;0,1,1", p) + P("0,0,1", p);
  auto pd = pseudo_divide_y(q, f);
  CHECK(pd.power == 2);
  CHECK(pd.remainder.deg_y() <= 0);
  CHECK(pd.remainder == P("2,0,1;1,0,2;0,0,1", p));

  CHECK_THROWS_AS(pseudo_divide_y(f, FpPoly(FieldElement(0, p))), ZeroDivisor);
}

TEST_CASE("pseudo division reconstruction on random instances") {
  std::mt19937_64 rng(11);
  for (int it = 0; it < 200; ++it) {
    const u64 p = 101;
    auto d = random_poly(rng, p, 3, 3, 5);
    if (d.deg_y() < 1) continue;
    auto q = random_poly(rng, p, 4, 6, 8);
    auto pd = pseudo_divide_y(q, d);
    std::vector<FpPoly::Term> lc_terms;
    for (const auto& [m, c] : d.terms())
      if (static_cast<int>(m.j) == d.deg_y()) lc_terms.push_back({{m.i, 0}, c});
    auto lc = FpPoly::from_terms(lc_terms, FieldElement(0, p));
    auto lhs = FpPoly::constant(FieldElement(1, p));
    for (unsigned k = 0; k < pd.power; ++k) lhs = lhs * lc;
    CHECK(lhs * q == pd.quotient * d + pd.remainder);
    CHECK(pd.remainder.deg_y() < d.deg_y());
  }
}

TEST_CASE("curve_derivative examples") {
  const u64 p = 97;
  auto a = curve_derivative(P("0,1,1;1,0,-1", p), 1);
  CHECK(a.q == P("0,0,1", p));
  CHECK(a.r == P("0,0,1", p));

  auto b1 = curve_derivative(P("0,1,1;2,0,-1", p), 1);
  CHECK(b1.q == P("1,0,2", p));
  CHECK(b1.r == P("0,0,1", p));
  auto b2 = curve_derivative(P("0,1,1;2,0,-1", p), 2);
  CHECK(b2.q == P("0,0,2", p));

  auto c = curve_derivative(P("1,1,1;1,0,1;0,1,1", p), 1);
  CHECK(c.q == P("0,1,-1;0,0,-1", p));
  CHECK(c.r == P("1,0,1;0,0,1", p));
}

TEST_CASE("curve derivatives of graph curves match direct differentiation") {
  // P = Y - f(X): d^k Y / dX^k = f^(k)(X)
  std::mt19937_64 rng(5);
  const u64 p = 1009;
  const FieldElement zero(0, p);
  for (int it = 0; it < 30; ++it) {
    const int deg = 1 + static_cast<int>(rng() % 4);
    std::vector<FieldElement> fc;
    for (int i = 0; i <= deg; ++i) fc.emplace_back(rng() % p, p);
    UniPoly<FieldElement> f(fc, zero);
    std::vector<FpPoly::Term> t{{{0, 1}, FieldElement(1, p)}};
    for (int i = 0; i <= deg; ++i) t.push_back({{static_cast<u32>(i), 0}, -fc[i]});
    auto curve = FpPoly::from_terms(t, zero);
    auto cds = curve_derivatives(curve, 5);
    UniPoly<FieldElement> fk = f;
    for (unsigned k = 1; k <= 5; ++k) {
      fk = fk.derivative();
      for (int s = 0; s < 5; ++s) {
        FieldElement x(rng() % p, p);
        FieldElement y = f.eval(x);
        const auto& cd = cds[k - 1];
        CHECK(cd.q.eval(x, y) / cd.r.eval(x, y) == fk.eval(x));
      }
    }
  }
}

TEST_CASE("curve derivative degree bounds and r_k identity") {
  std::mt19937_64 rng(17);
  const u64 p = 101;
  for (int it = 0; it < 25; ++it) {
    auto f = random_poly(rng, p, 3, 3, 6);
    if (f.deg_y() < 1) continue;
    std::vector<CurveDerivative<FieldElement>> cds;
    REQUIRE_NOTHROW(cds = curve_derivatives(f, 10));
    auto py = f.partial_y();
    auto pw = py;
    for (const auto& cd : cds) {
      CHECK(cd.r == pw);
      pw = pw * py * py;
    }
  }
}

TEST_CASE("curve derivatives agree with implicit differentiation at curve points") {
  // check y'' on a conic by differentiating x^2 + y^2 = 1 twice: y'' = -1/y^3
  const u64 p = 1013;
  auto circle = P("2,0,1;0,2,1;0,0,-1", p);
  auto cd = curve_derivative(circle, 2);
  int points = 0;
  for (u64 xv = 0; xv < p; ++xv) {
    FieldElement x(xv, p);
    for (const auto& y : sqrt_mod(FieldElement(1, p) - x * x)) {
      if (y.is_zero()) continue;
      CHECK(cd.q.eval(x, y) / cd.r.eval(x, y) == -(y * y * y).inv());
      ++points;
    }
  }
  CHECK(points > 0);
}

TEST_CASE("heuristic_irreducible") {
  const u64 p = 97;
  CHECK(heuristic_irreducible(P("1,1,1;1,0,1;0,1,1", p)) == Irreducibility::yes);
  CHECK(heuristic_irreducible(P("1,1,1;1,0,1;0,1,1;0,0,1", p)) == Irreducibility::no);
  // dense cubic, degree 3 in both variables
  CHECK(heuristic_irreducible(P("3,0,1;0,3,2;2,1,3;1,2,5;1,1,7;0,0,1", p)) == Irreducibility::unknown);
  // (X - Y)(X + Y) has a square discriminant
  CHECK(heuristic_irreducible(P("2,0,1;0,2,-1", p)) == Irreducibility::no);
  CHECK(heuristic_irreducible(P("2,0,1;0,2,1;0,0,-1", p)) == Irreducibility::yes);
  CHECK(heuristic_irreducible(P("0,0,5", p)) == Irreducibility::no);
}

TEST_CASE("singular_locus examples") {
  const u64 p = 97;
  auto a = singular_locus(P("0,1,1;1,0,-1", p));
  REQUIRE(a.points.size() == 1);
  CHECK(a.points[0] == std::pair{FieldElement(0, p), FieldElement(0, p)});
  CHECK(a.bound == 4);

  auto b = singular_locus(P("1,1,1;1,0,1;0,1,1", p));
  REQUIRE(b.points.size() == 1);
  CHECK(b.contains(FieldElement(0, p), FieldElement(0, p)));

  // brute oracle for X^2 + Y^2 - 1 mod 7
  const u64 q = 7;
  auto circle = P("2,0,1;0,2,1;0,0,-1", q);
  auto loc = singular_locus(circle);
  std::set<std::pair<u64, u64>> want;
  for (u64 x = 0; x < q; ++x)
    for (u64 y = 0; y < q; ++y) {
      FieldElement fx(x, q), fy(y, q);
      if (!circle.eval(fx, fy).is_zero()) continue;
      if ((fx * fy).is_zero() || circle.partial_y().eval(fx, fy).is_zero()) want.insert({x, y});
    }
  std::set<std::pair<u64, u64>> got;
  for (const auto& [x, y] : loc.points) got.insert({x.value(), y.value()});
  CHECK(got == want);
  CHECK(got.count({1, 0}) == 1);
  CHECK(got.count({6, 0}) == 1);
  CHECK(loc.points.size() <= loc.bound);
}

TEST_CASE("singular locus bound on random polynomials") {
  std::mt19937_64 rng(3);
  const u64 p = 53;
  for (int it = 0; it < 60; ++it) {
    auto f = random_poly(rng, p, 3, 3, 5);
    if (f.deg_y() < 1 || heuristic_irreducible(f) == Irreducibility::no) continue;
    auto loc = singular_locus(f);
    CHECK(loc.points.size() <= loc.bound);
  }
}

TEST_CASE("singular locus over the extension contains the base field locus") {
  auto f = P("1,1,1;1,0,1;0,1,1", 13);
  auto base = singular_locus(f);
  auto ext = singular_locus_extension(f);
  CHECK(ext.points.size() >= base.points.size());
}

TEST_CASE("ring axioms and evaluation homomorphism") {
  std::mt19937_64 rng(23);
  const u64 p = 1000003;
  for (int it = 0; it < 100; ++it) {
    auto f = random_poly(rng, p, 4, 4, 6);
    auto g = random_poly(rng, p, 4, 4, 6);
    auto h = random_poly(rng, p, 4, 4, 6);
    CHECK((f + g) * h == f * h + g * h);
    CHECK(f * g == g * f);
    CHECK((f - f).is_zero());
    FieldElement x(rng() % p, p), y(rng() % p, p), l(rng() % p, p), m(rng() % p, p);
    CHECK((f * g).eval(x, y) == f.eval(x, y) * g.eval(x, y));
    CHECK((f + g).eval(x, y) == f.eval(x, y) + g.eval(x, y));
    CHECK(f.substitute_scale(l, m).eval(x, y) == f.eval(l * x, m * y));
    CHECK(f.specialize_x(x).eval(y) == f.eval(x, y));
    CHECK(f.specialize_y(y).eval(x) == f.eval(x, y));
    CHECK(f.swap_xy().eval(y, x) == f.eval(x, y));
  }
}

TEST_CASE("extension field polynomials") {
  const u64 p = 7;
  const u64 d = smallest_nonresidue(p);
  auto f = embed(P("1,1,1;1,0,1;0,1,1", p), d);
  QuadExtElement w(0, 1, d, p);
  auto v = f.eval(w, w);
  CHECK(v == w * w + w + w);
}
