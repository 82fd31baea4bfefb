#include <random>
#include <set>

#include "doctest.h"
#include "smk/ff.hpp"
#include "smk/numth.hpp"

using namespace smk;

namespace {

// squares mod p by enumeration, used as an oracle for residuosity
std::set<u64> squares(u64 p) {
  std::set<u64> s;
  for (u64 r = 0; r < p; ++r) s.insert(r * r % p);
  return s;
}

}  // namespace

TEST_CASE("fp_arith examples") {
  CHECK((FieldElement(3, 5) + FieldElement(4, 5)).value() == 2);
  CHECK(FieldElement(2, 5).inv().value() == 3);
  CHECK(FieldElement(2, 5).pow(4).value() == 1);
  CHECK_THROWS_AS(FieldElement(0, 5).inv(), InverseOfZero);
  CHECK_THROWS_AS(FieldElement(1, 5) + FieldElement(1, 7), ModulusMismatch);
  CHECK(FieldElement::from_int(-1, 7).value() == 6);
}

TEST_CASE("no overflow near the modulus bound") {
  const u64 p = 4611686018427387847ULL;  // largest prime below 2^62
  REQUIRE(numth::is_prime(p));
  FieldElement a(p - 1, p);
  CHECK((a * a).value() == 1);
  CHECK((a + a).value() == p - 2);
  CHECK((a * a.inv()).is_one());
}

TEST_CASE("legendre") {
  CHECK(legendre(FieldElement(2, 7)) == 1);
  CHECK(legendre(FieldElement(0, 7)) == 0);
  CHECK(legendre(FieldElement(3, 7)) == -1);
  for (u64 p : {3, 5, 7, 11, 13, 97, 241}) {
    auto sq = squares(p);
    for (u64 a = 1; a < p; ++a) CHECK(legendre(FieldElement(a, p)) == (sq.count(a) ? 1 : -1));
  }
}

TEST_CASE("sqrt_mod") {
  auto r = sqrt_mod(FieldElement(2, 7));
  REQUIRE(r.size() == 2);
  CHECK(r[0].value() == 3);
  CHECK(r[1].value() == 4);
  auto z = sqrt_mod(FieldElement(0, 5));
  REQUIRE(z.size() == 1);
  CHECK(z[0].value() == 0);
  CHECK(sqrt_mod(FieldElement(3, 7)).empty());

  // p = 1 mod 8 exercises the full Tonelli-Shanks loop
  for (u64 p : {17, 41, 97, 113, 241, 257, 7681}) {
    for (u64 a = 1; a < p; ++a) {
      auto roots = sqrt_mod(FieldElement(a, p));
      for (const auto& x : roots) CHECK((x * x).value() == a);
      if (!roots.empty()) CHECK(roots[0].value() < roots[1].value());
    }
  }
}

TEST_CASE("mult_order") {
  auto f7 = numth::factorize(6);
  CHECK(mult_order(FieldElement(1, 7), f7.factors) == 1);
  CHECK(mult_order(FieldElement(2, 7), f7.factors) == 3);
  CHECK_THROWS_AS(mult_order(FieldElement(0, 7), f7.factors), ZeroElement);

  // F_9 = F_3[w]/(w^2 - 2)
  REQUIRE(smallest_nonresidue(3) == 2);
  QuadExtElement w(0, 1, 2, 3);
  auto f8 = numth::factorize(8);
  CHECK(mult_order(w, f8.factors) == 4);
}

TEST_CASE("quad_roots") {
  auto a = quad_roots(FieldElement(3, 5));
  CHECK(a.degenerate);
  CHECK(a.xi.a_raw() == 4);

  auto b = quad_roots(FieldElement(3, 7));
  CHECK_FALSE(b.in_base_field);
  CHECK(b.discriminant.value() == 5);

  auto c = quad_roots(FieldElement(2, 11));
  CHECK(c.degenerate);
  CHECK(c.xi.is_one());
}

TEST_CASE("field properties on random elements") {
  std::mt19937_64 rng(7);
  for (u64 p : {3, 5, 7, 13, 101, 2377, 1000003}) {
    const u64 d = smallest_nonresidue(p);
    auto fp = numth::factorize(p - 1);
    auto fp2 = numth::factorize_p2_minus_1(p);
    for (int it = 0; it < 200; ++it) {
      FieldElement x(rng() % p, p);
      if (x.is_zero()) continue;
      CHECK((x * x.inv()).is_one());
      const u64 ea = rng() % 1000, eb = rng() % 1000;
      CHECK(x.pow(ea).pow(eb) == x.pow(ea * eb));
      CHECK((p - 1) % mult_order(x, fp.factors) == 0);
      for (const auto& r : sqrt_mod(x)) CHECK(r * r == x);

      QuadExtElement u(rng() % p, rng() % p, d, p), v(rng() % p, rng() % p, d, p);
      CHECK((u * v).norm() == u.norm() * v.norm());
      if (!u.is_zero()) {
        CHECK((u * u.inv()).is_one());
        CHECK((p * p - 1) % mult_order(u, fp2.factors) == 0);
      }

      auto info = quad_roots(x);
      CHECK((info.xi * info.xi_inv).is_one());
      CHECK(info.xi + info.xi_inv == QuadExtElement::embed(x, d));
    }
  }
}
