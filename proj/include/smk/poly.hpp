#pragma once

// Sparse bivariate polynomials over F_p (FieldElement) or F_{p^2}
// (QuadExtElement), the structural functionals used to state the subgroup
// bounds (lowest homogeneous part, degree-gap gcd, singular locus), and the
// implicit-derivative calculus along the curve P(X, Y) = 0.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "smk/errors.hpp"
#include "smk/ff.hpp"
#include "smk/univariate.hpp"

namespace smk {

using u32 = std::uint32_t;

struct Monomial {
  u32 i = 0;  // X exponent
  u32 j = 0;  // Y exponent
  friend auto operator<=>(const Monomial&, const Monomial&) = default;
};

template <class K>
class BivariatePoly {
 public:
  using Term = std::pair<Monomial, K>;

  /// The zero polynomial over the field of `zero`.
  explicit BivariatePoly(const K& zero) : zero_(zero.zero()) {}

  static BivariatePoly monomial(u32 i, u32 j, const K& c) {
    BivariatePoly out(c);
    if (!c.is_zero()) out.terms_.push_back({{i, j}, c});
    return out;
  }
  static BivariatePoly constant(const K& c) { return monomial(0, 0, c); }

  /// Builds from unsorted terms; repeated monomials are summed.
  static BivariatePoly from_terms(std::vector<Term> terms, const K& zero) {
    BivariatePoly out(zero);
    for (const auto& t : terms) out.check(t.second);
    out.terms_ = std::move(terms);
    out.normalize();
    return out;
  }

  const K& field() const { return zero_; }
  std::span<const Term> terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t num_terms() const { return terms_.size(); }

  int deg_x() const {
    int d = -1;
    for (const auto& [m, c] : terms_) d = std::max(d, static_cast<int>(m.i));
    return d;
  }
  int deg_y() const {
    int d = -1;
    for (const auto& [m, c] : terms_) d = std::max(d, static_cast<int>(m.j));
    return d;
  }
  int total_degree() const {
    int d = -1;
    for (const auto& [m, c] : terms_) d = std::max(d, static_cast<int>(m.i + m.j));
    return d;
  }

  K coeff(u32 i, u32 j) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), Monomial{i, j},
                               [](const Term& t, const Monomial& m) { return t.first < m; });
    if (it != terms_.end() && it->first == Monomial{i, j}) return it->second;
    return zero_;
  }

  BivariatePoly operator-() const {
    BivariatePoly out = *this;
    for (auto& t : out.terms_) t.second = -t.second;
    return out;
  }

  friend BivariatePoly operator+(const BivariatePoly& f, const BivariatePoly& g) { return f.merge(g, false); }
  friend BivariatePoly operator-(const BivariatePoly& f, const BivariatePoly& g) { return f.merge(g, true); }

  friend BivariatePoly operator*(const BivariatePoly& f, const BivariatePoly& g) {
    f.check(g.zero_);
    BivariatePoly out(f.zero_);
    if (f.is_zero() || g.is_zero()) return out;
    out.terms_.reserve(f.terms_.size() * g.terms_.size());
    for (const auto& [mf, cf] : f.terms_)
      for (const auto& [mg, cg] : g.terms_) out.terms_.push_back({{mf.i + mg.i, mf.j + mg.j}, cf * cg});
    out.normalize();
    return out;
  }

  BivariatePoly scale(const K& s) const {
    check(s);
    BivariatePoly out(zero_);
    if (s.is_zero()) return out;
    out.terms_ = terms_;
    for (auto& t : out.terms_) t.second *= s;
    return out;
  }

  /// Multiplies by X^di Y^dj.
  BivariatePoly shift(u32 di, u32 dj) const {
    BivariatePoly out = *this;
    for (auto& t : out.terms_) {
      t.first.i += di;
      t.first.j += dj;
    }
    return out;
  }

  BivariatePoly partial_x() const {
    std::vector<Term> out;
    for (const auto& [m, c] : terms_)
      if (m.i > 0) out.push_back({{m.i - 1, m.j}, c * zero_.scalar(m.i)});
    return from_terms(std::move(out), zero_);
  }

  BivariatePoly partial_y() const {
    std::vector<Term> out;
    for (const auto& [m, c] : terms_)
      if (m.j > 0) out.push_back({{m.i, m.j - 1}, c * zero_.scalar(m.j)});
    return from_terms(std::move(out), zero_);
  }

  /// P(lambda X, mu Y): a_ij -> a_ij lambda^i mu^j.
  BivariatePoly substitute_scale(const K& lambda, const K& mu) const {
    check(lambda);
    check(mu);
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& [m, c] : terms_) out.push_back({m, c * lambda.pow(m.i) * mu.pow(m.j)});
    return from_terms(std::move(out), zero_);
  }

  K eval(const K& x, const K& y) const {
    check(x);
    check(y);
    K acc = zero_;
    for (const auto& [m, c] : terms_) acc += c * x.pow(m.i) * y.pow(m.j);
    return acc;
  }

  /// P(x, Y) as a polynomial in Y.
  UniPoly<K> specialize_x(const K& x) const {
    std::vector<K> c(static_cast<std::size_t>(std::max(deg_y(), -1) + 1), zero_);
    for (const auto& [m, v] : terms_) c[m.j] += v * x.pow(m.i);
    return UniPoly<K>(std::move(c), zero_);
  }

  /// P(X, y) as a polynomial in X.
  UniPoly<K> specialize_y(const K& y) const {
    std::vector<K> c(static_cast<std::size_t>(std::max(deg_x(), -1) + 1), zero_);
    for (const auto& [m, v] : terms_) c[m.i] += v * y.pow(m.j);
    return UniPoly<K>(std::move(c), zero_);
  }

  /// Coefficients of Y^0 .. Y^{deg_y} as polynomials in X.
  std::vector<UniPoly<K>> y_coefficients() const {
    const int dy = deg_y();
    const int dx = std::max(deg_x(), 0);
    std::vector<std::vector<K>> raw(static_cast<std::size_t>(dy + 1),
                                    std::vector<K>(static_cast<std::size_t>(dx + 1), zero_));
    for (const auto& [m, c] : terms_) raw[m.j][m.i] = c;
    std::vector<UniPoly<K>> out;
    for (auto& r : raw) out.emplace_back(std::move(r), zero_);
    return out;
  }

  /// Coefficients of X^0 .. X^{deg_x} as polynomials in Y.
  std::vector<UniPoly<K>> x_coefficients() const { return swap_xy().y_coefficients(); }

  BivariatePoly swap_xy() const {
    std::vector<Term> out;
    for (const auto& [m, c] : terms_) out.push_back({{m.j, m.i}, c});
    return from_terms(std::move(out), zero_);
  }

  friend bool operator==(const BivariatePoly& f, const BivariatePoly& g) { return f.terms_ == g.terms_; }

  /// Human-readable form, e.g. "3*X^2*Y + X + 5".
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      const auto& [m, c] = *it;
      if (!s.empty()) s += " + ";
      std::string mono;
      if (m.i > 0) mono += m.i == 1 ? "X" : "X^" + std::to_string(m.i);
      if (m.j > 0) mono += (mono.empty() ? "" : "*") + (m.j == 1 ? std::string("Y") : "Y^" + std::to_string(m.j));
      if (mono.empty()) {
        s += c.to_string();
      } else if (c.is_one()) {
        s += mono;
      } else {
        s += "(" + c.to_string() + ")*" + mono;
      }
    }
    return s;
  }

 private:
  void check(const K& c) const {
    if (!zero_.same_field(c)) throw ModulusMismatch("polynomial coefficient from a different field");
  }

  void normalize() {
    std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
    std::size_t w = 0;
    for (std::size_t r = 0; r < terms_.size();) {
      Term acc = terms_[r++];
      while (r < terms_.size() && terms_[r].first == acc.first) acc.second += terms_[r++].second;
      if (!acc.second.is_zero()) terms_[w++] = acc;
    }
    terms_.resize(w);
  }

  BivariatePoly merge(const BivariatePoly& g, bool subtract) const {
    check(g.zero_);
    BivariatePoly out(zero_);
    out.terms_.reserve(terms_.size() + g.terms_.size());
    std::size_t a = 0, b = 0;
    while (a < terms_.size() || b < g.terms_.size()) {
      if (b == g.terms_.size() || (a < terms_.size() && terms_[a].first < g.terms_[b].first)) {
        out.terms_.push_back(terms_[a++]);
      } else if (a == terms_.size() || g.terms_[b].first < terms_[a].first) {
        const auto& t = g.terms_[b++];
        out.terms_.push_back({t.first, subtract ? -t.second : t.second});
      } else {
        K c = subtract ? terms_[a].second - g.terms_[b].second : terms_[a].second + g.terms_[b].second;
        if (!c.is_zero()) out.terms_.push_back({terms_[a].first, c});
        ++a;
        ++b;
      }
    }
    return out;
  }

  K zero_;
  std::vector<Term> terms_;  // sorted by monomial, no zero coefficients
};

using FpPoly = BivariatePoly<FieldElement>;
using Fp2Poly = BivariatePoly<QuadExtElement>;

/// Coefficient-wise embedding of an F_p polynomial into F_{p^2} = F_p[w]/(w^2 - d).
Fp2Poly embed(const FpPoly& f, u64 d);

// ---------------------------------------------------------------------------
// Structural functionals

template <class K>
struct SharpPart {
  int d_sharp = 0;
  BivariatePoly<K> p_sharp;
  std::size_t monomials = 0;
};

/// Lowest-degree homogeneous part. Throws ZeroPolynomial on P = 0.
template <class K>
SharpPart<K> sharp_part(const BivariatePoly<K>& p) {
  if (p.is_zero()) throw ZeroPolynomial("sharp_part of the zero polynomial");
  int d = p.total_degree();
  for (const auto& [m, c] : p.terms()) d = std::min(d, static_cast<int>(m.i + m.j));
  std::vector<typename BivariatePoly<K>::Term> keep;
  for (const auto& t : p.terms())
    if (static_cast<int>(t.first.i + t.first.j) == d) keep.push_back(t);
  SharpPart<K> out{d, BivariatePoly<K>::from_terms(keep, p.field()), keep.size()};
  return out;
}

struct GInvariant {
  u64 g = 0;
  bool single_term = false;  // g is reported as 0 when P has fewer than two terms
};

/// gcd of the pairwise differences of total degrees of the monomials of P.
template <class K>
GInvariant g_invariant(const BivariatePoly<K>& p) {
  if (p.num_terms() < 2) return {0, true};
  const int d_sharp = sharp_part(p).d_sharp;
  u64 g = 0;
  for (const auto& [m, c] : p.terms()) g = std::gcd(g, static_cast<u64>(static_cast<int>(m.i + m.j) - d_sharp));
  return {g, false};
}

template <class K>
struct PseudoDivision {
  BivariatePoly<K> quotient;
  BivariatePoly<K> remainder;
  unsigned power = 0;  // lc_Y(P)^power * Q = quotient * P + remainder
};

/// Pseudo-division in Y. The multiplier power is max(deg_Y Q - deg_Y P + 1, 0).
template <class K>
PseudoDivision<K> pseudo_divide_y(const BivariatePoly<K>& q, const BivariatePoly<K>& p) {
  if (p.is_zero()) throw ZeroDivisor("pseudo-division by the zero polynomial");
  const int n = p.deg_y();
  if (n < 1) throw std::invalid_argument("pseudo_divide_y needs deg_Y P >= 1");

  auto y_slice = [](const BivariatePoly<K>& f, u32 j) {
    std::vector<typename BivariatePoly<K>::Term> out;
    for (const auto& [m, c] : f.terms())
      if (m.j == j) out.push_back({{m.i, 0}, c});
    return BivariatePoly<K>::from_terms(std::move(out), f.field());
  };

  const BivariatePoly<K> lc = y_slice(p, static_cast<u32>(n));
  const int dq = q.deg_y();
  const unsigned delta = dq >= n ? static_cast<unsigned>(dq - n + 1) : 0;

  BivariatePoly<K> rem = q;
  BivariatePoly<K> quot(q.field());
  unsigned used = 0;
  while (!rem.is_zero() && rem.deg_y() >= n) {
    const u32 d = static_cast<u32>(rem.deg_y());
    const BivariatePoly<K> lead = y_slice(rem, d);
    const BivariatePoly<K> step = lead.shift(0, d - static_cast<u32>(n));
    quot = lc * quot + step;
    rem = lc * rem - step * p;
    ++used;
  }
  for (; used < delta; ++used) {
    quot = lc * quot;
    rem = lc * rem;
  }
  return {std::move(quot), std::move(rem), delta};
}

/// (q_k, r_k) with d^k Y / dX^k = q_k / r_k on the curve P = 0.
template <class K>
struct CurveDerivative {
  unsigned k = 0;
  BivariatePoly<K> q;
  BivariatePoly<K> r;
};

/// q_1 .. q_k and r_1 .. r_k by the standard recursion; degree bounds
/// deg_X q_k <= (2k-1)m - k, deg_Y q_k <= (2k-1)n - 2k + 2,
/// deg_X r_k <= (2k-1)m, deg_Y r_k <= (2k-1)(n-1) are checked on every step.
template <class K>
std::vector<CurveDerivative<K>> curve_derivatives(const BivariatePoly<K>& p, unsigned k_max) {
  if (p.deg_y() < 1) throw std::invalid_argument("curve_derivative needs deg_Y P >= 1");
  const int m = p.deg_x();
  const int n = p.deg_y();
  const auto px = p.partial_x();
  const auto py = p.partial_y();
  const auto pxy = px.partial_y();
  const auto pyy = py.partial_y();
  const auto py2 = py * py;
  const auto px_py = px * py;
  const auto pxy_py = pxy * py;
  const auto pyy_px = pyy * px;

  std::vector<CurveDerivative<K>> out;
  out.reserve(k_max);
  if (k_max == 0) return out;
  out.push_back({1, -px, py});
  for (unsigned k = 1; k < k_max; ++k) {
    const auto& q = out.back().q;
    const K c = p.field().scalar(2 * static_cast<i64>(k) - 1);
    auto q_next = q.partial_x() * py2 - q.partial_y() * px_py - (q * pxy_py).scale(c) + (q * pyy_px).scale(c);
    auto r_next = out.back().r * py2;
    out.push_back({k + 1, std::move(q_next), std::move(r_next)});
  }
  for (const auto& cd : out) {
    const int kk = static_cast<int>(cd.k);
    const bool ok = cd.q.deg_x() <= (2 * kk - 1) * m - kk && cd.q.deg_y() <= (2 * kk - 1) * n - 2 * kk + 2 &&
                    cd.r.deg_x() <= (2 * kk - 1) * m && cd.r.deg_y() <= (2 * kk - 1) * (n - 1);
    if (!ok) throw std::logic_error("curve derivative degree bound violated at k=" + std::to_string(kk));
  }
  return out;
}

template <class K>
CurveDerivative<K> curve_derivative(const BivariatePoly<K>& p, unsigned k) {
  if (k < 1) throw std::invalid_argument("curve_derivative needs k >= 1");
  return curve_derivatives(p, k).back();
}

// ---------------------------------------------------------------------------
// Irreducibility and singular locus

enum class Irreducibility { yes, no, unknown };
std::string to_string(Irreducibility v);

/// "no" when a nontrivial content or a splitting discriminant is found; "yes"
/// only for polynomials of degree 1 or 2 in one variable where absolute
/// irreducibility is decided exactly; otherwise "unknown".
template <class K>
Irreducibility heuristic_irreducible(const BivariatePoly<K>& p) {
  if (p.is_zero() || p.total_degree() <= 0) return Irreducibility::no;

  auto content_nontrivial = [](const std::vector<UniPoly<K>>& coeffs) {
    UniPoly<K> g(coeffs.front().field());
    for (const auto& c : coeffs) g = UniPoly<K>::gcd(g, c);
    return g.degree() >= 1;
  };
  auto quadratic_splits = [](const std::vector<UniPoly<K>>& c) {
    const UniPoly<K> four({c[0].field().scalar(4)}, c[0].field());
    const UniPoly<K> disc = c[1] * c[1] - four * c[2] * c[0];
    return disc.is_square_over_closure();
  };

  const int dx = p.deg_x();
  const int dy = p.deg_y();
  if (dy == 0) return dx == 1 ? Irreducibility::yes : Irreducibility::no;
  if (dx == 0) return dy == 1 ? Irreducibility::yes : Irreducibility::no;

  const auto yc = p.y_coefficients();
  const auto xc = p.x_coefficients();
  if (content_nontrivial(yc) || content_nontrivial(xc)) return Irreducibility::no;
  if (dy == 1 || dx == 1) return Irreducibility::yes;
  if (dy == 2) return quadratic_splits(yc) ? Irreducibility::no : Irreducibility::yes;
  if (dx == 2) return quadratic_splits(xc) ? Irreducibility::no : Irreducibility::yes;
  return Irreducibility::unknown;
}

template <class K>
struct SingularLocus {
  std::vector<std::pair<K, K>> points;  // sorted, distinct
  std::size_t bound = 0;                // (m + n)^2
  std::vector<std::string> warnings;

  bool contains(const K& x, const K& y) const {
    return std::binary_search(points.begin(), points.end(), std::pair<K, K>{x, y});
  }
};

/// Enumerates every element of the coefficient field (F_p or F_{p^2}).
std::vector<FieldElement> field_elements(const FieldElement& like);
std::vector<QuadExtElement> field_elements(const QuadExtElement& like);

/// Points with XY = P = 0 or dP/dY = P = 0, with both coordinates in the
/// coefficient field. Brute scan over x; per x the common roots come from a
/// univariate gcd.
template <class K>
SingularLocus<K> singular_locus(const BivariatePoly<K>& p) {
  SingularLocus<K> out;
  if (p.deg_y() < 1) throw std::invalid_argument("singular_locus needs deg_Y P >= 1");
  const std::size_t mn = static_cast<std::size_t>(p.deg_x() + p.deg_y());
  out.bound = mn * mn;
  if (heuristic_irreducible(p) == Irreducibility::no)
    out.warnings.push_back("IrreducibilityDoubt: heuristic found P reducible");

  const auto py = p.partial_y();
  const std::vector<K> elems = field_elements(p.field());
  auto roots_of = [&](const UniPoly<K>& g) {
    std::vector<K> r;
    if (g.degree() < 1) return r;
    for (const auto& y : elems)
      if (g.eval(y).is_zero()) r.push_back(y);
    return r;
  };

  const K zero = p.field();
  for (const auto& x : elems) {
    const UniPoly<K> fx = p.specialize_x(x);
    if (fx.is_zero()) {
      out.warnings.push_back("IrreducibilityDoubt: P vanishes on the whole line X = " + x.to_string());
      for (const auto& y : elems) out.points.push_back({x, y});
      continue;
    }
    if (x.is_zero()) {
      for (const auto& y : roots_of(fx)) out.points.push_back({x, y});
      continue;
    }
    if (fx.eval(zero).is_zero()) out.points.push_back({x, zero});
    const UniPoly<K> g = UniPoly<K>::gcd(fx, py.specialize_x(x));
    for (const auto& y : roots_of(g)) out.points.push_back({x, y});
  }
  std::sort(out.points.begin(), out.points.end());
  out.points.erase(std::unique(out.points.begin(), out.points.end()), out.points.end());
  if (out.points.size() > out.bound && heuristic_irreducible(p) != Irreducibility::no)
    throw std::logic_error("singular locus exceeds (m+n)^2 for a polynomial not known to be reducible");
  return out;
}

/// Opt-in scan of the F_{p^2}-rational singular points of an F_p polynomial.
SingularLocus<QuadExtElement> singular_locus_extension(const FpPoly& p);

// ---------------------------------------------------------------------------
// Text format "i,j,c;i,j,c;..." with c a decimal residue (a leading '-' is
// accepted and reduced). Duplicate (i, j) pairs are rejected.

FpPoly parse_poly(const std::string& text, u64 p);
std::string format_poly(const FpPoly& f);

}  // namespace smk
