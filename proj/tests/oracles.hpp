#pragma once

// Slow, independent reference computations shared by the unit tests and the
// acceptance runner. Nothing here reuses the library's fast paths.

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "smk/poly.hpp"

namespace oracle {

using u64 = std::uint64_t;
using Triple = std::array<u64, 3>;

/// All nonzero solutions of x^2 + y^2 + z^2 = 3xyz mod p by a triple loop.
inline std::set<Triple> brute_surface(u64 p) {
  std::set<Triple> out;
  for (u64 x = 0; x < p; ++x)
    for (u64 y = 0; y < p; ++y)
      for (u64 z = 0; z < p; ++z) {
        if (x == 0 && y == 0 && z == 0) continue;
        if ((x * x + y * y + z * z) % p == 3 * x % p * y % p * z % p) out.insert({x, y, z});
      }
  return out;
}

/// Connected component sizes of the Markoff graph by breadth-first search over
/// all nine moves on a std::set representation.
inline std::vector<u64> bfs_component_sizes(u64 p, u64* size_of_111 = nullptr) {
  const auto pts = brute_surface(p);
  std::set<Triple> seen;
  std::vector<u64> sizes;
  for (const auto& s : pts) {
    if (seen.count(s)) continue;
    std::vector<Triple> stack{s};
    seen.insert(s);
    u64 n = 0;
    bool has_111 = false;
    while (!stack.empty()) {
      Triple t = stack.back();
      stack.pop_back();
      ++n;
      if (t == Triple{1, 1, 1}) has_111 = true;
      const auto [x, y, z] = t;
      const std::array<Triple, 9> nbrs = {
          Triple{(3 * y % p * z + p - x) % p, y, z}, Triple{x, (3 * x % p * z + p - y) % p, z},
          Triple{x, y, (3 * x % p * y + p - z) % p}, Triple{x, y, z}, Triple{x, z, y}, Triple{y, x, z},
          Triple{y, z, x}, Triple{z, x, y}, Triple{z, y, x}};
      for (const auto& nb : nbrs) {
        if (seen.insert(nb).second) stack.push_back(nb);
      }
    }
    if (has_111 && size_of_111) *size_of_111 = n;
    sizes.push_back(n);
  }
  return sizes;
}

/// Multiplicative order by repeated multiplication.
inline u64 naive_order(u64 a, u64 p) {
  u64 v = a % p, k = 1;
  while (v != 1) {
    v = v * a % p;
    ++k;
  }
  return k;
}

// Power series in s over F_p, truncated at a fixed length.
using Series = std::vector<smk::FieldElement>;

inline Series smul(const Series& f, const Series& g) {
  Series h(f.size(), f[0].zero());
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = 0; i + j < f.size(); ++j) h[i + j] += f[i] * g[j];
  return h;
}

inline Series spow(const Series& f, u64 e) {
  Series r(f.size(), f[0].zero());
  r[0] = f[0].one();
  for (u64 i = 0; i < e; ++i) r = smul(r, f);
  return r;
}

// F(x0 + s, y(s)) truncated, by term-wise expansion
inline Series compose(const smk::FpPoly& F, const smk::FieldElement& x0, const Series& ys) {
  Series xs(ys.size(), x0.zero());
  xs[0] = x0;
  if (xs.size() > 1) xs[1] = x0.one();
  Series out(ys.size(), x0.zero());
  for (const auto& [m, c] : F.terms()) {
    const Series t = smul(spow(xs, m.i), spow(ys, m.j));
    for (std::size_t l = 0; l < out.size(); ++l) out[l] += c * t[l];
  }
  return out;
}

// branch y(s) of P(x0 + s, y) = 0 through y0 by the chord iteration
// y <- y - P(x0 + s, y) / P_Y(x0, y0); each pass fixes one more coefficient
inline Series newton_branch(const smk::FpPoly& P, const smk::FieldElement& x0, const smk::FieldElement& y0, std::size_t order) {
  Series ys(order, x0.zero());
  ys[0] = y0;
  const smk::FieldElement d = P.partial_y().eval(x0, y0).inv();
  for (std::size_t it = 0; it < order; ++it) {
    const Series r = compose(P, x0, ys);
    for (std::size_t l = 0; l < order; ++l) ys[l] -= r[l] * d;
  }
  return ys;
}

}  // namespace oracle
