#pragma once

// Rotations on the Markoff surface: fixing x, the moves R3 and P132 generate
// the sequence u_{n+2} = 3x u_{n+1} - u_n, whose period is the order t(x) of a
// root xi of Z^2 - 3xZ + 1. Its value set Z(x) has the closed form
// {alpha u + r/(alpha u) : u in <xi>}, and coincidences between two such sets
// are the zeros of a four-term polynomial P_{x,x*} on a subgroup grid.

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "smk/ff.hpp"
#include "smk/markoff.hpp"
#include "smk/numth.hpp"
#include "smk/poly.hpp"
#include "smk/subgrp.hpp"

namespace smk::orbit {

/// u_1 = y, u_2 = z, u_{n+2} = 3x u_{n+1} - u_n; returns u_1 .. u_length.
std::vector<FieldElement> recurrence(const FieldElement& x, const FieldElement& y, const FieldElement& z,
                                     std::size_t length);

/// Least n >= 1 with (u_{n+1}, u_{n+2}) = (u_1, u_2), found by stepping the
/// recurrence (at most p^2 steps).
u64 recurrence_period(const FieldElement& x, const FieldElement& y, const FieldElement& z);

struct RotationData {
  FieldElement x;
  QuadExtElement xi;  // canonical root, see quad_roots
  QuadExtElement xi_inv;
  bool in_base_field = false;
  bool degenerate = false;  // xi = +-1
  bool zero_x = false;      // xi^2 = -1, r(x) = 0
  u64 t = 0;                // order of xi in F_{p^2}^*
};

RotationData rotation_data(const FieldElement& x, const numth::Factorization& p2_minus_1);
RotationData rotation_data(const FieldElement& x);

/// r(x) = (xi^2 + 1)^2 / (9 (xi^2 - 1)^2), which simplifies to x^2 / (9x^2 - 4).
/// Throws DegenerateRotation when 9x^2 = 4.
FieldElement r_value(const FieldElement& x);

/// The same quantity evaluated from a root xi directly.
QuadExtElement r_from_xi(const QuadExtElement& xi);

struct ZSet {
  markoff::MarkoffTriple seed;
  RotationData rot;
  u64 period = 0;  // by generation
  FieldElement r;
  QuadExtElement alpha, beta;  // u_n = alpha xi^n + beta xi^{-n}
  std::vector<u64> elements;   // distinct values of u_1 .. u_t, sorted
  u64 max_multiplicity = 0;    // over one period
};

/// Requires x != 0 (ZeroX) and xi^2 != 1 (DegenerateRotation). Solves the
/// initial-value system for (alpha, beta) and checks alpha beta = r(x) and that
/// the parametric set equals the generated one; a mismatch throws
/// VerificationFailure.
ZSet z_set(const FieldElement& x, const FieldElement& y, const FieldElement& z,
           const numth::Factorization& p2_minus_1);
ZSet z_set(const FieldElement& x, const FieldElement& y, const FieldElement& z);

/// The values alpha u + r / (alpha u) for u in <xi>, sorted and distinct.
/// Throws VerificationFailure if one of them leaves F_p.
std::vector<u64> parametric_elements(const ZSet& zs);

/// alpha^2 alpha* X^2 Y - alpha alpha*^2 X Y^2 - alpha r* X + alpha* r Y.
/// Throws EqualR when r(x) = r(x*).
Fp2Poly intersection_poly(const ZSet& a, const ZSet& b);

/// With Z = X/Y and U = 1/(XY), P_{x,x*} = 0 becomes
/// (a11 Z - a12) / (a21 Z - a22) = U with a11 = alpha^2 alpha*,
/// a12 = alpha alpha*^2, a21 = alpha r*, a22 = alpha* r.
/// Throws ConditionViolation when the admissibility conditions fail.
subgrp::MobiusEquation<QuadExtElement> mobius_reduce(const ZSet& a, const ZSet& b);

struct AuditConfig {
  u64 A = 9;
  u64 max_pairs = 10'000;
  u64 seed = 0;
  unsigned threads = 1;
};

struct AuditReport {
  u64 p = 0;
  u64 A = 0;
  u64 component_size = 0;
  u64 M = 0;                   // distinct first coordinates in C_p
  std::map<u64, u64> g;        // period -> number of x
  u64 sum_g = 0;
  u64 max_t = 0;
  bool sum_ok = false;         // sum g(t) = M
  bool tail_ok = false;        // g(t) = 0 for t > 2M
  u64 period_order_mismatches = 0;  // non-degenerate x whose period differs from ord(xi)
  u64 l_size = 0;              // x with t(x) > 4 sqrt(AM)
  u64 lstar_size = 0;          // one of +-x kept
  u64 pairs_available = 0;
  u64 pairs_sampled = 0;
  u64 max_intersection = 0;
  u64 argmax_x = 0, argmax_xstar = 0;
  u64 pairs_above_2a = 0;      // informational; A is conjectural
};

/// Runs on the component of (1,1,1). For each x in the projection the seed
/// (y, z) is the lexicographically first point of the component above x.
AuditReport intersection_audit(const markoff::SurfaceIndex& idx, const AuditConfig& cfg);

}  // namespace smk::orbit
