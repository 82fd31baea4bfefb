#pragma once

// Explicit Stepanov certificates at desk scale. For a subgroup G of F_p^* of
// order t and a curve P(X, Y) = 0 we look for
//
//   Psi(X, Y) = Y^t Phi(X/Y, X^t, Y^t) = sum w_{a,b,c} X^{a+bt} Y^{(c+1)t-a}
//
// vanishing to order >= D at every solution in the scaled grids, by solving the
// linear conditions P | Y^{A-1} D_k Psi restricted to each grid. Verification
// is independent of the construction: Psi is expanded as a power series along
// the curve at each solution point.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "smk/ff.hpp"
#include "smk/poly.hpp"
#include "smk/subgrp.hpp"

namespace smk::stepanov {

struct ParamCheck {
  std::string name;
  bool ok = false;
};

struct StepanovParams {
  u64 p = 0, t = 0, h = 0, m = 0, n = 0, g = 0;
  u64 A = 0, B = 0, C = 0, D = 0;
  u64 L = 0;            // h m n sum_{k<D} (4k(m+n) + 2A + 1)
  u64 unknowns = 0;     // ABC
  u64 sufficient_lhs = 0; // 2hmn(AD + (m+n)D^2), the sufficient form of L < ABC
  u64 psi_degree = 0;   // (B + C - 1) t
  std::vector<ParamCheck> checks;

  bool feasible() const;
};

/// A = floor(t^{2/3} / (g h^{1/3})), B = C = floor((ht)^{1/3}),
/// D = floor(t^{2/3} / (4 g h^{1/3} m n)), all by exact integer comparisons.
/// Throws InfeasibleParams naming every failed inequality.
StepanovParams derive_params(u64 t, u64 h, u64 m, u64 n, u64 g, u64 p);

/// R_0 .. R_k with D_j (X^alpha Y^beta) = R_j X^alpha Y^beta on P = 0, where
/// D_j = P_Y^{2j-1} X^j Y^j d^j/dX^j and D_0 is the identity.
std::vector<FpPoly> operator_multipliers(const FpPoly& P, u64 alpha, u64 beta, unsigned k);

/// Column polynomial of w_{a,b,c} in Y^{A-1} R_{k,i}:
/// R_{k,a,b,c} X^a Y^{A-1-a} lambda^{bt} mu^{(c+1)t}, for the grid
/// lambda G x mu G on which P(lambda X, mu Y) has its G^2-zeros.
/// Asserts deg_X <= A + 4km and deg_Y <= A + 4kn.
FpPoly basis_restriction(const FpPoly& P, const StepanovParams& prm, u64 a, u64 b, u64 c,
                         const std::pair<FieldElement, FieldElement>& scaling, unsigned k);

struct Matrix {
  u64 p = 0;
  std::size_t rows = 0, cols = 0;
  std::vector<u64> data;  // row-major

  Matrix() = default;
  Matrix(u64 modulus, std::size_t r, std::size_t c) : p(modulus), rows(r), cols(c), data(r * c, 0) {}
  u64& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  u64 at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

struct LinearSystem {
  Matrix matrix;                      // columns indexed (a B + b) C + c
  std::vector<std::size_t> block_rows;  // emitted rows per (i, k), i major
  u64 row_ceiling = 0;                // L
};

/// One row per monomial of the pseudo-remainder of Y^{A-1} R_{k,i} by P,
/// for every scaling i and every k < D. Requires P not known reducible and
/// P^sharp with at least two monomials (PreconditionFailure).
LinearSystem build_system(const FpPoly& P, const std::vector<std::pair<FieldElement, FieldElement>>& scalings,
                          const StepanovParams& prm, unsigned threads = 1);

struct NullVector {
  std::vector<u64> x;
  std::size_t rank = 0;
  std::size_t free_column = 0;
};

/// Gauss-Jordan elimination with first-nonzero pivoting; the first free
/// column is set to 1 and the other free columns to 0. Throws FullRank.
NullVector solve_nullspace(Matrix m);

/// sum w_{a,b,c} X^{a+bt} Y^{(c+1)t-a}. Throws ZeroPsi when w = 0.
FpPoly assemble_psi(const std::vector<u64>& w, const StepanovParams& prm);

struct CertificateReport {
  StepanovParams params;
  std::vector<u64> phi_coeffs;
  std::size_t system_rows = 0;
  std::size_t system_rank = 0;
  bool psi_nonzero = false;
  bool coprime_with_P = false;
  std::optional<u64> coprime_witness_x;  // x0 with P(x0, Y) not dividing Psi(x0, Y)
  bool vanishing_verified = false;
  u64 solutions_checked = 0;           // zeros off M_sing
  u64 solutions_singular = 0;          // zeros in M_sing
  std::optional<std::pair<u64, u64>> first_failure;  // (u, v) where vanishing failed
  u64 m_sing = 0;
  u64 bezout_bound = 0;  // floor((m+n)(B+C-1)t / D) + #M_sing
  u64 brute_count = 0;   // N_h over G^2
  bool bound_ok = false;
  std::vector<std::string> warnings;

  bool verified() const { return psi_nonzero && coprime_with_P && vanishing_verified && bound_ok; }
  /// Name of the first failing stage, or empty.
  std::string failed_stage() const;
};

/// Checks (i) P does not divide Psi, (ii) vanishing to order D at every zero of
/// some P_i on G^2 outside M_sing, (iii) N_h <= bezout_bound. With strict set,
/// a failing stage throws VerificationFailure.
CertificateReport verify_certificate(const FpPoly& P, const std::vector<std::pair<FieldElement, FieldElement>>& scalings,
                                     const subgrp::SubgroupSpec<FieldElement>& G, const FpPoly& psi,
                                     const StepanovParams& prm, bool strict = true, unsigned threads = 1);

/// derive_params, build_system, solve_nullspace, assemble_psi and
/// verify_certificate for the order-t subgroup of F_p^*. Empty scalings means
/// h = 1 with P itself.
CertificateReport certify(const FpPoly& P, u64 p, u64 t,
                          std::vector<std::pair<FieldElement, FieldElement>> scalings = {}, bool strict = true,
                          unsigned threads = 1);

/// First D Taylor coefficients of Psi(x0 + s, y(s)) along P = 0 at (x0, y0),
/// with y(s) from the curve derivatives q_k / r_k. Requires x0 y0 P_Y(x0, y0) != 0.
std::vector<FieldElement> taylor_along_curve(const FpPoly& P, const FpPoly& psi, const FieldElement& x0,
                                             const FieldElement& y0, unsigned order);

}  // namespace smk::stepanov
