#pragma once

#include "sbethe/degeneracy.hpp"
#include "sbethe/rational.hpp"

namespace sbethe {

/// One member of the exact family P = int_0^z B^k + C, which solves the
/// equilibrium equations for A = k B' with the trivial Van Vleck polynomial.
struct FamilyInstance {
  QPoly B;
  long k = 1;
  QComplex C;
  QPoly P;
  int n = 0;  // k deg B + 1
};

/// Builds the family member and verifies B P'' - k B' P' = 0 exactly.
/// B must have simple roots (exact gcd(B, B') constant) and k >= 1.
FamilyInstance family_polynomial(const QPoly& B, long k, const QComplex& C);

/// Exact residue res_{beta} q / B^{k+1} for a simple root beta of B.
QComplex residue_at_root(const QPoly& B, long k, const std::vector<QComplex>& roots,
                         size_t which, const QPoly& q);

/// Exact functional M[q] = sum_l w_l res_{beta_l} q / B^{k+1}.
QComplex residue_apply(const QPoly& B, long k, const std::vector<QComplex>& roots,
                       const std::vector<QComplex>& weights, const QPoly& q);

/// Exact moment list mu_j for j = 0..j_max.
std::vector<QComplex> residue_moments(const QPoly& B, long k, const std::vector<QComplex>& roots,
                                      const std::vector<QComplex>& weights, int j_max);

/// Functional lifted through the multiplier (z - c)^K: delta-term weights and
/// the extended orthogonality residuals of the same P_n.
struct LiftedFunctional {
  Complex center;
  int K = 0;
  std::vector<Complex> s_tilde;
  std::vector<Real> residuals;  // |M~[P z^m]| for m = 0..n+d+K-2
  Real scale;                   // |M~[P z^{n+d+K-1}]|
};

/// Solves the triangular system for s~ by back-substitution and verifies the
/// n+d+K-1 orthogonality conditions by quadrature (contour integrals carry
/// the extra (z-c)^{-K} factor).  Throws numeric_error when c is a root of
/// P_n: the system is inconsistent there.
LiftedFunctional lift_primality(const SemiclassicalType& t, const WeightedContourSet& wcs,
                                const Polynomial& P, const Complex& c, int K, const Real& tol);

/// Residuals of the lifted orthogonality for externally supplied delta
/// weights (used to probe minimality of the recovered s~).
std::vector<Real> lifted_residuals(const SemiclassicalType& t, const WeightedContourSet& wcs,
                                   const Polynomial& P, const Complex& c, int K,
                                   const std::vector<Complex>& s_tilde, const Real& tol,
                                   Real* scale_out = nullptr);

}  // namespace sbethe
