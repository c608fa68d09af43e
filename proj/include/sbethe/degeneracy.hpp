#pragma once

#include "sbethe/contours.hpp"
#include "sbethe/equilibrium.hpp"

namespace sbethe {

/// Hankel slice H_{size,k}: rows mu_{i+j} for i < size-1, last row shifted by k.
Matrix hankel_slice(const std::vector<Complex>& mu, int size, int k, mpfr_prec_t bits);

struct HankelDet {
  Complex value;
  Real log10_abs;
  Complex phase;
  bool singular = false;
};

/// det H_{n+1,k} (size n+1); needs moments through 2n+k.
HankelDet hankel_det(const std::vector<Complex>& mu, int n, int k, mpfr_prec_t bits);

/// Monic degree-n orthogonal polynomial from the n x n Hankel system.
/// Throws numeric_error when the system is singular to working precision.
Polynomial orthopoly_from_moments(const std::vector<Complex>& mu, int n, mpfr_prec_t bits);

/// Raw determinant-form coefficients: P_n(z) = sum_j C_j z^j where C_j is the
/// signed minor of the moment matrix, plus a Hadamard bound per minor as the
/// relative scale.
struct DetFormCoeffs {
  std::vector<Complex> coeffs;
  std::vector<Real> hadamard;
};
DetFormCoeffs orthopoly_determinant_form(const std::vector<Complex>& mu, int n, mpfr_prec_t bits);

/// Weights s_j recovered by the dual-contour integrals of
/// e^{-theta}/(B P_n^2) / (2 pi i).  Rebuilds the dual paths so they keep a
/// margin of 1e-3 * diameter from the zeros of P_n.
std::vector<Complex> weights_from_config(const SemiclassicalType& t, const Configuration& cfg,
                                         WeightedContourSet& wcs, const Real& tol);

/// Largest-modulus component scaled to 1.
std::vector<Complex> normalize_weights(const std::vector<Complex>& s);

struct DegeneracyReport {
  int n = 0;
  int ell = 0;
  std::vector<Real> orth_residuals;  // |M[P z^k]|, k = 0..n+ell-1
  Real orth_scale;                   // |M[P z^{n+ell}]|, the first free moment
  HankelDet D_n0;                    // det H_{n,0}
  std::vector<HankelDet> D_n1;       // det H_{n+1,k}, k = 0..d-2
  Real min_eig_nn;                   // |lambda_min| of H_{n,0}
  std::vector<Real> min_eig_n1;      // |lambda_min| of H_{n+1,k}
  std::optional<Real> ode_residual;
  std::optional<int> ode_deg_Q;
  std::optional<Real> wronskian_spread;
  bool passed = false;
};

/// Orthogonality residuals |M[P_n z^k]| for k <= n+ell-1 plus the Hankel
/// determinant and minimal-eigenvalue diagnostics.
DegeneracyReport verify_degeneracy(const SemiclassicalType& t, const WeightedContourSet& wcs,
                                   const Polynomial& P, int ell, const Real& tol);

/// Q = (B P'' - A P')/P with the relative remainder of the division.
std::pair<Polynomial, Real> heine_stieltjes_Q(const SemiclassicalType& t, const Polynomial& P);

/// R_n(z) = sum_j s_j int P(w) e^theta / (w - z) dw / (2 pi i); z must stay
/// clear of the contours.
Complex remainder_fn(const SemiclassicalType& t, const WeightedContourSet& wcs,
                     const Polynomial& P, const Complex& z, const Real& tol);
/// d/dz of the above, by a second Cauchy integral with kernel (w-z)^{-2}.
Complex remainder_fn_deriv(const SemiclassicalType& t, const WeightedContourSet& wcs,
                           const Polynomial& P, const Complex& z, const Real& tol);

/// Independent route for B = 1 types and z in the base region near the
/// escape direction: R_n(z) = P(z) e^{theta(z)} int_{inf}^z e^{-theta}/P^2.
/// Agrees with the Cauchy sum exactly when wcs.s carries the recovered
/// weights of the configuration behind P.
Complex remainder_fn_basepoint(const SemiclassicalType& t, const Polynomial& P, const Complex& z,
                               const Real& tol);

struct WronskianResult {
  std::vector<Complex> values;
  Real spread;  // max |W_i - W_j| / max |W_i|
};

/// W = -(A+B') P R + B (P' R - P R') at each sample point.
WronskianResult wronskian_check(const SemiclassicalType& t, const WeightedContourSet& wcs,
                                const Polynomial& P, const std::vector<Complex>& samples,
                                const Real& tol);

/// Sample points clear of the contour system for the Wronskian test.
std::vector<Complex> wronskian_samples(const SemiclassicalType& t, const WeightedContourSet& wcs,
                                       const std::vector<Complex>& roots, int count);

}  // namespace sbethe
