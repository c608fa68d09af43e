#pragma once

#include <optional>
#include <vector>

#include "sbethe/poly.hpp"

namespace sbethe {

struct unsupported_type : numeric_error {
  using numeric_error::numeric_error;
};

enum class PoleKind { higher_order, end_pole, flag_pole, hard_edge };

/// A singular point of theta' dz (or a hard-edge zero of B).
struct PoleInfo {
  Complex location;     // meaningless when at_infinity
  bool at_infinity = false;
  int b_multiplicity = 0;  // multiplicity as a root of B (0 at infinity)
  int order = 0;           // pole order of theta' dz; hard edges have 0
  Complex leading;         // T_c in theta' dz = T_c zeta^{-order} (1+...) dzeta
  Complex residue;         // r_c = res theta' dz
  PoleKind kind = PoleKind::hard_edge;
};

/// One logarithmic term r * log(z - c) of an antiderivative, with its branch
/// cut running from c along `cut_angle`.  Integer coefficients are flagged:
/// they produce single-valued factors and never raise cut errors.
struct LogTerm {
  Complex center;
  Complex coeff;
  Real cut_angle;
  bool integer_coeff = false;
  long coeff_int = 0;
};

/// Principal (negative-power) part of an antiderivative at one pole:
/// sum_k coeffs[k-2] * (z-c)^{-(k-1)} for k = 2..order  (from integrating
/// e_k (z-c)^{-k}).
struct PrincipalPart {
  Complex center;
  std::vector<Complex> coeffs;  // coefficient of (z-center)^{-j}, j = 1,2,...
};

/// Branch hints for evaluating along a parameterized path: a continued
/// argument for one center (petals, arcs winding around it) and an exact
/// offset for one center coinciding with a nearby endpoint (tanh-sinh nodes).
struct EvalHints {
  std::optional<std::pair<Complex, Real>> polar;
  std::optional<std::pair<Complex, Complex>> offset;
};

/// Piecewise data of an antiderivative of a rational function:
/// poly_part(z) + sum principal parts + sum log terms.
struct Antiderivative {
  Polynomial poly_part;
  std::vector<PrincipalPart> principal;
  std::vector<LogTerm> logs;

  /// Evaluates with each log on its own cut determination.  Throws
  /// numeric_error when z lies on a cut of a non-integer log term or at a
  /// pole center.
  Complex eval(const Complex& z, const EvalHints* hints = nullptr) const;
};

struct SymbolFns {
  RationalFn theta_prime;      // -(A + B')/B
  RationalFn theta_hat_prime;  // A/B
  Antiderivative theta;
  Antiderivative theta_hat;    // anchored so theta_hat(0) = 0 when 0 is regular
};

/// Semiclassical type (A, B) with derived symbol and pole data.
struct SemiclassicalType {
  Polynomial A, B;
  int a = 0, b = 0;
  int d = 0;       // max(deg A, deg B - 1)
  int d_inf = 0;   // deg A - deg B + 1 (order data at infinity, when >= 1)
  Complex Lambda;  // -res_{z=inf} theta'(z) dz
  std::vector<PoleInfo> poles;       // finite poles / hard edges of theta' dz
  std::optional<PoleInfo> pole_inf;  // present when theta' dz is singular at infinity
  SymbolFns sym;
  mpfr_prec_t bits = Real::kDefaultBits;
  int digits = 50;

  bool finite_rank = false;  // A = k B' with integer k >= 1
  long finite_rank_k = 0;

  /// 2n > Re Lambda - 1 - deg B, required for weight recovery when deg A < deg B.
  bool degree_bound_ok(int n) const;
};

/// Builds the type from A and B (B nonzero).  B is normalized to monic and A
/// rescaled accordingly.  Throws unsupported_type for the contour classes that
/// are out of scope (deg A < deg B with all-simple-root B carrying a
/// non-integer flag-pole residue) and numeric_error when A, B fail the
/// coprimality probe with allow_nonprime = false.
SemiclassicalType build_type(const Polynomial& A, const Polynomial& B, bool allow_nonprime,
                             const PrecisionContext& ctx);

/// Steepest descent/ascent rays at a pole of order >= 2, as angles of the
/// local parameter (z - c at finite poles, 1/z at infinity).  Entry 2k is a
/// descent direction (Re theta -> -inf), entry 2k+1 ascent.
std::vector<Real> steepest_directions(const SemiclassicalType& t, const PoleInfo& pole);

/// Ray angles in the z-plane at infinity: ray(m) = first descent angle + m*pi/d_inf.
/// Even m are descent rays of e^theta.
Real infinity_ray_angle(const SemiclassicalType& t, int m);

Complex eval_theta(const SymbolFns& sym, const Complex& z);
Complex eval_theta_hat(const SymbolFns& sym, const Complex& z);

}  // namespace sbethe
