#pragma once

#include <functional>
#include <vector>

#include "sbethe/complexx.hpp"

namespace sbethe {

struct GLRule {
  std::vector<Real> nodes;    // on (-1, 1)
  std::vector<Real> weights;
};

/// Cached Gauss-Legendre rule at the given precision.
const GLRule& gl_rule(int order, mpfr_prec_t bits);

/// Vector-valued integrand sampled at parameter t in [0,1]; `out` has a fixed
/// dimension and must be filled completely.
using VecIntegrand = std::function<void(const Real& t, std::vector<Complex>& out)>;

struct VecQuadResult {
  std::vector<Complex> values;
  Real abs_error_estimate;
  long panels = 0;
};

/// Adaptive Gauss-Legendre over t in [0,1]: order-32 panels checked against
/// order-64, bisecting until the per-panel discrepancy meets the budget.
VecQuadResult adaptive_gl_01(const VecIntegrand& f, size_t dim, const Real& abs_tol,
                             mpfr_prec_t bits, int max_depth = 48, long max_panels = 20000);

/// Tanh-sinh over t in (0,1) for integrands with (integrable) algebraic
/// endpoint singularities.  The integrand receives the offset from the nearer
/// endpoint so it can evaluate without cancellation:
/// f(t, delta, from_right, out) with t = delta or 1 - delta.
using TsIntegrand = std::function<void(const Real& delta, bool from_right, std::vector<Complex>& out)>;

VecQuadResult tanh_sinh_01(const TsIntegrand& f, size_t dim, const Real& abs_tol,
                           mpfr_prec_t bits, int max_level = 12);

}  // namespace sbethe
