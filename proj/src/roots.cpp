#include "sbethe/roots.hpp"

#include <cmath>

namespace sbethe {

namespace {

// Cauchy-style inclusion radius for a monic polynomial.
double root_radius(const Polynomial& p) {
  const int n = p.degree();
  double m = 0.0;
  for (int k = 0; k < n; ++k) {
    double c = abs(p.coeff(k)).to_double();
    if (std::isfinite(c)) m = std::max(m, c);
  }
  return 1.0 + m;
}

}  // namespace

std::vector<Complex> poly_roots(const Polynomial& p, const RootOptions& opt) {
  if (p.degree() < 1) throw std::domain_error("poly_roots: degree must be >= 1");
  const mpfr_prec_t bits = p.prec();

  // roots at the origin come from trailing zero coefficients
  std::vector<Complex> result;
  Polynomial q = p.monic();
  {
    std::vector<Complex> c = q.coeffs();
    size_t strip = 0;
    while (strip < c.size() - 1 && c[strip].is_zero()) ++strip;
    for (size_t i = 0; i < strip; ++i) result.emplace_back(bits);
    if (strip > 0) q = Polynomial(bits, std::vector<Complex>(c.begin() + strip, c.end()));
  }
  const int n = q.degree();
  if (n == 0) return result;
  if (n == 1) {
    result.push_back(-q.coeff(0));
    return result;
  }

  const double R = std::min(root_radius(q), 1e6);
  std::vector<Complex> z;
  z.reserve(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) {
    double phi = 2.0 * 3.14159265358979323846 * k / n + 0.3817;
    double r = R * (0.6 + 0.25 * ((k * 53) % 7) / 7.0);
    z.emplace_back(Real::with_prec(bits, r * std::cos(phi)), Real::with_prec(bits, r * std::sin(phi)));
  }

  const Real step_tol = pow10(bits, -static_cast<long>(bits * 0.30103) + 4);
  const Real one = Real::with_prec(bits, 1L);

  bool converged = false;
  for (int iter = 0; iter < opt.max_iterations && !converged; ++iter) {
    Real max_step(bits);
    for (int i = 0; i < n; ++i) {
      auto [pv, dpv] = q.eval_with_derivative(z[static_cast<size_t>(i)]);
      if (pv.is_zero()) continue;
      Complex newton = dpv.is_zero() ? Complex(Real::with_prec(bits, 1e-3), Real(bits))
                                     : pv / dpv;
      Complex sum(bits);
      for (int j = 0; j < n; ++j)
        if (j != i) sum += inv(z[static_cast<size_t>(i)] - z[static_cast<size_t>(j)]);
      Complex denom = Complex(one, Real(bits)) - newton * sum;
      Complex delta = denom.is_zero() ? newton : newton / denom;
      z[static_cast<size_t>(i)] -= delta;
      Real rel = abs(delta) / (one + abs(z[static_cast<size_t>(i)]));
      max_step = max(max_step, rel);
    }
    if (max_step < step_tol) converged = true;
  }
  if (!converged) throw convergence_error("poly_roots: Aberth iteration budget exhausted");

  // Newton polish against the original (monic) polynomial
  for (auto& r : z) {
    for (int it = 0; it < opt.polish_iterations; ++it) {
      auto [pv, dpv] = q.eval_with_derivative(r);
      if (pv.is_zero() || dpv.is_zero()) break;
      r -= pv / dpv;
    }
    result.push_back(r);
  }
  return result;
}

}  // namespace sbethe
