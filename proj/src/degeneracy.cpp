#include "sbethe/degeneracy.hpp"

#include <algorithm>
#include <cmath>

namespace sbethe {

Matrix hankel_slice(const std::vector<Complex>& mu, int size, int k, mpfr_prec_t bits) {
  if (static_cast<int>(mu.size()) < 2 * (size - 1) + k + 1)
    throw std::domain_error("hankel_slice: not enough moments");
  Matrix H(bits, size, size);
  for (int i = 0; i + 1 < size; ++i)
    for (int j = 0; j < size; ++j) H.at(i, j) = mu[static_cast<size_t>(i + j)];
  for (int j = 0; j < size; ++j)
    H.at(size - 1, j) = mu[static_cast<size_t>(size - 1 + k + j)];
  return H;
}

HankelDet hankel_det(const std::vector<Complex>& mu, int n, int k, mpfr_prec_t bits) {
  Matrix H = hankel_slice(mu, n + 1, k, bits);
  DetResult d = determinant(H);
  return HankelDet{d.value, d.log10_abs, d.phase, d.singular};
}

Polynomial orthopoly_from_moments(const std::vector<Complex>& mu, int n, mpfr_prec_t bits) {
  if (n == 0) return Polynomial::constant(Complex(Real::with_prec(bits, 1L), Real(bits)));
  if (static_cast<int>(mu.size()) < 2 * n)
    throw std::domain_error("orthopoly_from_moments: needs moments through 2n-1");
  Matrix H(bits, n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) H.at(i, j) = mu[static_cast<size_t>(i + j)];
  LU f = lu_decompose(H);
  if (f.singular)
    throw numeric_error("orthopoly_from_moments: Hankel system singular (D_{n,0} ~ 0)");
  std::vector<Complex> rhs;
  for (int i = 0; i < n; ++i) rhs.push_back(-mu[static_cast<size_t>(i + n)]);
  std::vector<Complex> c = lu_solve(f, rhs);
  c.emplace_back(Real::with_prec(bits, 1L), Real(bits));
  return Polynomial(bits, std::move(c));
}

DetFormCoeffs orthopoly_determinant_form(const std::vector<Complex>& mu, int n, mpfr_prec_t bits) {
  // C_j = (-1)^{n+j} det of the moment matrix with column j removed
  DetFormCoeffs out;
  for (int j = 0; j <= n; ++j) {
    Matrix M(bits, n, n);
    Real had = Real::with_prec(bits, 1L);
    for (int r = 0; r < n; ++r) {
      int cc = 0;
      Real row_norm(bits);
      for (int c = 0; c <= n; ++c) {
        if (c == j) continue;
        M.at(r, cc) = mu[static_cast<size_t>(r + c)];
        row_norm += norm(M.at(r, cc));
        ++cc;
      }
      had *= sqrt(row_norm);
    }
    DetResult d = determinant(M);
    Complex val = d.value;
    if ((n + j) % 2 == 1) val = -val;
    out.coeffs.push_back(val);
    out.hadamard.push_back(had);
  }
  return out;
}

std::vector<Complex> normalize_weights(const std::vector<Complex>& s) {
  if (s.empty()) return s;
  size_t imax = 0;
  for (size_t i = 1; i < s.size(); ++i)
    if (abs(s[i]) > abs(s[imax])) imax = i;
  if (s[imax].is_zero()) return s;
  std::vector<Complex> out;
  out.reserve(s.size());
  for (const auto& v : s) out.push_back(v / s[imax]);
  return out;
}

std::vector<Complex> weights_from_config(const SemiclassicalType& t, const Configuration& cfg,
                                         WeightedContourSet& wcs, const Real& tol) {
  if (!cfg.converged)
    throw std::invalid_argument("weights_from_config: configuration not converged");
  if (t.a < t.b && !t.degree_bound_ok(cfg.n))
    throw numeric_error(
        "weights_from_config: dual integrals diverge at infinity (degree bound violated)");
  const mpfr_prec_t bits = t.bits;

  Real diam(bits);
  for (size_t i = 0; i < cfg.points.size(); ++i)
    for (size_t j = i + 1; j < cfg.points.size(); ++j)
      diam = max(diam, abs(cfg.points[i] - cfg.points[j]));
  if (diam.is_zero()) diam = Real::with_prec(bits, 1L);
  double margin = 1e-3 * diam.to_double();

  std::vector<Contour> duals = duals_avoiding(t, wcs, cfg.points, margin);
  wcs.duals = duals;

  Polynomial P = Polynomial::from_roots(bits, cfg.points);
  Polynomial den = t.B * P * P;
  Polynomial one = Polynomial::constant(Complex(Real::with_prec(bits, 1L), Real(bits)));

  std::vector<Complex> s;
  const Complex two_pi_i(Real(bits), pi(bits) * 2L);
  for (const auto& D : duals) {
    Integrand f{one, -1, den, {}};
    QuadratureReport rep = integrate_weighted(D, f, t.sym, tol, bits);
    s.push_back(rep.value / two_pi_i);
  }
  return s;
}

DegeneracyReport verify_degeneracy(const SemiclassicalType& t, const WeightedContourSet& wcs,
                                   const Polynomial& P, int ell, const Real& tol) {
  const mpfr_prec_t bits = t.bits;
  const int n = P.degree();
  if (ell < 0 || ell > t.d - 1)
    throw std::invalid_argument("verify_degeneracy: ell must lie in [0, d-1]");
  DegeneracyReport rep;
  rep.n = n;
  rep.ell = ell;

  const int k_max = 2 * n + t.d - 1;
  std::vector<Complex> mu = moments(wcs, t.sym, k_max, tol, bits);

  auto functional_on = [&](int k) {
    Complex acc(bits);
    for (int m = 0; m <= n; ++m) acc += P.coeff(m) * mu[static_cast<size_t>(m + k)];
    return acc;
  };

  for (int k = 0; k <= n + ell - 1; ++k) rep.orth_residuals.push_back(abs(functional_on(k)));
  rep.orth_scale = abs(functional_on(n + ell));

  rep.D_n0 = hankel_det(mu, n - 1, 0, bits);  // det H_{n,0}
  rep.min_eig_nn = min_abs_eigenvalue(hankel_slice(mu, n, 0, bits)).modulus;
  for (int k = 0; k + 2 <= t.d; ++k) {
    rep.D_n1.push_back(hankel_det(mu, n, k, bits));
    rep.min_eig_n1.push_back(min_abs_eigenvalue(hankel_slice(mu, n + 1, k, bits)).modulus);
  }

  Real floor_scale = max(rep.orth_scale, Real::with_prec(bits, 1e-30));
  rep.passed = true;
  for (const auto& r : rep.orth_residuals)
    if (!(r <= tol * floor_scale)) rep.passed = false;
  return rep;
}

std::pair<Polynomial, Real> heine_stieltjes_Q(const SemiclassicalType& t, const Polynomial& P) {
  if (P.is_zero()) throw std::domain_error("heine_stieltjes_Q: zero polynomial");
  Polynomial dividend = t.B * P.derivative().derivative() - t.A * P.derivative();
  auto [q, r] = poly_divmod(dividend, P);
  Real denom = max(dividend.max_coeff_abs(), Real::with_prec(t.bits, 1e-300));
  return {q, r.max_coeff_abs() / denom};
}

namespace {

Complex cauchy_sum(const SemiclassicalType& t, const WeightedContourSet& wcs, const Polynomial& P,
                   const Complex& z, int kernel_order, const Real& tol) {
  if (wcs.s.size() != wcs.contours.size())
    throw std::logic_error("remainder_fn: weights s are not set");
  const mpfr_prec_t bits = t.bits;
  // the pole of the kernel must stay clear of every path
  for (const auto& c : wcs.contours) {
    double d = polyline_distance(c, {z});
    if (d < 1e-3) throw numeric_error("remainder_fn: z too close to a contour");
  }
  Complex acc(bits);
  const Complex two_pi_i(Real(bits), pi(bits) * 2L);
  for (size_t j = 0; j < wcs.contours.size(); ++j) {
    if (wcs.s[j].is_zero()) continue;
    Integrand f{P, +1, {}, {{z, kernel_order}}};
    QuadratureReport rep = integrate_weighted(wcs.contours[j], f, t.sym, tol, bits);
    acc += wcs.s[j] * rep.value;
  }
  return acc / two_pi_i;
}

}  // namespace

Complex remainder_fn(const SemiclassicalType& t, const WeightedContourSet& wcs,
                     const Polynomial& P, const Complex& z, const Real& tol) {
  return cauchy_sum(t, wcs, P, z, 1, tol);
}

Complex remainder_fn_deriv(const SemiclassicalType& t, const WeightedContourSet& wcs,
                           const Polynomial& P, const Complex& z, const Real& tol) {
  return cauchy_sum(t, wcs, P, z, 2, tol);
}

Complex remainder_fn_basepoint(const SemiclassicalType& t, const Polynomial& P, const Complex& z,
                               const Real& tol) {
  if (t.b != 0)
    throw unsupported_type("remainder_fn_basepoint: implemented for B = 1 types");
  const mpfr_prec_t bits = t.bits;
  // base direction: the last ascent ray at infinity
  Real base_angle = infinity_ray_angle(t, 2 * t.d_inf - 1);
  Real Rhat = ray_truncation_radius(t, z, base_angle, -1, 2.0 * P.degree());
  Complex u = polar(Real::with_prec(bits, 1L), base_angle);
  Contour path;
  path.kind = ContourKind::dual_ray;
  path.segs.push_back(Segment::line_between(z + u * Rhat, z));
  Polynomial den = P * P;
  Polynomial one = Polynomial::constant(Complex(Real::with_prec(bits, 1L), Real(bits)));
  Integrand f{one, -1, den, {}};
  QuadratureReport rep = integrate_weighted(path, f, t.sym, tol, bits);
  // normalized to the Cauchy-sum route, whose weights carry the 1/(2 pi i)
  // of the recovery integrals
  const Complex two_pi_i(Real(bits), pi(bits) * 2L);
  return P.eval(z) * exp(eval_theta(t.sym, z)) * rep.value / two_pi_i;
}

WronskianResult wronskian_check(const SemiclassicalType& t, const WeightedContourSet& wcs,
                                const Polynomial& P, const std::vector<Complex>& samples,
                                const Real& tol) {
  const mpfr_prec_t bits = t.bits;
  Polynomial Ahat = t.A + t.B.derivative();
  Polynomial Pp = P.derivative();
  WronskianResult out{{}, Real(bits)};
  for (const auto& z : samples) {
    Complex R = remainder_fn(t, wcs, P, z, tol);
    Complex Rp = remainder_fn_deriv(t, wcs, P, z, tol);
    Complex W = -Ahat.eval(z) * P.eval(z) * R +
                t.B.eval(z) * (Pp.eval(z) * R - P.eval(z) * Rp);
    out.values.push_back(W);
  }
  Real mx(bits), spread(bits);
  for (const auto& w : out.values) mx = max(mx, abs(w));
  for (size_t i = 0; i < out.values.size(); ++i)
    for (size_t j = i + 1; j < out.values.size(); ++j)
      spread = max(spread, abs(out.values[i] - out.values[j]));
  out.spread = mx.is_zero() ? Real(bits) : spread / mx;
  return out;
}

std::vector<Complex> wronskian_samples(const SemiclassicalType& t, const WeightedContourSet& wcs,
                                       const std::vector<Complex>& roots, int count) {
  const mpfr_prec_t bits = t.bits;
  double base = 1.0;
  for (const auto& r : roots) base = std::max(base, abs(r).to_double());
  std::vector<Complex> out;
  for (double rad : {1.45, 1.9, 2.6}) {
    for (double ang = 0.37; ang < 6.2; ang += 0.83) {
      if (static_cast<int>(out.size()) >= count) return out;
      Complex z(Real::with_prec(bits, base * rad * std::cos(ang)),
                Real::with_prec(bits, base * rad * std::sin(ang)));
      bool ok = true;
      for (const auto& c : wcs.contours)
        if (polyline_distance(c, {z}) < 0.15 * base) ok = false;
      for (const auto& r : roots)
        if (abs(z - r).to_double() < 0.2 * base) ok = false;
      if (ok) out.push_back(z);
    }
  }
  if (static_cast<int>(out.size()) < count)
    throw numeric_error("wronskian_samples: could not place enough sample points");
  return out;
}

}  // namespace sbethe
