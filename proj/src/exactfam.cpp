#include "sbethe/exactfam.hpp"

namespace sbethe {

FamilyInstance family_polynomial(const QPoly& B, long k, const QComplex& C) {
  if (B.degree() < 1) throw std::domain_error("family_polynomial: deg B >= 1 required");
  if (k < 1) throw std::domain_error("family_polynomial: k >= 1 required");
  QPoly g = qpoly_gcd(B, B.derivative());
  if (g.degree() >= 1)
    throw std::domain_error("family_polynomial: B must have simple roots");

  FamilyInstance fam;
  fam.B = B;
  fam.k = k;
  fam.C = C;
  fam.P = B.pow(static_cast<int>(k)).antiderivative() + QPoly::constant(C);
  fam.n = static_cast<int>(k) * B.degree() + 1;

  QPoly lhs = B * fam.P.derivative().derivative() -
              B.derivative() * QComplex(Rat(k)) * fam.P.derivative();
  if (!lhs.is_zero())
    throw std::logic_error("family_polynomial: exact Lame identity failed");
  return fam;
}

QComplex residue_at_root(const QPoly& B, long k, const std::vector<QComplex>& roots,
                         size_t which, const QPoly& q) {
  // res_{beta} q/B^{k+1} = (1/k!) d^k/dz^k [ q / S^{k+1} ] at beta,
  // with S = B/(z - beta)
  QPoly S = QPoly::constant(QComplex(1));
  for (size_t i = 0; i < roots.size(); ++i) {
    if (i == which) continue;
    S = S * QPoly({-roots[i], QComplex(1)});
  }
  QRatFun f(q, S.pow(static_cast<int>(k) + 1));
  Rat fact(1);
  for (long m = 2; m <= k; ++m) fact *= Rat(m);
  for (long m = 0; m < k; ++m) f = f.derivative();
  return f.eval(roots[which]) / QComplex(fact);
}

QComplex residue_apply(const QPoly& B, long k, const std::vector<QComplex>& roots,
                       const std::vector<QComplex>& weights, const QPoly& q) {
  QComplex acc;
  for (size_t l = 0; l < roots.size(); ++l)
    acc += weights[l] * residue_at_root(B, k, roots, l, q);
  return acc;
}

std::vector<QComplex> residue_moments(const QPoly& B, long k, const std::vector<QComplex>& roots,
                                      const std::vector<QComplex>& weights, int j_max) {
  std::vector<QComplex> mu;
  QPoly zj = QPoly::constant(QComplex(1));
  for (int j = 0; j <= j_max; ++j) {
    mu.push_back(residue_apply(B, k, roots, weights, zj));
    zj = zj * QPoly::variable();
  }
  return mu;
}

std::vector<Real> lifted_residuals(const SemiclassicalType& t, const WeightedContourSet& wcs,
                                   const Polynomial& P, const Complex& c, int K,
                                   const std::vector<Complex>& s_tilde, const Real& tol,
                                   Real* scale_out) {
  const mpfr_prec_t bits = t.bits;
  const int n = P.degree();
  const int m_top = n + t.d + K - 1;  // first index free of orthogonality
  const int raw_max = n + m_top;
  std::vector<std::vector<Complex>> raw;
  for (const auto& gamma : wcs.contours)
    raw.push_back(contour_monomial_integrals(gamma, t.sym, raw_max, tol, bits, {{c, K}}));

  auto lifted_apply = [&](const Polynomial& q) {
    Complex acc(bits);
    for (size_t j = 0; j < wcs.contours.size(); ++j)
      for (int i = 0; i <= q.degree(); ++i)
        acc += wcs.s[j] * q.coeff(i) * raw[j][static_cast<size_t>(i)];
    Polynomial dq = q;
    for (int l = 1; l <= K; ++l) {
      acc += s_tilde[static_cast<size_t>(l - 1)] * dq.eval(c);
      dq = dq.derivative();
    }
    return acc;
  };

  std::vector<Real> out;
  Polynomial q = P;
  for (int m = 0; m <= m_top; ++m) {
    Complex v = lifted_apply(q);
    if (m < m_top)
      out.push_back(abs(v));
    else if (scale_out)
      *scale_out = abs(v);
    q = q * Polynomial::monomial(Complex(Real::with_prec(bits, 1L), Real(bits)), 1);
  }
  return out;
}

LiftedFunctional lift_primality(const SemiclassicalType& t, const WeightedContourSet& wcs,
                                const Polynomial& P, const Complex& c, int K, const Real& tol) {
  if (wcs.s.size() != wcs.contours.size())
    throw std::logic_error("lift_primality: weights s are not set");
  const mpfr_prec_t bits = t.bits;
  const int n = P.degree();

  Real pc_scale = P.max_coeff_abs() * pow(max(Real::with_prec(bits, 1L), abs(c)),
                                          Real::with_prec(bits, static_cast<long>(n)));
  if (abs(P.eval(c)) <= tol * pc_scale)
    throw numeric_error(
        "lift_primality: c is a root of P_n; the delta-weight system is inconsistent");

  const int raw_max = n + K;
  std::vector<std::vector<Complex>> raw;
  for (const auto& gamma : wcs.contours)
    raw.push_back(contour_monomial_integrals(gamma, t.sym, raw_max, tol, bits, {{c, K}}));
  auto contour_part = [&](const Polynomial& q) {
    Complex acc(bits);
    for (size_t j = 0; j < wcs.contours.size(); ++j)
      for (int i = 0; i <= q.degree(); ++i)
        acc += wcs.s[j] * q.coeff(i) * raw[j][static_cast<size_t>(i)];
    return acc;
  };

  std::vector<Complex> dP;  // dP[r] = P^{(r)}(c)
  {
    Polynomial q = P;
    for (int r = 0; r <= K; ++r) {
      dP.push_back(q.eval(c));
      q = q.derivative();
    }
  }
  Polynomial lin(bits, {-c, Complex(Real::with_prec(bits, 1L), Real(bits))});

  // delta part of M~[P (z-c)^m] is sum_{l >= m+1} (l-1)!/(l-1-m)! P^{(l-1-m)}(c) s~_l
  LiftedFunctional out;
  out.center = c;
  out.K = K;
  out.s_tilde.assign(static_cast<size_t>(K), Complex(bits));
  std::vector<Real> factorial{Real::with_prec(bits, 1L)};
  for (int m = 1; m <= K; ++m) factorial.push_back(factorial.back() * static_cast<long>(m));

  Polynomial shifted = P;  // P (z-c)^m, built incrementally
  std::vector<Complex> T;
  for (int m = 0; m < K; ++m) {
    T.push_back(contour_part(shifted));
    shifted = shifted * lin;
  }
  for (int m = K - 1; m >= 0; --m) {
    Complex acc = T[static_cast<size_t>(m)];
    for (int l = m + 2; l <= K; ++l) {
      Real fac = factorial[static_cast<size_t>(l - 1)] / factorial[static_cast<size_t>(l - 1 - m)];
      acc += out.s_tilde[static_cast<size_t>(l - 1)] * dP[static_cast<size_t>(l - 1 - m)] * fac;
    }
    out.s_tilde[static_cast<size_t>(m)] =
        -acc / (dP[0] * factorial[static_cast<size_t>(m)]);
  }

  out.residuals = lifted_residuals(t, wcs, P, c, K, out.s_tilde, tol, &out.scale);
  return out;
}

}  // namespace sbethe
