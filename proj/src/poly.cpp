#include "sbethe/poly.hpp"

namespace sbethe {

Polynomial Polynomial::monomial(const Complex& c, int k) {
  std::vector<Complex> v(static_cast<size_t>(k) + 1, Complex(c.prec()));
  v.back() = c;
  return Polynomial(c.prec(), std::move(v));
}

Polynomial Polynomial::from_roots(mpfr_prec_t bits, const std::vector<Complex>& roots) {
  Polynomial p(bits, {Complex(Real::with_prec(bits, 1L), Real(bits))});
  for (const auto& r : roots) {
    Polynomial lin(bits, {-r, Complex(Real::with_prec(bits, 1L), Real(bits))});
    p = p * lin;
  }
  return p;
}

Complex Polynomial::eval(const Complex& z) const {
  Complex acc(bits_);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    acc *= z;
    acc += *it;
  }
  return acc;
}

std::pair<Complex, Complex> Polynomial::eval_with_derivative(const Complex& z) const {
  Complex p(bits_), dp(bits_);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    dp = dp * z + p;
    p = p * z + *it;
  }
  return {p, dp};
}

Polynomial Polynomial::derivative() const {
  if (c_.size() <= 1) return Polynomial(bits_);
  std::vector<Complex> d;
  d.reserve(c_.size() - 1);
  for (size_t k = 1; k < c_.size(); ++k) d.push_back(c_[k] * static_cast<long>(k));
  return Polynomial(bits_, std::move(d));
}

Polynomial Polynomial::antiderivative() const {
  if (c_.empty()) return Polynomial(bits_);
  std::vector<Complex> a;
  a.reserve(c_.size() + 1);
  a.emplace_back(bits_);
  for (size_t k = 0; k < c_.size(); ++k) a.push_back(c_[k] / static_cast<long>(k + 1));
  return Polynomial(bits_, std::move(a));
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (o.bits_ != bits_) throw precision_mismatch("Polynomial: mixed-precision operands");
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Complex(bits_));
  for (size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
  trim();
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  if (o.bits_ != bits_) throw precision_mismatch("Polynomial: mixed-precision operands");
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Complex(bits_));
  for (size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
  trim();
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.bits_ != b.bits_) throw precision_mismatch("Polynomial: mixed-precision operands");
  if (a.is_zero() || b.is_zero()) return Polynomial(a.bits_);
  std::vector<Complex> r(a.c_.size() + b.c_.size() - 1, Complex(a.bits_));
  for (size_t i = 0; i < a.c_.size(); ++i)
    for (size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
  return Polynomial(a.bits_, std::move(r));
}

Polynomial operator*(const Polynomial& a, const Complex& s) {
  std::vector<Complex> r = a.c_;
  for (auto& c : r) c *= s;
  return Polynomial(a.bits_, std::move(r));
}

Polynomial operator-(const Polynomial& a) {
  std::vector<Complex> r = a.c_;
  for (auto& c : r) c = -c;
  return Polynomial(a.bits_, std::move(r));
}

Real Polynomial::max_coeff_abs() const {
  Real m(bits_);
  for (const auto& c : c_) m = max(m, abs(c));
  return m;
}

Polynomial Polynomial::monic() const {
  if (is_zero()) throw std::logic_error("Polynomial::monic on zero polynomial");
  Complex lead = leading();
  std::vector<Complex> r = c_;
  for (auto& c : r) c /= lead;
  r.back() = Complex(Real::with_prec(bits_, 1L), Real(bits_));
  return Polynomial(bits_, std::move(r));
}

Polynomial Polynomial::shift(const Complex& c) const {
  // Horner-style Taylor shift
  Polynomial acc(bits_);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    Polynomial lin(bits_, {c, Complex(Real::with_prec(bits_, 1L), Real(bits_))});
    acc = acc * lin;
    acc += Polynomial::constant(*it);
  }
  return acc;
}

Polynomial Polynomial::pow(int k) const {
  Polynomial acc = Polynomial::constant(Complex(Real::with_prec(bits_, 1L), Real(bits_)));
  for (int i = 0; i < k; ++i) acc = acc * (*this);
  return acc;
}

Polynomial Polynomial::truncated(const Real& relative_threshold) const {
  Real cutoff = relative_threshold * max_coeff_abs();
  std::vector<Complex> r = c_;
  for (auto& c : r)
    if (abs(c) < cutoff) c = Complex(bits_);
  return Polynomial(bits_, std::move(r));
}

std::pair<Polynomial, Polynomial> poly_divmod(const Polynomial& num, const Polynomial& den) {
  if (den.is_zero()) throw std::domain_error("poly_divmod: division by zero polynomial");
  if (num.prec() != den.prec()) throw precision_mismatch("poly_divmod: mixed-precision operands");
  const mpfr_prec_t bits = num.prec();
  const int dn = num.degree(), dd = den.degree();
  if (dn < dd) return {Polynomial(bits), num};

  std::vector<Complex> work = num.coeffs();
  std::vector<Complex> q(static_cast<size_t>(dn - dd) + 1, Complex(bits));
  const Complex& lead = den.leading();
  for (int i = dn; i >= dd; --i) {
    Complex factor = work[static_cast<size_t>(i)] / lead;
    q[static_cast<size_t>(i - dd)] = factor;
    // cancelled position cleared structurally, not by subtraction
    work[static_cast<size_t>(i)] = Complex(bits);
    for (int j = 0; j < dd; ++j)
      work[static_cast<size_t>(i - dd + j)] -= factor * den.coeff(j);
  }
  work.resize(static_cast<size_t>(dd > 0 ? dd : 0));
  return {Polynomial(bits, std::move(q)), Polynomial(bits, std::move(work))};
}

bool poly_gcd_coprime_check(const Polynomial& a, const Polynomial& b, const Real& tol) {
  if (a.is_zero() && b.is_zero())
    throw std::domain_error("poly_gcd_coprime_check: both polynomials zero");
  Polynomial u = a, v = b;
  if (u.degree() < v.degree()) std::swap(u, v);
  if (v.is_zero()) return u.degree() == 0;
  Real scale = max(u.max_coeff_abs(), v.max_coeff_abs());
  while (v.degree() >= 1) {
    Polynomial r = poly_divmod(u, v.monic()).second;
    if (r.max_coeff_abs() < tol * scale) return false;  // v (deg >= 1) nearly divides u
    u = std::move(v);
    v = std::move(r);
    scale = max(u.max_coeff_abs(), v.max_coeff_abs());
  }
  return true;  // reached a constant remainder
}

}  // namespace sbethe
