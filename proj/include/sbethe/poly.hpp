#pragma once

#include <optional>
#include <vector>

#include "sbethe/complexx.hpp"

namespace sbethe {

/// Dense complex-coefficient polynomial, lowest degree first.  The zero
/// polynomial has an empty coefficient list and degree() == -1 (the "-inf"
/// sentinel).  Exact-zero leading coefficients are trimmed on construction;
/// near-zero coefficients are never removed implicitly.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(mpfr_prec_t bits) : bits_(bits) {}
  explicit Polynomial(const PrecisionContext& ctx) : bits_(ctx.bits()) {}
  Polynomial(mpfr_prec_t bits, std::vector<Complex> coeffs)
      : bits_(bits), c_(std::move(coeffs)) {
    for (const auto& c : c_)
      if (c.prec() != bits_) throw precision_mismatch("Polynomial: coefficient precision");
    trim();
  }

  static Polynomial constant(const Complex& c) {
    return Polynomial(c.prec(), {c});
  }
  /// c * z^k
  static Polynomial monomial(const Complex& c, int k);
  static Polynomial from_roots(mpfr_prec_t bits, const std::vector<Complex>& roots);

  mpfr_prec_t prec() const noexcept { return bits_; }
  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const noexcept { return c_.empty(); }
  const std::vector<Complex>& coeffs() const noexcept { return c_; }

  /// Coefficient of z^k (zero beyond the stored range).
  Complex coeff(int k) const {
    if (k < 0 || k >= static_cast<int>(c_.size())) return Complex(bits_);
    return c_[static_cast<size_t>(k)];
  }
  const Complex& leading() const {
    if (c_.empty()) throw std::logic_error("Polynomial::leading on zero polynomial");
    return c_.back();
  }

  Complex operator()(const Complex& z) const { return eval(z); }
  Complex eval(const Complex& z) const;
  /// Value and derivative value in one Horner pass.
  std::pair<Complex, Complex> eval_with_derivative(const Complex& z) const;

  Polynomial derivative() const;
  /// Antiderivative with zero constant term.
  Polynomial antiderivative() const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Complex& s);
  friend Polynomial operator*(const Complex& s, const Polynomial& a) { return a * s; }
  friend Polynomial operator-(const Polynomial& a);

  /// max |coeff|; zero for the zero polynomial.
  Real max_coeff_abs() const;
  Polynomial monic() const;
  /// Composition p(z + c).
  Polynomial shift(const Complex& c) const;
  Polynomial pow(int k) const;

  /// Drops coefficients below `threshold * max_coeff_abs()`.  Explicit caller
  /// choice; nothing in the arithmetic calls this.
  Polynomial truncated(const Real& relative_threshold) const;

  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }

 private:
  mpfr_prec_t bits_ = Real::kDefaultBits;
  std::vector<Complex> c_;
};

/// Quotient and remainder with deg r < deg den; throws on zero divisor.
std::pair<Polynomial, Polynomial> poly_divmod(const Polynomial& num, const Polynomial& den);

/// Euclidean coprimality probe: false iff the remainder sequence hits a
/// near-zero remainder (relative to the operands) while the divisor still has
/// degree >= 1.
bool poly_gcd_coprime_check(const Polynomial& a, const Polynomial& b, const Real& tol);

/// Ratio of two polynomials; no implicit reduction.
struct RationalFn {
  Polynomial num;
  Polynomial den;

  Complex eval(const Complex& z) const { return num.eval(z) / den.eval(z); }
  RationalFn derivative() const {
    return RationalFn{num.derivative() * den - num * den.derivative(), den * den};
  }
};

}  // namespace sbethe
