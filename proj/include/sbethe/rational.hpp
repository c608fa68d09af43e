#pragma once

#include <gmp.h>

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sbethe/poly.hpp"

namespace sbethe {

/// Exact rational number (GMP mpq).
class Rat {
 public:
  Rat() { mpq_init(v_); }
  Rat(long num, long den = 1) {
    mpq_init(v_);
    if (den == 0) throw std::domain_error("Rat: zero denominator");
    mpq_set_si(v_, num, static_cast<unsigned long>(den > 0 ? den : -den));
    if (den < 0) mpq_neg(v_, v_);
    mpq_canonicalize(v_);
  }
  /// Parses "p", "p/q", or a plain decimal like "-3.25".
  explicit Rat(const std::string& s);
  Rat(const Rat& o) {
    mpq_init(v_);
    mpq_set(v_, o.v_);
  }
  Rat(Rat&& o) noexcept {
    mpq_init(v_);
    mpq_swap(v_, o.v_);
  }
  Rat& operator=(const Rat& o) {
    if (this != &o) mpq_set(v_, o.v_);
    return *this;
  }
  Rat& operator=(Rat&& o) noexcept {
    if (this != &o) mpq_swap(v_, o.v_);
    return *this;
  }
  ~Rat() { mpq_clear(v_); }

  bool is_zero() const noexcept { return mpq_sgn(v_) == 0; }
  int sign() const noexcept { return mpq_sgn(v_); }
  std::string to_string() const;
  double to_double() const noexcept { return mpq_get_d(v_); }
  Real to_real(mpfr_prec_t bits) const {
    Real r(bits);
    mpfr_set_q(r.raw(), v_, MPFR_RNDN);
    return r;
  }

  Rat& operator+=(const Rat& o) {
    mpq_add(v_, v_, o.v_);
    return *this;
  }
  Rat& operator-=(const Rat& o) {
    mpq_sub(v_, v_, o.v_);
    return *this;
  }
  Rat& operator*=(const Rat& o) {
    mpq_mul(v_, v_, o.v_);
    return *this;
  }
  Rat& operator/=(const Rat& o) {
    if (o.is_zero()) throw std::domain_error("Rat: division by zero");
    mpq_div(v_, v_, o.v_);
    return *this;
  }
  friend Rat operator+(Rat a, const Rat& b) { return a += b; }
  friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
  friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
  friend Rat operator/(Rat a, const Rat& b) { return a /= b; }
  friend Rat operator-(const Rat& a) {
    Rat r(a);
    mpq_neg(r.v_, r.v_);
    return r;
  }
  friend bool operator==(const Rat& a, const Rat& b) { return mpq_equal(a.v_, b.v_) != 0; }
  friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
  friend bool operator<(const Rat& a, const Rat& b) { return mpq_cmp(a.v_, b.v_) < 0; }

 private:
  mpq_t v_;
};

/// Exact Gaussian rational a + b*i.
struct QComplex {
  Rat re, im;

  QComplex() = default;
  QComplex(Rat r, Rat i = Rat()) : re(std::move(r)), im(std::move(i)) {}
  QComplex(long r, long i = 0) : re(r), im(i) {}

  bool is_zero() const { return re.is_zero() && im.is_zero(); }
  Complex to_complex(mpfr_prec_t bits) const { return Complex(re.to_real(bits), im.to_real(bits)); }
  std::string to_string() const;

  QComplex& operator+=(const QComplex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  QComplex& operator-=(const QComplex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  QComplex& operator*=(const QComplex& o) {
    Rat r = re * o.re - im * o.im;
    Rat i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
  }
  QComplex& operator/=(const QComplex& o) {
    Rat d = o.re * o.re + o.im * o.im;
    if (d.is_zero()) throw std::domain_error("QComplex: division by zero");
    Rat r = (re * o.re + im * o.im) / d;
    Rat i = (im * o.re - re * o.im) / d;
    re = std::move(r);
    im = std::move(i);
    return *this;
  }
  friend QComplex operator+(QComplex a, const QComplex& b) { return a += b; }
  friend QComplex operator-(QComplex a, const QComplex& b) { return a -= b; }
  friend QComplex operator*(QComplex a, const QComplex& b) { return a *= b; }
  friend QComplex operator/(QComplex a, const QComplex& b) { return a /= b; }
  friend QComplex operator-(const QComplex& a) { return QComplex(-a.re, -a.im); }
  friend bool operator==(const QComplex& a, const QComplex& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const QComplex& a, const QComplex& b) { return !(a == b); }
};

/// Exact polynomial over the Gaussian rationals, lowest degree first.
class QPoly {
 public:
  QPoly() = default;
  explicit QPoly(std::vector<QComplex> coeffs) : c_(std::move(coeffs)) { trim(); }
  static QPoly constant(QComplex v) { return QPoly({std::move(v)}); }
  static QPoly variable() { return QPoly({QComplex(0), QComplex(1)}); }

  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const noexcept { return c_.empty(); }
  const std::vector<QComplex>& coeffs() const noexcept { return c_; }
  QComplex coeff(int k) const {
    if (k < 0 || k >= static_cast<int>(c_.size())) return QComplex();
    return c_[static_cast<size_t>(k)];
  }
  const QComplex& leading() const {
    if (c_.empty()) throw std::logic_error("QPoly::leading on zero polynomial");
    return c_.back();
  }

  QComplex eval(const QComplex& z) const;
  QPoly derivative() const;
  QPoly antiderivative() const;
  QPoly pow(int k) const;
  Polynomial to_polynomial(mpfr_prec_t bits) const;

  QPoly& operator+=(const QPoly& o);
  QPoly& operator-=(const QPoly& o);
  friend QPoly operator+(QPoly a, const QPoly& b) { return a += b; }
  friend QPoly operator-(QPoly a, const QPoly& b) { return a -= b; }
  friend QPoly operator*(const QPoly& a, const QPoly& b);
  friend QPoly operator*(const QPoly& a, const QComplex& s);
  friend bool operator==(const QPoly& a, const QPoly& b) { return a.c_ == b.c_; }

  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }

 private:
  std::vector<QComplex> c_;
};

std::pair<QPoly, QPoly> qpoly_divmod(const QPoly& num, const QPoly& den);
/// Monic exact gcd via the Euclidean algorithm.
QPoly qpoly_gcd(QPoly a, QPoly b);

/// Reduced exact rational function.
class QRatFun {
 public:
  QRatFun() : num_(), den_(QPoly::constant(QComplex(1))) {}
  QRatFun(QPoly num, QPoly den);
  static QRatFun from_poly(QPoly p) { return QRatFun(std::move(p), QPoly::constant(QComplex(1))); }

  const QPoly& num() const noexcept { return num_; }
  const QPoly& den() const noexcept { return den_; }
  bool is_zero() const noexcept { return num_.is_zero(); }

  QComplex eval(const QComplex& z) const {
    QComplex d = den_.eval(z);
    if (d.is_zero()) throw std::domain_error("QRatFun::eval at a pole");
    return num_.eval(z) / d;
  }
  QRatFun derivative() const {
    return QRatFun(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
  }

  friend QRatFun operator+(const QRatFun& a, const QRatFun& b) {
    return QRatFun(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend QRatFun operator-(const QRatFun& a, const QRatFun& b) {
    return QRatFun(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend QRatFun operator*(const QRatFun& a, const QRatFun& b) {
    return QRatFun(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend bool operator==(const QRatFun& a, const QRatFun& b) {
    return (a - b).is_zero();
  }

 private:
  QPoly num_, den_;
};

}  // namespace sbethe
