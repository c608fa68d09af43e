#pragma once

#include "sbethe/real.hpp"

namespace sbethe {

/// Complex scalar over Real; both parts always share one precision.
class Complex {
 public:
  Complex() = default;
  explicit Complex(mpfr_prec_t bits) : re_(bits), im_(bits) {}
  explicit Complex(const PrecisionContext& ctx) : re_(ctx), im_(ctx) {}
  Complex(Real re, Real im) : re_(std::move(re)), im_(std::move(im)) {
    if (re_.prec() != im_.prec()) throw precision_mismatch("Complex: re/im precision differ");
  }
  explicit Complex(Real re) : re_(std::move(re)), im_(re_.prec()) {}
  Complex(const PrecisionContext& ctx, double re, double im = 0.0)
      : re_(ctx, re), im_(ctx, im) {}
  Complex(const PrecisionContext& ctx, const std::string& re, const std::string& im)
      : re_(ctx, re), im_(ctx, im) {}

  const Real& re() const noexcept { return re_; }
  const Real& im() const noexcept { return im_; }
  Real& re() noexcept { return re_; }
  Real& im() noexcept { return im_; }
  mpfr_prec_t prec() const noexcept { return re_.prec(); }

  bool is_zero() const noexcept { return re_.is_zero() && im_.is_zero(); }
  bool is_finite() const noexcept { return re_.is_finite() && im_.is_finite(); }

  Complex same(long re, long im = 0) const {
    return Complex(Real::with_prec(prec(), re), Real::with_prec(prec(), im));
  }

  Complex& operator+=(const Complex& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  Complex& operator-=(const Complex& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  Complex& operator*=(const Complex& o) {
    Real r = re_ * o.re_ - im_ * o.im_;
    Real i = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(r);
    im_ = std::move(i);
    return *this;
  }
  Complex& operator*=(const Real& s) {
    re_ *= s;
    im_ *= s;
    return *this;
  }
  Complex& operator*=(long k) {
    re_ *= k;
    im_ *= k;
    return *this;
  }
  Complex& operator/=(const Complex& o) {
    Real d = o.re_ * o.re_ + o.im_ * o.im_;
    Real r = (re_ * o.re_ + im_ * o.im_) / d;
    Real i = (im_ * o.re_ - re_ * o.im_) / d;
    re_ = std::move(r);
    im_ = std::move(i);
    return *this;
  }
  Complex& operator/=(const Real& s) {
    re_ /= s;
    im_ /= s;
    return *this;
  }
  Complex& operator/=(long k) {
    re_ /= k;
    im_ /= k;
    return *this;
  }

  friend Complex operator+(Complex a, const Complex& b) { return a += b; }
  friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
  friend Complex operator*(Complex a, const Complex& b) { return a *= b; }
  friend Complex operator/(Complex a, const Complex& b) { return a /= b; }
  friend Complex operator*(Complex a, const Real& s) { return a *= s; }
  friend Complex operator*(const Real& s, Complex a) { return a *= s; }
  friend Complex operator/(Complex a, const Real& s) { return a /= s; }
  friend Complex operator*(Complex a, long k) { return a *= k; }
  friend Complex operator*(long k, Complex a) { return a *= k; }
  friend Complex operator/(Complex a, long k) { return a /= k; }
  friend Complex operator-(const Complex& a) { return Complex(-a.re_, -a.im_); }
  friend bool operator==(const Complex& a, const Complex& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const Complex& a, const Complex& b) { return !(a == b); }

 private:
  Real re_, im_;
};

inline Complex conj(const Complex& z) { return Complex(z.re(), -z.im()); }
inline Real abs(const Complex& z) { return hypot(z.re(), z.im()); }
inline Real norm(const Complex& z) { return z.re() * z.re() + z.im() * z.im(); }
inline Real arg(const Complex& z) { return atan2(z.im(), z.re()); }

inline Complex polar(const Real& r, const Real& phi) {
  return Complex(r * cos(phi), r * sin(phi));
}

inline Complex exp(const Complex& z) {
  Real m = exp(z.re());
  return Complex(m * cos(z.im()), m * sin(z.im()));
}

/// Principal logarithm (cut along the negative real axis).
inline Complex log(const Complex& z) { return Complex(log(abs(z)), arg(z)); }

inline Complex sqrt(const Complex& z) {
  // principal branch via half-angle
  Real r = abs(z);
  if (r.is_zero()) return Complex(z.prec());
  Real half = Real::with_prec(z.prec(), 0.5);
  return polar(sqrt(r), arg(z) * half);
}

inline Complex pow_si(const Complex& z, long k) {
  Complex acc = z.same(1);
  Complex base = z;
  long n = k >= 0 ? k : -k;
  while (n > 0) {
    if (n & 1) acc *= base;
    base *= base;
    n >>= 1;
  }
  if (k < 0) acc = z.same(1) / acc;
  return acc;
}

inline Complex inv(const Complex& z) { return z.same(1) / z; }

}  // namespace sbethe
