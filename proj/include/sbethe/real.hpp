#pragma once

#include <mpfr.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace sbethe {

struct precision_mismatch : std::logic_error {
  using std::logic_error::logic_error;
};

struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct convergence_error : numeric_error {
  using numeric_error::numeric_error;
};

/// Working precision for every scalar created under it.  `digits` are the
/// significant decimal digits requested by the user; `guard_digits` extra
/// digits absorb roundoff so that results are trustworthy to `digits`.
class PrecisionContext {
 public:
  explicit PrecisionContext(int digits = 50, int guard_digits = 10)
      : digits_(digits), guard_(guard_digits) {
    if (digits < 15) throw std::invalid_argument("PrecisionContext: digits must be >= 15");
    if (guard_digits < 1) throw std::invalid_argument("PrecisionContext: guard_digits must be >= 1");
    bits_ = static_cast<mpfr_prec_t>((digits_ + guard_) * 3.3219280948873623 + 16.0);
  }

  int digits() const noexcept { return digits_; }
  int guard_digits() const noexcept { return guard_; }
  int working_digits() const noexcept { return digits_ + guard_; }
  mpfr_prec_t bits() const noexcept { return bits_; }

 private:
  int digits_;
  int guard_;
  mpfr_prec_t bits_;
};

/// Arbitrary-precision real number.  Every value carries its mpfr precision;
/// binary operations on operands of different precision throw instead of
/// silently rounding one side.
class Real {
 public:
  Real() : Real(kDefaultBits) {}
  explicit Real(mpfr_prec_t bits) {
    mpfr_init2(v_, bits);
    mpfr_set_zero(v_, 1);
  }
  explicit Real(const PrecisionContext& ctx) : Real(ctx.bits()) {}
  Real(const PrecisionContext& ctx, long value) : Real(ctx.bits()) { mpfr_set_si(v_, value, MPFR_RNDN); }
  Real(const PrecisionContext& ctx, double value) : Real(ctx.bits()) { mpfr_set_d(v_, value, MPFR_RNDN); }
  Real(const PrecisionContext& ctx, const std::string& decimal) : Real(ctx.bits()) {
    if (mpfr_set_str(v_, decimal.c_str(), 10, MPFR_RNDN) != 0)
      throw std::invalid_argument("Real: cannot parse decimal string '" + decimal + "'");
  }

  Real(const Real& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  Real(Real&& o) noexcept {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_swap(v_, o.v_);
  }
  Real& operator=(const Real& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& o) noexcept {
    if (this != &o) mpfr_swap(v_, o.v_);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  mpfr_prec_t prec() const noexcept { return mpfr_get_prec(v_); }
  mpfr_srcptr raw() const noexcept { return v_; }
  mpfr_ptr raw() noexcept { return v_; }

  static Real with_prec(mpfr_prec_t bits, long value) {
    Real r(bits);
    mpfr_set_si(r.v_, value, MPFR_RNDN);
    return r;
  }
  static Real with_prec(mpfr_prec_t bits, double value) {
    Real r(bits);
    mpfr_set_d(r.v_, value, MPFR_RNDN);
    return r;
  }

  /// Same-precision companion value.
  Real same(long value) const { return with_prec(prec(), value); }
  Real same(double value) const { return with_prec(prec(), value); }

  double to_double() const noexcept { return mpfr_get_d(v_, MPFR_RNDN); }
  long to_long() const noexcept { return mpfr_get_si(v_, MPFR_RNDN); }

  bool is_zero() const noexcept { return mpfr_zero_p(v_) != 0; }
  bool is_nan() const noexcept { return mpfr_nan_p(v_) != 0; }
  bool is_finite() const noexcept { return mpfr_number_p(v_) != 0; }
  int sign() const noexcept { return mpfr_sgn(v_); }
  /// Base-2 exponent of the leading bit; 0 for zero/nan.
  long exp2() const noexcept { return is_zero() || !is_finite() ? 0 : mpfr_get_exp(v_); }

  std::string to_string(int decimal_digits = 0) const;

  Real& operator+=(const Real& o) {
    check(o);
    mpfr_add(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }
  Real& operator-=(const Real& o) {
    check(o);
    mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }
  Real& operator*=(const Real& o) {
    check(o);
    mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }
  Real& operator/=(const Real& o) {
    check(o);
    mpfr_div(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }
  Real& operator*=(long k) {
    mpfr_mul_si(v_, v_, k, MPFR_RNDN);
    return *this;
  }
  Real& operator/=(long k) {
    mpfr_div_si(v_, v_, k, MPFR_RNDN);
    return *this;
  }

  friend Real operator+(Real a, const Real& b) { return a += b; }
  friend Real operator-(Real a, const Real& b) { return a -= b; }
  friend Real operator*(Real a, const Real& b) { return a *= b; }
  friend Real operator/(Real a, const Real& b) { return a /= b; }
  friend Real operator+(Real a, long k) {
    mpfr_add_si(a.v_, a.v_, k, MPFR_RNDN);
    return a;
  }
  friend Real operator-(Real a, long k) {
    mpfr_sub_si(a.v_, a.v_, k, MPFR_RNDN);
    return a;
  }
  friend Real operator*(Real a, long k) { return a *= k; }
  friend Real operator*(long k, Real a) { return a *= k; }
  friend Real operator/(Real a, long k) { return a /= k; }
  friend Real operator-(const Real& a) {
    Real r(a.prec());
    mpfr_neg(r.v_, a.v_, MPFR_RNDN);
    return r;
  }

  friend bool operator==(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) == 0; }
  friend bool operator!=(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) != 0; }
  friend bool operator<(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) < 0; }
  friend bool operator<=(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) <= 0; }
  friend bool operator>(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) > 0; }
  friend bool operator>=(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) >= 0; }

  friend bool operator<(const Real& a, double b) { return mpfr_cmp_d(a.v_, b) < 0; }
  friend bool operator>(const Real& a, double b) { return mpfr_cmp_d(a.v_, b) > 0; }
  friend bool operator<=(const Real& a, double b) { return mpfr_cmp_d(a.v_, b) <= 0; }
  friend bool operator>=(const Real& a, double b) { return mpfr_cmp_d(a.v_, b) >= 0; }

  static constexpr mpfr_prec_t kDefaultBits = 256;

 private:
  void check(const Real& o) const {
    if (mpfr_get_prec(v_) != mpfr_get_prec(o.v_))
      throw precision_mismatch("Real: mixed-precision operands");
  }
  mpfr_t v_;
};

#define SBETHE_REAL_FN1(name, mpfr_name)            \
  inline Real name(const Real& x) {                 \
    Real r(x.prec());                               \
    mpfr_name(r.raw(), x.raw(), MPFR_RNDN);         \
    return r;                                       \
  }

SBETHE_REAL_FN1(sqrt, mpfr_sqrt)
SBETHE_REAL_FN1(exp, mpfr_exp)
SBETHE_REAL_FN1(log, mpfr_log)
SBETHE_REAL_FN1(sin, mpfr_sin)
SBETHE_REAL_FN1(cos, mpfr_cos)
SBETHE_REAL_FN1(tan, mpfr_tan)
SBETHE_REAL_FN1(sinh, mpfr_sinh)
SBETHE_REAL_FN1(cosh, mpfr_cosh)
SBETHE_REAL_FN1(abs, mpfr_abs)
SBETHE_REAL_FN1(gamma_fn, mpfr_gamma)
SBETHE_REAL_FN1(log10, mpfr_log10)

#undef SBETHE_REAL_FN1

inline Real floor(const Real& x) {
  Real r(x.prec());
  mpfr_floor(r.raw(), x.raw());
  return r;
}

inline Real round(const Real& x) {
  Real r(x.prec());
  mpfr_round(r.raw(), x.raw());
  return r;
}

inline Real atan2(const Real& y, const Real& x) {
  if (y.prec() != x.prec()) throw precision_mismatch("atan2: mixed-precision operands");
  Real r(y.prec());
  mpfr_atan2(r.raw(), y.raw(), x.raw(), MPFR_RNDN);
  return r;
}

inline Real hypot(const Real& x, const Real& y) {
  if (y.prec() != x.prec()) throw precision_mismatch("hypot: mixed-precision operands");
  Real r(x.prec());
  mpfr_hypot(r.raw(), x.raw(), y.raw(), MPFR_RNDN);
  return r;
}

inline Real pow(const Real& x, const Real& y) {
  if (y.prec() != x.prec()) throw precision_mismatch("pow: mixed-precision operands");
  Real r(x.prec());
  mpfr_pow(r.raw(), x.raw(), y.raw(), MPFR_RNDN);
  return r;
}

inline Real pow_si(const Real& x, long k) {
  Real r(x.prec());
  mpfr_pow_si(r.raw(), x.raw(), k, MPFR_RNDN);
  return r;
}

inline Real pi(mpfr_prec_t bits) {
  Real r(bits);
  mpfr_const_pi(r.raw(), MPFR_RNDN);
  return r;
}
inline Real pi(const PrecisionContext& ctx) { return pi(ctx.bits()); }

inline Real min(const Real& a, const Real& b) { return a < b ? a : b; }
inline Real max(const Real& a, const Real& b) { return a > b ? a : b; }

/// Arithmetic-geometric mean; both endpoints must be positive.
Real agm(const Real& a, const Real& b);

/// 10^(-k) at the given precision, k may be negative.
Real pow10(mpfr_prec_t bits, long k);

}  // namespace sbethe
