#include "sbethe/real.hpp"

#include <cstdio>
#include <vector>

namespace sbethe {

std::string Real::to_string(int decimal_digits) const {
  if (decimal_digits <= 0) {
    // enough digits for exact binary round-trip
    decimal_digits = static_cast<int>(prec() * 0.30102999566398119522) + 3;
  }
  char fmt[32];
  std::snprintf(fmt, sizeof(fmt), "%%.%dRe", decimal_digits - 1);
  int need = mpfr_snprintf(nullptr, 0, fmt, v_);
  std::vector<char> buf(static_cast<size_t>(need) + 1);
  mpfr_snprintf(buf.data(), buf.size(), fmt, v_);
  return std::string(buf.data());
}

Real agm(const Real& a, const Real& b) {
  if (a.prec() != b.prec()) throw precision_mismatch("agm: mixed-precision operands");
  Real r(a.prec());
  mpfr_agm(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
  return r;
}

Real pow10(mpfr_prec_t bits, long k) {
  Real r(bits);
  mpfr_set_si(r.raw(), 10, MPFR_RNDN);
  mpfr_pow_si(r.raw(), r.raw(), k, MPFR_RNDN);
  return r;
}

}  // namespace sbethe
