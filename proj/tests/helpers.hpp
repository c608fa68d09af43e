#pragma once

#include <initializer_list>
#include <vector>

#include "sbethe/complexx.hpp"
#include "sbethe/poly.hpp"

namespace sbtest {

using namespace sbethe;

inline Polynomial rpoly(const PrecisionContext& ctx, std::initializer_list<double> coeffs) {
  std::vector<Complex> v;
  for (double c : coeffs) v.emplace_back(ctx, c);
  return Polynomial(ctx.bits(), std::move(v));
}

inline Polynomial cpoly(const PrecisionContext& ctx,
                        std::initializer_list<std::pair<double, double>> coeffs) {
  std::vector<Complex> v;
  for (const auto& c : coeffs) v.emplace_back(ctx, c.first, c.second);
  return Polynomial(ctx.bits(), std::move(v));
}

inline bool close(const Complex& a, const Complex& b, const Real& tol) {
  return (abs(a - b) <= tol);
}

inline bool close(const Real& a, const Real& b, const Real& tol) {
  return (abs(a - b) <= tol);
}

inline double dist(const Complex& a, const Complex& b) { return abs(a - b).to_double(); }

}  // namespace sbtest
