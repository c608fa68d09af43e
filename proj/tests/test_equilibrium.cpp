#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "sbethe/equilibrium.hpp"

using namespace sbethe;
using namespace sbtest;

namespace {

SemiclassicalType hermite_t(const PrecisionContext& ctx) {
  return build_type(rpoly(ctx, {0, 2}), rpoly(ctx, {1}), false, ctx);
}

}  // namespace

TEST_CASE("residual at closed-form critical points") {
  PrecisionContext ctx(50);
  Real tol = pow10(ctx.bits(), -48);

  SemiclassicalType h = hermite_t(ctx);
  Real is2 = Real(ctx, 1L) / sqrt(Real(ctx, 2L));
  std::vector<Complex> pts{Complex(is2, Real(ctx)), Complex(-is2, Real(ctx))};
  for (const auto& r : residual(h, pts)) CHECK(abs(r) < tol);

  SemiclassicalType lag = build_type(rpoly(ctx, {-1, 1}), rpoly(ctx, {0, 1}), false, ctx);
  std::vector<Complex> one{Complex(ctx, 1, 0)};
  CHECK(abs(residual(lag, one)[0]) < tol);

  SemiclassicalType fr = build_type(rpoly(ctx, {0, 0, 0, 2}), rpoly(ctx, {1}), false, ctx);
  Real q = pow(Real(ctx, 2L), Real(ctx, -0.25));
  std::vector<Complex> fp{Complex(q, Real(ctx)), Complex(-q, Real(ctx))};
  for (const auto& r : residual(fr, fp)) CHECK(abs(r) < tol);

  // coincident points and points on zeros of B are rejected
  std::vector<Complex> bad{Complex(ctx, 1, 0), Complex(ctx, 1, 0)};
  CHECK_THROWS_AS(residual(h, bad), collision_error);
  std::vector<Complex> on_pole{Complex(ctx, 0, 0)};
  CHECK_THROWS_AS(residual(lag, on_pole), numeric_error);
}

TEST_CASE("jacobian closed forms and finite-difference agreement") {
  PrecisionContext ctx(50);
  SemiclassicalType h = hermite_t(ctx);

  std::vector<Complex> p1{Complex(ctx, 0.3, 0)};
  Matrix J1 = jacobian(h, p1);
  CHECK(close(J1.at(0, 0), Complex(ctx, -1, 0), pow10(ctx.bits(), -50)));

  Real is2 = Real(ctx, 1L) / sqrt(Real(ctx, 2L));
  std::vector<Complex> p2{Complex(is2, Real(ctx)), Complex(-is2, Real(ctx))};
  Matrix J2 = jacobian(h, p2);
  CHECK(close(J2.at(0, 1), Complex(ctx, 0.5, 0), pow10(ctx.bits(), -50)));

  // central differences of the residual reproduce the analytic Jacobian
  SemiclassicalType fr = build_type(rpoly(ctx, {0, -2, 0, 1}), rpoly(ctx, {1}), false, ctx);
  std::mt19937_64 rng(5);
  auto rnd = [&]() { return ((rng() >> 11) * 0x1.0p-53) * 2.0 - 1.0; };
  std::vector<Complex> z;
  for (int i = 0; i < 4; ++i) z.emplace_back(ctx, 1.5 * rnd(), 1.5 * rnd());
  Matrix J = jacobian(fr, z);
  Real step = pow10(ctx.bits(), -(ctx.digits() / 3));
  Complex h_re(step, Real(ctx));
  for (int k = 0; k < 4; ++k) {
    auto zp = z, zm = z;
    zp[static_cast<size_t>(k)] += h_re;
    zm[static_cast<size_t>(k)] -= h_re;
    auto rp = residual(fr, zp), rm = residual(fr, zm);
    for (int i = 0; i < 4; ++i) {
      Complex fd = (rp[static_cast<size_t>(i)] - rm[static_cast<size_t>(i)]) / (step * 2L);
      CHECK(abs(fd - J.at(i, k)) < pow10(ctx.bits(), -(ctx.digits() / 2)));
    }
  }
}

TEST_CASE("solve: classical types land on orthogonal-polynomial zeros") {
  PrecisionContext ctx(50);
  Real tol = pow10(ctx.bits(), -45);
  SeedSpec seed;
  seed.jitter = 1e-3;
  seed.rng_seed = 11;

  SemiclassicalType h = hermite_t(ctx);
  Configuration c1 = solve(h, 1, seed, tol);
  REQUIRE(c1.converged);
  CHECK(abs(c1.points[0]) < pow10(ctx.bits(), -40));

  Configuration c10 = solve(h, 10, seed, tol);
  REQUIRE(c10.converged);
  // oracle: eigenvalues of the Jacobi matrix with off-diagonals sqrt(k/2)
  std::vector<Real> diag(10, Real(ctx));
  std::vector<Real> off;
  for (int k = 1; k < 10; ++k) off.push_back(sqrt(Real(ctx, k / 2.0)));
  auto oracle = symtridiag_eigenvalues(diag, off);
  std::vector<Real> got;
  for (const auto& z : c10.points) {
    CHECK(abs(z.im()) < pow10(ctx.bits(), -40));
    got.push_back(z.re());
  }
  std::sort(got.begin(), got.end());
  for (int i = 0; i < 10; ++i) CHECK(close(got[static_cast<size_t>(i)], oracle[static_cast<size_t>(i)], pow10(ctx.bits(), -40)));

  // Laguerre alpha=0, n=2: zeros 2 +- sqrt 2
  SemiclassicalType lag = build_type(rpoly(ctx, {-1, 1}), rpoly(ctx, {0, 1}), false, ctx);
  Configuration cl = solve(lag, 2, seed, tol);
  REQUIRE(cl.converged);
  Real lo = min(cl.points[0].re(), cl.points[1].re());
  Real hi = max(cl.points[0].re(), cl.points[1].re());
  CHECK(close(lo, Real(ctx, 2L) - sqrt(Real(ctx, 2L)), pow10(ctx.bits(), -40)));
  CHECK(close(hi, Real(ctx, 2L) + sqrt(Real(ctx, 2L)), pow10(ctx.bits(), -40)));

  // Legendre n=2: +-1/sqrt(3)
  SemiclassicalType leg = build_type(rpoly(ctx, {0, -2}), rpoly(ctx, {-1, 0, 1}), false, ctx);
  Configuration cj = solve(leg, 2, seed, tol);
  REQUIRE(cj.converged);
  Real expect = Real(ctx, 1L) / sqrt(Real(ctx, 3L));
  CHECK(close(max(abs(cj.points[0]), abs(cj.points[1])), expect, pow10(ctx.bits(), -40)));
}

TEST_CASE("solve: Freud quartic real-symmetric branch stays real") {
  PrecisionContext ctx(50);
  Real tol = pow10(ctx.bits(), -45);
  SemiclassicalType fr = build_type(rpoly(ctx, {0, 0, 0, 2}), rpoly(ctx, {1}), false, ctx);
  SeedSpec seed;
  seed.jitter = 1e-3;
  seed.rng_seed = 3;
  Configuration c = solve(fr, 10, seed, tol);
  REQUIRE(c.converged);
  for (const auto& z : c.points) CHECK(abs(z.im()) < pow10(ctx.bits(), -45));
  // re-evaluated residual stays below tol
  Real mx(ctx);
  for (const auto& r : residual(fr, c.points)) mx = max(mx, abs(r));
  CHECK(mx < tol);
}

TEST_CASE("translation covariance for B = 1") {
  PrecisionContext ctx(50);
  Real tol = pow10(ctx.bits(), -45);
  SemiclassicalType t = build_type(rpoly(ctx, {0, -2, 0, 1}), rpoly(ctx, {1}), false, ctx);
  SeedSpec seed;
  seed.rng_seed = 17;
  Configuration c = solve(t, 5, seed, tol);
  REQUIRE(c.converged);
  Complex shift(ctx, 0.31, -0.12);
  SemiclassicalType ts = build_type(t.A.shift(shift), rpoly(ctx, {1}), false, ctx);
  std::vector<Complex> moved;
  for (const auto& z : c.points) moved.push_back(z - shift);
  Real mx(ctx);
  for (const auto& r : residual(ts, moved)) mx = max(mx, abs(r));
  CHECK(mx < tol * 100L);
}

TEST_CASE("energy values and stationarity") {
  PrecisionContext ctx(50);
  SemiclassicalType h = hermite_t(ctx);
  Real is2 = Real(ctx, 1L) / sqrt(Real(ctx, 2L));
  Configuration c2;
  c2.n = 2;
  c2.points = {Complex(is2, Real(ctx)), Complex(-is2, Real(ctx))};
  Real e = energy(h, c2);
  Real expect = Real(ctx, 2L) - log(Real(ctx, 2L));
  CHECK(close(e, expect, pow10(ctx.bits(), -45)));

  Configuration c1;
  c1.n = 1;
  c1.points = {Complex(ctx, 0.7, 0)};
  Real x7(ctx, 0.7);
  CHECK(close(energy(h, c1), x7 * x7 * 2L, pow10(ctx.bits(), -44)));

  // Freud n=2 at +-2^{-1/4}: E = -2 log(2 * 2^{-1/4}) + 1
  SemiclassicalType fr = build_type(rpoly(ctx, {0, 0, 0, 2}), rpoly(ctx, {1}), false, ctx);
  Real q = pow(Real(ctx, 2L), Real(ctx, -0.25));
  Configuration cf;
  cf.n = 2;
  cf.points = {Complex(q, Real(ctx)), Complex(-q, Real(ctx))};
  Real ef = energy(fr, cf);
  Real expectf = -log(q * 2L) * 2L + Real(ctx, 1L);
  CHECK(close(ef, expectf, pow10(ctx.bits(), -45)));

  // at a converged real configuration the energy gradient equals
  // theta_hat'(x_j): the half-field part is stationary, the remaining
  // 2 Re theta_hat convention contributes exactly one extra field term
  SeedSpec seed;
  seed.rng_seed = 23;
  Configuration copt = solve(fr, 6, seed, pow10(ctx.bits(), -45));
  REQUIRE(copt.converged);
  Real step = pow10(ctx.bits(), -(ctx.digits() / 3));
  for (int k = 0; k < 6; ++k) {
    Configuration cp = copt, cm = copt;
    cp.points[static_cast<size_t>(k)] += Complex(step, Real(ctx));
    cm.points[static_cast<size_t>(k)] -= Complex(step, Real(ctx));
    Real fd = (energy(fr, cp) - energy(fr, cm)) / (step * 2L);
    Real field = fr.sym.theta_hat_prime.eval(copt.points[static_cast<size_t>(k)]).re();
    CHECK(abs(fd - field) < pow10(ctx.bits(), -(ctx.digits() / 3) + 2));
  }
}

TEST_CASE("coincident user seeds exhaust the retry budget") {
  PrecisionContext ctx(50);
  SemiclassicalType h = hermite_t(ctx);
  SeedSpec seed;
  seed.strategy = SeedSpec::Strategy::user_list;
  seed.jitter = 0.0;
  seed.user_points = {Complex(ctx, 1, 0), Complex(ctx, 1, 0)};
  CHECK_THROWS_AS(solve(h, 2, seed, pow10(ctx.bits(), -45)), numeric_error);
}
