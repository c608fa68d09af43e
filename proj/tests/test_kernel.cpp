#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "sbethe/linalg.hpp"
#include "sbethe/rational.hpp"
#include "sbethe/roots.hpp"

using namespace sbethe;
using namespace sbtest;

TEST_CASE("precision context enforces floor and guard") {
  CHECK_THROWS_AS(PrecisionContext(10), std::invalid_argument);
  PrecisionContext ctx(50, 10);
  CHECK(ctx.working_digits() == 60);
  CHECK(ctx.bits() >= 200);
}

TEST_CASE("mixed-precision operands are rejected") {
  PrecisionContext a(50), b(30);
  Real x(a, 1.0), y(b, 2.0);
  CHECK_THROWS_AS(x + y, precision_mismatch);
  CHECK_THROWS_AS(Complex(a, 1, 0) * Complex(b, 1, 0), precision_mismatch);
}

TEST_CASE("decimal string round trip keeps full precision") {
  PrecisionContext ctx(50);
  Real x = pi(ctx) / 7L;
  Real y(ctx, x.to_string());
  CHECK(close(x, y, pow10(ctx.bits(), -58)));
}

TEST_CASE("gamma function agrees with the AGM route at 1/4") {
  PrecisionContext ctx(50);
  Real one(ctx, 1L), two(ctx, 2L);
  // Gamma(1/4) = sqrt(2 sqrt(2 pi) pi / agm(1, sqrt 2))
  Real g_agm = sqrt(two * sqrt(two * pi(ctx)) * pi(ctx) / agm(one, sqrt(two)));
  Real g = gamma_fn(Real(ctx, 0.25));
  CHECK(close(g, g_agm, pow10(ctx.bits(), -55)));
  CHECK(std::abs(g.to_double() - 3.62560990822190831) < 1e-14);
}

TEST_CASE("poly_eval matches hand values") {
  PrecisionContext ctx(50);
  Polynomial p = rpoly(ctx, {-1, 0, 1});  // z^2 - 1
  CHECK(close(p.eval(Complex(ctx, 2, 0)), Complex(ctx, 3, 0), pow10(ctx.bits(), -55)));

  Polynomial zero(ctx);
  CHECK(zero.eval(Complex(ctx, 5, 7)).is_zero());
  CHECK(zero.degree() == -1);

  Polynomial q = rpoly(ctx, {0, 0, 0, 2});  // 2 z^3
  // 2 (1+i)^3 = -4 + 4i
  CHECK(close(q.eval(Complex(ctx, 1, 1)), Complex(ctx, -4, 4), pow10(ctx.bits(), -55)));
}

TEST_CASE("poly_derivative basics and exact linearity") {
  PrecisionContext ctx(50);
  CHECK(rpoly(ctx, {-1, 0, 1}).derivative().coeffs().size() == 2);
  CHECK(close(rpoly(ctx, {-1, 0, 1}).derivative().coeff(1), Complex(ctx, 2, 0), Real(ctx)));
  CHECK(rpoly(ctx, {7}).derivative().is_zero());
  Polynomial h = rpoly(ctx, {0, 0, 0, 0, 0.5});  // z^4/2
  CHECK(close(h.derivative().coeff(3), Complex(ctx, 2, 0), Real(ctx)));

  // derivative is linear, exactly, in rational arithmetic
  QPoly p({QComplex(1, 2), QComplex(Rat(1, 3)), QComplex(0, 1)});
  QPoly q({QComplex(5), QComplex(Rat(-7, 2)), QComplex(2), QComplex(Rat(9, 4))});
  QComplex alpha(Rat(3, 7), Rat(1, 2)), beta(Rat(-2, 5));
  QPoly lhs = (p * alpha + q * beta).derivative();
  QPoly rhs = p.derivative() * alpha + q.derivative() * beta;
  CHECK(lhs == rhs);
}

TEST_CASE("poly_divmod examples and round trip") {
  PrecisionContext ctx(50);
  auto [q1, r1] = poly_divmod(rpoly(ctx, {-1, 0, 1}), rpoly(ctx, {-1, 1}));
  CHECK(q1.degree() == 1);
  CHECK(close(q1.coeff(0), Complex(ctx, 1, 0), pow10(ctx.bits(), -55)));
  CHECK(r1.max_coeff_abs() < pow10(ctx.bits(), -55));

  auto [q2, r2] = poly_divmod(rpoly(ctx, {0, 0, 0, 1}), rpoly(ctx, {0, 0, 1}));
  CHECK(q2.degree() == 1);
  CHECK(r2.is_zero());

  auto [q3, r3] = poly_divmod(rpoly(ctx, {1, 0, 0, 1}), rpoly(ctx, {1, 1}));
  CHECK(close(q3.coeff(1), Complex(ctx, -1, 0), pow10(ctx.bits(), -55)));
  CHECK(close(q3.coeff(2), Complex(ctx, 1, 0), pow10(ctx.bits(), -55)));
  CHECK(r3.max_coeff_abs() < pow10(ctx.bits(), -55));

  CHECK_THROWS(poly_divmod(rpoly(ctx, {1, 1}), Polynomial(ctx)));

  // num = q*den + r reconstructs coefficientwise
  std::mt19937_64 rng(42);
  auto rnd = [&]() { return ((rng() >> 11) * 0x1.0p-53) * 4.0 - 2.0; };
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Complex> nc, dc;
    int dn = 3 + static_cast<int>(rng() % 6), dd = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i <= dn; ++i) nc.emplace_back(ctx, rnd(), rnd());
    for (int i = 0; i <= dd; ++i) dc.emplace_back(ctx, rnd(), rnd());
    Polynomial num(ctx.bits(), nc), den(ctx.bits(), dc);
    if (den.is_zero() || num.is_zero()) continue;
    auto [q, r] = poly_divmod(num, den);
    Polynomial back = q * den + r;
    CHECK((back - num).max_coeff_abs() < pow10(ctx.bits(), -40) * num.max_coeff_abs());
  }
}

TEST_CASE("coprimality probe") {
  PrecisionContext ctx(50);
  Real tol = pow10(ctx.bits(), -25);
  CHECK(poly_gcd_coprime_check(rpoly(ctx, {0, 0, 0, 2}), rpoly(ctx, {1}), tol));
  CHECK_FALSE(poly_gcd_coprime_check(rpoly(ctx, {0, 2}), rpoly(ctx, {0, 0, 1}), tol));
  CHECK(poly_gcd_coprime_check(rpoly(ctx, {-1.5, 1}), rpoly(ctx, {0, 1}), tol));
}

TEST_CASE("poly_roots finds simple roots to working precision") {
  PrecisionContext ctx(50);
  Real tol = pow10(ctx.bits(), -50);

  auto roots = poly_roots(rpoly(ctx, {-1, 0, 1}));
  REQUIRE(roots.size() == 2);
  Real s(ctx);
  for (const auto& r : roots) s += abs(r * r - Complex(ctx, 1, 0));
  CHECK(s < tol);

  auto ri = poly_roots(rpoly(ctx, {1, 0, 1}));
  REQUIRE(ri.size() == 2);
  for (const auto& r : ri) CHECK(close(r * r, Complex(ctx, -1, 0), tol));

  // Hermite H_2 = 4z^2 - 2
  auto rh = poly_roots(rpoly(ctx, {-2, 0, 4}));
  Real inv_sqrt2 = Real(ctx, 1L) / sqrt(Real(ctx, 2L));
  REQUIRE(rh.size() == 2);
  CHECK(close(max(abs(rh[0]), abs(rh[1])), inv_sqrt2, tol));

  CHECK_THROWS_AS(poly_roots(rpoly(ctx, {3, 1, 4, 1, 5, 9, 2, 6}), RootOptions{1, 0}),
                  convergence_error);
}

TEST_CASE("poly_roots re-expansion reproduces monic input") {
  PrecisionContext ctx(50);
  std::mt19937_64 rng(7);
  auto rnd = [&]() { return ((rng() >> 11) * 0x1.0p-53) * 3.0 - 1.5; };
  for (int trial = 0; trial < 8; ++trial) {
    std::vector<Complex> c;
    int n = 2 + static_cast<int>(rng() % 7);
    for (int i = 0; i <= n; ++i) c.emplace_back(ctx, rnd(), rnd());
    Polynomial p(ctx.bits(), c);
    if (p.degree() < 2 || abs(p.leading()).to_double() < 0.1) continue;
    auto roots = poly_roots(p);
    Polynomial re = Polynomial::from_roots(ctx.bits(), roots);
    Polynomial diff = re - p.monic();
    CHECK(diff.max_coeff_abs() < pow10(ctx.bits(), -45) * p.monic().max_coeff_abs());
  }
}

TEST_CASE("exact rational polynomial division and gcd") {
  QPoly num({QComplex(1), QComplex(0), QComplex(0), QComplex(1)});  // z^3 + 1
  QPoly den({QComplex(1), QComplex(1)});                            // z + 1
  auto [q, r] = qpoly_divmod(num, den);
  CHECK(r.is_zero());
  CHECK(q == QPoly({QComplex(1), QComplex(-1), QComplex(1)}));

  QPoly a = num * den;
  QPoly g = qpoly_gcd(a, den);
  CHECK(g.degree() == 1);

  QPoly cop({QComplex(1), QComplex(0), QComplex(1)});  // z^2 + 1, coprime with z+1
  QRatFun f(cop * den, den * den);
  CHECK(f.num() == cop);
  CHECK(f.den() == den);
}

TEST_CASE("LU determinant and solve") {
  PrecisionContext ctx(50);
  Matrix m(ctx.bits(), 2, 2);
  m.at(0, 0) = Complex(ctx, 1, 0);
  m.at(0, 1) = Complex(ctx, 2, 0);
  m.at(1, 0) = Complex(ctx, 3, 0);
  m.at(1, 1) = Complex(ctx, 4, 0);
  DetResult d = determinant(m);
  CHECK(close(d.value, Complex(ctx, -2, 0), pow10(ctx.bits(), -55)));

  LU f = lu_decompose(m);
  std::vector<Complex> rhs{Complex(ctx, 5, 0), Complex(ctx, 6, 0)};
  auto x = lu_solve(f, rhs);
  CHECK(close(m.at(0, 0) * x[0] + m.at(0, 1) * x[1], rhs[0], pow10(ctx.bits(), -50)));
  CHECK(close(m.at(1, 0) * x[0] + m.at(1, 1) * x[1], rhs[1], pow10(ctx.bits(), -50)));
}

TEST_CASE("min_abs_eigenvalue on diagonal cases") {
  PrecisionContext ctx(50);
  Matrix id(ctx.bits(), 3, 3);
  for (int i = 0; i < 3; ++i) id.at(i, i) = Complex(ctx, 1, 0);
  MinEigResult r = min_abs_eigenvalue(id);
  CHECK(close(r.modulus, Real(ctx, 1L), pow10(ctx.bits(), -30)));

  Matrix d2(ctx.bits(), 2, 2);
  d2.at(0, 0) = Complex(ctx, 1, 0);
  d2.at(1, 1) = Complex(Real(ctx, "1e-40"), Real(ctx));
  MinEigResult r2 = min_abs_eigenvalue(d2);
  CHECK(abs(r2.modulus - Real(ctx, "1e-40")) < Real(ctx, "1e-70"));
}

TEST_CASE("symmetric tridiagonal eigenvalues: Hermite Jacobi matrix") {
  PrecisionContext ctx(50);
  // zeros of H_2 are +-1/sqrt(2): Jacobi matrix diag 0, off sqrt(1/2)
  std::vector<Real> diag{Real(ctx), Real(ctx)};
  std::vector<Real> off{sqrt(Real(ctx, 0.5))};
  auto ev = symtridiag_eigenvalues(diag, off);
  REQUIRE(ev.size() == 2);
  Real expect = Real(ctx, 1L) / sqrt(Real(ctx, 2L));
  CHECK(close(ev[1], expect, pow10(ctx.bits(), -50)));
  CHECK(close(ev[0], -expect, pow10(ctx.bits(), -50)));
}
