#include "doctest.h"
#include "helpers.hpp"
#include "sbethe/rational.hpp"
#include "sbethe/semiclassical.hpp"

using namespace sbethe;
using namespace sbtest;

namespace {

SemiclassicalType freud_quartic(const PrecisionContext& ctx) {
  // A = 2z^3, B = 1: theta = -z^4/2
  return build_type(rpoly(ctx, {0, 0, 0, 2}), rpoly(ctx, {1}), false, ctx);
}

SemiclassicalType hermite(const PrecisionContext& ctx) {
  return build_type(rpoly(ctx, {0, 2}), rpoly(ctx, {1}), false, ctx);
}

SemiclassicalType laguerre(const PrecisionContext& ctx, double alpha) {
  return build_type(rpoly(ctx, {-alpha - 1, 1}), rpoly(ctx, {0, 1}), false, ctx);
}

SemiclassicalType jacobi(const PrecisionContext& ctx, double alpha, double beta) {
  return build_type(rpoly(ctx, {-(alpha - beta), -(alpha + beta + 2)}), rpoly(ctx, {-1, 0, 1}),
                    false, ctx);
}

}  // namespace

TEST_CASE("build_type: Freud quartic") {
  PrecisionContext ctx(50);
  SemiclassicalType t = freud_quartic(ctx);
  CHECK(t.d == 3);
  CHECK(t.d_inf == 4);
  CHECK(t.poles.empty());
  REQUIRE(t.pole_inf.has_value());
  CHECK(t.pole_inf->order == 5);
  // theta'(z) = -2 z^3
  Complex z(ctx, 1.3, -0.4);
  CHECK(close(t.sym.theta_prime.eval(z), Complex(ctx, -2, 0) * pow_si(z, 3),
              pow10(ctx.bits(), -50)));
  // theta(2) = -8
  CHECK(close(eval_theta(t.sym, Complex(ctx, 2, 0)), Complex(ctx, -8, 0), pow10(ctx.bits(), -50)));
}

TEST_CASE("build_type: Laguerre row") {
  PrecisionContext ctx(50);
  SemiclassicalType t = laguerre(ctx, 0.5);
  CHECK(t.d == 1);
  CHECK(t.d_inf == 1);
  REQUIRE(t.poles.size() == 1);
  CHECK(t.poles[0].kind == PoleKind::end_pole);
  CHECK(close(t.poles[0].residue, Complex(ctx, 0.5, 0), pow10(ctx.bits(), -50)));
  // theta'(x) = alpha/x - 1
  Complex z(ctx, 3.7, 0);
  Complex lag_expect(Real(ctx, 0.5) / Real(ctx, 3.7) - Real(ctx, 1L), Real(ctx));
  CHECK(close(t.sym.theta_prime.eval(z), lag_expect, pow10(ctx.bits(), -45)));
  // theta(4) = -4 + 0.5 log 4 on the principal branch
  Complex th = eval_theta(t.sym, Complex(ctx, 4, 0));
  Complex expect(Real(ctx, -4L) + Real(ctx, 0.5) * log(Real(ctx, 4L)), Real(ctx));
  CHECK(close(th, expect, pow10(ctx.bits(), -50)));
  // evaluation on the cut along the negative axis fails
  CHECK_THROWS_AS(eval_theta(t.sym, Complex(ctx, -1, 0)), numeric_error);
  CHECK(close(t.Lambda, Complex(ctx, 0.5, 0), pow10(ctx.bits(), -50)));
}

TEST_CASE("build_type: Bessel row as printed") {
  PrecisionContext ctx(50);
  double nu = 3;
  SemiclassicalType t =
      build_type(rpoly(ctx, {1, 2 - nu}), rpoly(ctx, {0, 0, 1}), false, ctx);
  CHECK(t.d == 1);
  REQUIRE(t.poles.size() == 1);
  CHECK(t.poles[0].order == 2);
  // theta' = -(1 + (4-nu) x)/x^2
  Complex z(ctx, 0.7, 0.2);
  Complex expect = -(Complex(ctx, 1, 0) + z * Complex(ctx, 4 - nu, 0)) / (z * z);
  CHECK(close(t.sym.theta_prime.eval(z), expect, pow10(ctx.bits(), -45)));
}

TEST_CASE("build_type rejects degenerate and non-coprime input") {
  PrecisionContext ctx(50);
  CHECK_THROWS_AS(build_type(rpoly(ctx, {1}), rpoly(ctx, {0, 1}), false, ctx), unsupported_type);
  CHECK_THROWS_AS(build_type(rpoly(ctx, {0, 2}), rpoly(ctx, {0, 0, 1}), false, ctx), numeric_error);
  CHECK_NOTHROW(build_type(rpoly(ctx, {0, 2}), rpoly(ctx, {0, 0, 1}), true, ctx));
  // deg A < deg B, all roots of B simple, non-integer flag residue
  CHECK_THROWS_AS(build_type(rpoly(ctx, {1}), rpoly(ctx, {0, -1, 0, 1}), false, ctx),
                  unsupported_type);
}

TEST_CASE("steepest directions") {
  PrecisionContext ctx(50);
  SemiclassicalType t = freud_quartic(ctx);
  auto dirs = steepest_directions(t, *t.pole_inf);
  REQUIRE(dirs.size() == 8);
  // descent set {0, pi/2, pi, 3pi/2} as z-plane angles (local parameter is 1/z)
  Real quarter = pi(ctx) / 2L;
  for (int k = 0; k < 4; ++k) {
    Real zangle = -dirs[static_cast<size_t>(2 * k)];
    Real snapped = zangle / quarter;
    CHECK(abs(snapped - round(snapped)) < pow10(ctx.bits(), -45));
  }

  SemiclassicalType h = hermite(ctx);
  auto hd = steepest_directions(h, *h.pole_inf);
  REQUIRE(hd.size() == 4);
  CHECK(abs(hd[0]) < pow10(ctx.bits(), -45));  // descent along the real axis

  // theta ~ -1/x near 0: descent toward positive reals, ascent toward negative
  double nu = 3;
  SemiclassicalType bessel_like =
      build_type(rpoly(ctx, {-1, -(2 + nu)}), rpoly(ctx, {0, 0, 1}), false, ctx);
  REQUIRE(bessel_like.poles.size() == 1);
  auto bd = steepest_directions(bessel_like, bessel_like.poles[0]);
  REQUIRE(bd.size() == 2);
  CHECK(abs(sin(bd[0])) < pow10(ctx.bits(), -45));
  CHECK(cos(bd[0]) > 0.5);   // descent at arg 0
  CHECK(cos(bd[1]) < -0.5);  // ascent at arg pi

  SemiclassicalType lag = laguerre(ctx, 0.5);
  CHECK_THROWS(steepest_directions(lag, lag.poles[0]));
}

TEST_CASE("symbol identities: theta' + theta_hat' + B'/B = 0, residues sum to zero") {
  PrecisionContext ctx(50);
  auto check_type = [&](SemiclassicalType t) {
    // coefficientwise after clearing denominators
    Polynomial sum = t.sym.theta_prime.num + t.sym.theta_hat_prime.num + t.B.derivative();
    CHECK(sum.max_coeff_abs() < pow10(ctx.bits(), -45) * (t.A.max_coeff_abs() + Real(ctx, 1L)));
    // residues of theta' dz over all poles including infinity
    Complex total(ctx);
    for (const auto& p : t.poles) total += p.residue;
    if (t.pole_inf) total += t.pole_inf->residue;
    CHECK(abs(total) < pow10(ctx.bits(), -45));
  };
  check_type(freud_quartic(ctx));
  check_type(hermite(ctx));
  check_type(laguerre(ctx, 0.5));
  check_type(jacobi(ctx, 1, 2));
  check_type(build_type(rpoly(ctx, {1, 2 - 3.0}), rpoly(ctx, {0, 0, 1}), false, ctx));
}

TEST_CASE("antiderivative matches theta' by finite differences") {
  PrecisionContext ctx(50);
  // B with one double root and one simple root
  Polynomial B = rpoly(ctx, {0, 0, 1}) * rpoly(ctx, {2, 1});  // z^2 (z+2)
  Polynomial A = rpoly(ctx, {1, 0.3});
  SemiclassicalType t = build_type(A, B, false, ctx);
  Real h = pow10(ctx.bits(), -18);
  for (double xr : {0.9, -0.7, 1.8}) {
    for (double xi : {0.6, -1.1}) {
      Complex z(ctx, xr, xi);
      Complex dplus = eval_theta(t.sym, z + Complex(h, Real(ctx)));
      Complex dminus = eval_theta(t.sym, z - Complex(h, Real(ctx)));
      Complex fd = (dplus - dminus) / (h * 2L);
      CHECK(close(fd, t.sym.theta_prime.eval(z), pow10(ctx.bits(), -28)));
      // same for theta_hat
      Complex hplus = eval_theta_hat(t.sym, z + Complex(h, Real(ctx)));
      Complex hminus = eval_theta_hat(t.sym, z - Complex(h, Real(ctx)));
      Complex fdh = (hplus - hminus) / (h * 2L);
      CHECK(close(fdh, t.sym.theta_hat_prime.eval(z), pow10(ctx.bits(), -28)));
    }
  }
}

TEST_CASE("hard edges and boundary flag classification") {
  PrecisionContext ctx(50);
  SemiclassicalType leg = jacobi(ctx, 0, 0);
  REQUIRE(leg.poles.size() == 2);
  CHECK(leg.poles[0].kind == PoleKind::hard_edge);
  CHECK(leg.poles[1].kind == PoleKind::hard_edge);
  CHECK(abs(eval_theta(leg.sym, Complex(ctx, 0.3, 0))) < pow10(ctx.bits(), -45));

  SemiclassicalType j11 = jacobi(ctx, 1, 1);
  CHECK(abs(eval_theta(j11.sym, Complex(ctx))) < pow10(ctx.bits(), -45));

  // residue exactly -1/2 classifies as flag-pole
  SemiclassicalType half = build_type(rpoly(ctx, {-0.5, 1}), rpoly(ctx, {0, 1}), false, ctx);
  REQUIRE(half.poles.size() == 1);
  CHECK(half.poles[0].kind == PoleKind::flag_pole);
}

TEST_CASE("table rows reproduce the symbol derivative in exact arithmetic") {
  // Laguerre: theta' = (alpha - x)/x from the symbol -x + alpha log x
  Rat alpha(1, 2);
  QPoly A({QComplex(-alpha - Rat(1)), QComplex(1)});
  QPoly B({QComplex(0), QComplex(1)});
  QPoly N = QPoly() - (A + B.derivative());
  CHECK(QRatFun(N, B) == QRatFun(QPoly({QComplex(alpha), QComplex(-1)}), B));

  // Jacobi: theta' = ((alpha+beta) x + alpha - beta)/(x^2 - 1)
  Rat ja(1), jb(2);
  QPoly JA({QComplex(-(ja - jb)), QComplex(-(ja + jb + Rat(2)))});
  QPoly JB({QComplex(-1), QComplex(0), QComplex(1)});
  QPoly JN = QPoly() - (JA + JB.derivative());
  QPoly expect_num({QComplex(ja - jb), QComplex(ja + jb)});
  CHECK(QRatFun(JN, JB) == QRatFun(expect_num, JB));
}

TEST_CASE("finite-rank detection and degree bound") {
  PrecisionContext ctx(50);
  // A = 2 B' with B = z^2 - 1
  SemiclassicalType t = build_type(rpoly(ctx, {0, 4}), rpoly(ctx, {-1, 0, 1}), false, ctx);
  CHECK(t.finite_rank);
  CHECK(t.finite_rank_k == 2);

  SemiclassicalType j = jacobi(ctx, 1, 1);
  CHECK(j.degree_bound_ok(1));
}
