#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "sbethe/contours.hpp"

using namespace sbethe;
using namespace sbtest;

namespace {

SemiclassicalType make_type(const PrecisionContext& ctx, std::initializer_list<double> A,
                            std::initializer_list<double> B) {
  Polynomial pa = rpoly(ctx, A), pb = rpoly(ctx, B);
  return build_type(pa, pb, false, ctx);
}

void set_unit_weight(WeightedContourSet& wcs, const PrecisionContext& ctx) {
  wcs.s.assign(wcs.contours.size(), Complex(ctx, 1, 0));
}

}  // namespace

TEST_CASE("Gaussian moments over the real line") {
  PrecisionContext ctx(50);
  SemiclassicalType t = make_type(ctx, {0, 2}, {1});  // theta = -z^2
  WeightedContourSet wcs = build_contours(t);
  REQUIRE(wcs.contours.size() == 1);
  REQUIRE(wcs.duals.size() == 1);
  set_unit_weight(wcs, ctx);
  Real tol = pow10(ctx.bits(), -55);
  auto mu = moments(wcs, t.sym, 4, tol, ctx.bits());
  Real rt_pi = sqrt(pi(ctx));
  CHECK(close(mu[0], Complex(rt_pi, Real(ctx)), pow10(ctx.bits(), -48)));
  CHECK(abs(mu[1]) < pow10(ctx.bits(), -48));
  CHECK(close(mu[2], Complex(rt_pi * Real(ctx, 0.5), Real(ctx)), pow10(ctx.bits(), -48)));
  CHECK(close(mu[4], Complex(rt_pi * Real(ctx, 0.75), Real(ctx)), pow10(ctx.bits(), -48)));

  Integrand one{rpoly(ctx, {1}), +1, {}, {}};
  QuadratureReport rep = integrate_weighted(wcs.contours[0], one, t.sym, tol, ctx.bits());
  CHECK(close(rep.value, Complex(rt_pi, Real(ctx)), pow10(ctx.bits(), -48)));
  CHECK(rep.panels > 0);
}

TEST_CASE("Laguerre moments: k! and Gamma(k+3/2)") {
  PrecisionContext ctx(50);
  Real tol = pow10(ctx.bits(), -55);
  {
    SemiclassicalType t = make_type(ctx, {-1, 1}, {0, 1});  // alpha = 0
    WeightedContourSet wcs = build_contours(t);
    set_unit_weight(wcs, ctx);
    auto mu = moments(wcs, t.sym, 6, tol, ctx.bits());
    Real fact(ctx, 1L);
    for (int k = 0; k <= 6; ++k) {
      if (k > 0) fact *= static_cast<long>(k);
      CHECK(close(mu[static_cast<size_t>(k)], Complex(fact, Real(ctx)), pow10(ctx.bits(), -45)));
    }
  }
  {
    SemiclassicalType t = make_type(ctx, {-1.5, 1}, {0, 1});  // alpha = 1/2
    WeightedContourSet wcs = build_contours(t);
    set_unit_weight(wcs, ctx);
    auto mu = moments(wcs, t.sym, 4, tol, ctx.bits());
    for (int k = 0; k <= 4; ++k) {
      Real expect = gamma_fn(Real(ctx, 1.5) + Real(ctx, static_cast<long>(k)));
      CHECK(close(mu[static_cast<size_t>(k)], Complex(expect, Real(ctx)),
                  pow10(ctx.bits(), -45)));
    }
  }
}

TEST_CASE("Jacobi segment moments, smooth and singular-endpoint weights") {
  PrecisionContext ctx(50);
  Real tol = pow10(ctx.bits(), -55);
  {
    // alpha = beta = 1: integral of x^k (1 - x^2) over [-1, 1]
    SemiclassicalType t = make_type(ctx, {0, -4}, {-1, 0, 1});
    WeightedContourSet wcs = build_contours(t);
    REQUIRE(wcs.contours.size() == 1);
    set_unit_weight(wcs, ctx);
    auto mu = moments(wcs, t.sym, 5, tol, ctx.bits());
    for (int k = 0; k <= 5; ++k) {
      Real expect(ctx);
      if (k % 2 == 0)
        expect = Real(ctx, 2L) / static_cast<long>(k + 1) - Real(ctx, 2L) / static_cast<long>(k + 3);
      CHECK(close(mu[static_cast<size_t>(k)], Complex(expect, Real(ctx)), pow10(ctx.bits(), -45)));
    }
  }
  {
    // generic exponents: mu_0 = 2^{a+b+1} Gamma(a+1)Gamma(b+1)/Gamma(a+b+2),
    // with a, b read back from the constructed type's residues
    double al = 0.3, be = 0.7;
    SemiclassicalType t = make_type(ctx, {-(al - be), -(al + be + 2)}, {-1, 0, 1});
    WeightedContourSet wcs = build_contours(t);
    set_unit_weight(wcs, ctx);
    auto mu = moments(wcs, t.sym, 0, tol, ctx.bits());
    Real a(ctx), b(ctx);
    for (const auto& p : t.poles)
      (p.location.re() > 0 ? a : b) = p.residue.re();
    Real one(ctx, 1L), two(ctx, 2L);
    Real expect = pow(two, a + b + one) * gamma_fn(a + one) * gamma_fn(b + one) /
                  gamma_fn(a + b + two);
    CHECK(close(mu[0], Complex(expect, Real(ctx)), pow10(ctx.bits(), -45)));
  }
}

TEST_CASE("Freud sector homology: full cycle integrates to zero") {
  PrecisionContext ctx(50);
  SemiclassicalType t = make_type(ctx, {0, 0, 0, 2}, {1});
  Real tol = pow10(ctx.bits(), -55);
  std::vector<std::vector<Complex>> vals;
  for (int j = 1; j <= 4; ++j) {
    Contour c = freud_sector(t, j);
    vals.push_back(contour_monomial_integrals(c, t.sym, 8, tol, ctx.bits()));
  }
  for (int k = 0; k <= 8; ++k) {
    Complex sum(ctx);
    Real scale(ctx);
    for (const auto& v : vals) {
      sum += v[static_cast<size_t>(k)];
      scale = max(scale, abs(v[static_cast<size_t>(k)]));
    }
    CHECK(abs(sum) < max(scale, Real(ctx, 1L)) * pow10(ctx.bits(), -45));
  }
}

TEST_CASE("Freud mixed functional reproduces the gamma closed form") {
  PrecisionContext ctx(50);
  SemiclassicalType t = make_type(ctx, {0, 0, 0, 2}, {1});  // theta = -z^4/2
  WeightedContourSet wcs = build_contours(t);
  REQUIRE(wcs.contours.size() == 3);
  // functional along R + s * iR with s = i sigma: in the sector basis
  // R ~ -g1 - g2 and iR ~ -g2 - g3
  double sigma = 0.25;
  Complex s(ctx, 0, sigma);
  wcs.s = {Complex(ctx, -1, 0), -(Complex(ctx, 1, 0) + s), -s};
  Real tol = pow10(ctx.bits(), -55);
  auto mu = moments(wcs, t.sym, 21, tol, ctx.bits());
  Real quarter(ctx, 0.25), two(ctx, 2L);
  for (int j = 0; j <= 10; ++j) {
    Real e24 = pow(two, Real(ctx, (2.0 * j - 3.0) / 4.0));
    Real g = gamma_fn(quarter * static_cast<long>(2 * j + 1));
    double sgn = (j % 2 == 0) ? 1.0 : -1.0;
    Real expect = (Real(ctx, 1L) - Real(ctx, sgn * sigma)) * e24 * g;
    CHECK(close(mu[static_cast<size_t>(2 * j)], Complex(expect, Real(ctx)),
                pow10(ctx.bits(), -42) * max(expect, Real(ctx, 1L))));
    if (j < 10) CHECK(abs(mu[static_cast<size_t>(2 * j + 1)]) < pow10(ctx.bits(), -45));
  }
}

TEST_CASE("integer Bessel-type circle matches residue series") {
  PrecisionContext ctx(50);
  // theta' = 1/x^2 + nu/x, nu = 3: weight z^nu e^{-1/z}, circle around 0
  double nu = 3;
  SemiclassicalType t = make_type(ctx, {-1, -(2 + nu)}, {0, 0, 1});
  WeightedContourSet wcs = build_contours(t);
  REQUIRE(wcs.contours.size() == 1);
  CHECK(wcs.contours[0].kind == ContourKind::circle);
  set_unit_weight(wcs, ctx);
  Real tol = pow10(ctx.bits(), -55);
  auto mu = moments(wcs, t.sym, 5, tol, ctx.bits());
  // contour integral of z^{j+nu} e^{-1/z}: residue (-1)^{j+nu+1}/(j+nu+1)!
  Real fact(ctx, 1L);
  for (int m = 1; m <= static_cast<int>(nu) + 1; ++m) fact *= static_cast<long>(m);
  for (int j = 0; j <= 5; ++j) {
    long idx = j + static_cast<long>(nu) + 1;
    if (j > 0) fact *= idx;
    double sgn = (idx % 2 == 0) ? 1.0 : -1.0;
    Complex expect = Complex(ctx, 0, sgn) * (pi(ctx) * 2L) / fact;
    CHECK(close(mu[static_cast<size_t>(j)], expect, pow10(ctx.bits(), -45)));
  }
}

TEST_CASE("semiclassical identity M[Ap] = M[Bp'] across supported classes") {
  PrecisionContext ctx(50);
  Real tol = pow10(ctx.bits(), -52);
  std::mt19937_64 rng(2024);
  auto rnd = [&]() { return ((rng() >> 11) * 0x1.0p-53) * 2.0 - 1.0; };

  auto check_identity = [&](SemiclassicalType& t) {
    WeightedContourSet wcs = build_contours(t);
    wcs.s.clear();
    for (size_t j = 0; j < wcs.contours.size(); ++j) wcs.s.emplace_back(ctx, rnd(), rnd());
    std::vector<Complex> pc;
    for (int i = 0; i <= 5; ++i) pc.emplace_back(ctx, rnd(), rnd());
    Polynomial p(ctx.bits(), pc);
    Complex lhs = apply_functional(wcs, t.sym, t.A * p, tol, ctx.bits());
    Complex rhs = apply_functional(wcs, t.sym, t.B * p.derivative(), tol, ctx.bits());
    Real scale = max(max(abs(lhs), abs(rhs)), Real(ctx, 1L));
    // moment scale enters the cancellation budget
    auto mu = moments(wcs, t.sym, t.A.degree() + 5, tol, ctx.bits());
    for (const auto& m : mu) scale = max(scale, abs(m));
    CHECK(abs(lhs - rhs) < scale * pow10(ctx.bits(), -40));
  };

  SemiclassicalType hermite = make_type(ctx, {0, 2}, {1});
  check_identity(hermite);
  SemiclassicalType freud = make_type(ctx, {0, 0, 0, 2}, {1});
  check_identity(freud);
  SemiclassicalType freud2 = make_type(ctx, {0, -2, 0, 1}, {1});  // theta = -z^4/4 + z^2
  check_identity(freud2);
  SemiclassicalType lag = make_type(ctx, {-1.5, 1}, {0, 1});
  check_identity(lag);
  SemiclassicalType jac = make_type(ctx, {-(0.3 - 0.7), -(0.3 + 0.7 + 2)}, {-1, 0, 1});
  check_identity(jac);
  SemiclassicalType bes = make_type(ctx, {-1, -5}, {0, 0, 1});
  check_identity(bes);
  SemiclassicalType petals = make_type(ctx, {1}, {0, 0, 0, 1});  // B = z^3
  check_identity(petals);
  SemiclassicalType finite_rank = make_type(ctx, {0, 4}, {-1, 0, 1});  // A = 2 B'
  check_identity(finite_rank);
  SemiclassicalType lag_flag = make_type(ctx, {-0.3, 1}, {0, 1});  // alpha = -0.7 flag pole
  check_identity(lag_flag);
  SemiclassicalType cardioid = make_type(ctx, {1, 2 - 2.5}, {0, 0, 1});  // petal, nu = 2.5
  check_identity(cardioid);
  SemiclassicalType legendre_like = make_type(ctx, {0, -2}, {-1, 0, 1});  // A = -B'
  check_identity(legendre_like);
}

TEST_CASE("doubling the truncation radius leaves moments unchanged") {
  PrecisionContext ctx(50);
  Real tol = pow10(ctx.bits(), -55);
  SemiclassicalType t1 = make_type(ctx, {0, -2, 0, 1}, {1});
  SemiclassicalType t2 = make_type(ctx, {0, -2, 0, 1}, {1});
  WeightedContourSet w1 = build_contours(t1);
  ContourBuildOptions opt;
  opt.trunc_scale = 2.0;
  WeightedContourSet w2 = build_contours(t2, opt);
  set_unit_weight(w1, ctx);
  set_unit_weight(w2, ctx);
  auto m1 = moments(w1, t1.sym, 8, tol, ctx.bits());
  auto m2 = moments(w2, t2.sym, 8, tol, ctx.bits());
  for (int k = 0; k <= 8; ++k) {
    Real scale = max(abs(m1[static_cast<size_t>(k)]), Real(ctx, 1L));
    CHECK(abs(m1[static_cast<size_t>(k)] - m2[static_cast<size_t>(k)]) <
          scale * pow10(ctx.bits(), -50));
  }
}

TEST_CASE("dual pairing has intersection numbers delta_jk") {
  PrecisionContext ctx(50);
  auto check_pairing = [&](SemiclassicalType& t) {
    WeightedContourSet wcs = build_contours(t);
    REQUIRE(wcs.duals.size() == wcs.contours.size());
    // the class number d counts the independent contours (the finite-rank
    // family is the documented exception: all deg B circles are independent)
    if (!t.finite_rank) CHECK(static_cast<int>(wcs.contours.size()) == t.d);
    for (size_t j = 0; j < wcs.duals.size(); ++j)
      for (size_t k = 0; k < wcs.contours.size(); ++k) {
        int expect = (j == k) ? 1 : 0;
        CHECK(intersection_number(wcs.duals[j], wcs.contours[k]) == expect);
      }
  };
  SemiclassicalType freud = make_type(ctx, {0, 0, 0, 2}, {1});
  check_pairing(freud);
  SemiclassicalType hermite = make_type(ctx, {0, 2}, {1});
  check_pairing(hermite);
  SemiclassicalType lag = make_type(ctx, {-1.5, 1}, {0, 1});
  check_pairing(lag);
  SemiclassicalType jac = make_type(ctx, {0, -4}, {-1, 0, 1});
  check_pairing(jac);
  SemiclassicalType petals = make_type(ctx, {1}, {0, 0, 0, 1});
  check_pairing(petals);
  SemiclassicalType fr = make_type(ctx, {0, 4}, {-1, 0, 1});
  check_pairing(fr);
}

TEST_CASE("zero weights give the zero functional") {
  PrecisionContext ctx(50);
  SemiclassicalType t = make_type(ctx, {0, 2}, {1});
  WeightedContourSet wcs = build_contours(t);
  wcs.s.assign(wcs.contours.size(), Complex(ctx));
  auto mu = moments(wcs, t.sym, 3, pow10(ctx.bits(), -50), ctx.bits());
  for (const auto& m : mu) CHECK(m.is_zero());
}

TEST_CASE("non-coprime input with pole cancellation still integrates correctly") {
  // A = 2z, B = z^2 reduce to theta' = -4/z: a single negative-integer flag
  // pole despite the double root of B
  PrecisionContext ctx(50);
  Polynomial A = rpoly(ctx, {0, 2}), B = rpoly(ctx, {0, 0, 1});
  SemiclassicalType t = build_type(A, B, true, ctx);
  REQUIRE(t.poles.size() == 1);
  CHECK(t.poles[0].order == 1);
  WeightedContourSet wcs = build_contours(t);
  REQUIRE(wcs.contours.size() == 1);
  CHECK(wcs.contours[0].kind == ContourKind::circle);
  wcs.s.assign(1, Complex(ctx, 1, 0));
  Real tol = pow10(ctx.bits(), -50);
  std::vector<Complex> pc{Complex(ctx, 0.3, 0.2), Complex(ctx, 1, 0), Complex(ctx, 0, -1)};
  Polynomial p(ctx.bits(), pc);
  Complex lhs = apply_functional(wcs, t.sym, t.A * p, tol, ctx.bits());
  Complex rhs = apply_functional(wcs, t.sym, t.B * p.derivative(), tol, ctx.bits());
  CHECK(abs(lhs - rhs) < max(abs(lhs), Real(ctx, 1L)) * pow10(ctx.bits(), -42));
  // weight z^{-4}: moments are residues, mu_3 = 2 pi i
  auto mu = moments(wcs, t.sym, 4, tol, ctx.bits());
  CHECK(close(mu[3], Complex(Real(ctx), pi(ctx) * 2L), pow10(ctx.bits(), -45)));
  CHECK(abs(mu[2]) < pow10(ctx.bits(), -45));
}
