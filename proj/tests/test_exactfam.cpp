#include "doctest.h"
#include "helpers.hpp"
#include "sbethe/exactfam.hpp"
#include "sbethe/roots.hpp"

using namespace sbethe;
using namespace sbtest;

TEST_CASE("family polynomial: exact construction and Lame identity") {
  QPoly B({QComplex(-1), QComplex(0), QComplex(1)});  // z^2 - 1
  FamilyInstance fam = family_polynomial(B, 1, QComplex(Rat(1, 7)));
  CHECK(fam.n == 3);
  CHECK(fam.P.coeff(0) == QComplex(Rat(1, 7)));
  CHECK(fam.P.coeff(1) == QComplex(-1));
  CHECK(fam.P.coeff(2) == QComplex(0));
  CHECK(fam.P.coeff(3) == QComplex(Rat(1, 3)));

  QPoly Bz({QComplex(0), QComplex(1)});  // z
  FamilyInstance f2 = family_polynomial(Bz, 2, QComplex(0));
  CHECK(f2.n == 3);
  CHECK(f2.P == QPoly({QComplex(0), QComplex(0), QComplex(0), QComplex(Rat(1, 3))}));

  QPoly Bd({QComplex(1), QComplex(-2), QComplex(1)});  // (z-1)^2: double root
  CHECK_THROWS(family_polynomial(Bd, 1, QComplex(0)));
}

TEST_CASE("exact residue moments match the closed form for two simple roots") {
  // B = (z - b1)(z - b2); res_{b_l} z^j / B^2 = j b_l^{j-1}/(b1-b2)^2 - 2 b_l^j/(b_l - b_other)^3
  QComplex b1(Rat(3)), b2(Rat(-2));
  QPoly B = QPoly({-b1, QComplex(1)}) * QPoly({-b2, QComplex(1)});
  std::vector<QComplex> roots{b1, b2};
  QPoly zj = QPoly::constant(QComplex(1));
  for (int j = 0; j <= 4; ++j) {
    for (size_t l = 0; l < 2; ++l) {
      QComplex bl = roots[l], bo = roots[1 - l];
      QComplex diff = bl - bo;
      QComplex blj_1;  // j * b_l^{j-1}
      {
        QComplex p(Rat(1));
        for (int i = 0; i < j - 1; ++i) p *= bl;
        blj_1 = j == 0 ? QComplex(0) : p * QComplex(Rat(j));
      }
      QComplex blj(Rat(1));
      for (int i = 0; i < j; ++i) blj *= bl;
      QComplex expect = blj_1 / (diff * diff) - QComplex(Rat(2)) * blj / (diff * diff * diff);
      CHECK(residue_at_root(B, 1, roots, l, zj) == expect);
    }
    zj = zj * QPoly::variable();
  }

  // the two root functionals are linearly independent; note that the
  // residue-sum theorem forces M2[z^j] = -M1[z^j] for all j <= 2 (z^j/B^2
  // decays like z^{j-4}), so the independence first shows at j = 3
  std::vector<QComplex> e1{QComplex(1), QComplex(0)}, e2{QComplex(0), QComplex(1)};
  auto m1 = residue_moments(B, 1, roots, e1, 3);
  auto m2 = residue_moments(B, 1, roots, e2, 3);
  for (int j = 0; j <= 2; ++j)
    CHECK((m1[static_cast<size_t>(j)] + m2[static_cast<size_t>(j)]).is_zero());
  bool independent = false;
  for (int i = 0; i < 4 && !independent; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (!(m1[static_cast<size_t>(i)] * m2[static_cast<size_t>(j)] -
            m1[static_cast<size_t>(j)] * m2[static_cast<size_t>(i)])
               .is_zero())
        independent = true;
  CHECK(independent);
}

TEST_CASE("family orthogonality is exact and weights match 1/P(beta)") {
  PrecisionContext ctx(50);
  const mpfr_prec_t bits = ctx.bits();
  QPoly B({QComplex(-1), QComplex(0), QComplex(1)});
  std::vector<QComplex> roots{QComplex(Rat(1)), QComplex(Rat(-1))};

  for (long k : {1L, 2L}) {
    FamilyInstance fam = family_polynomial(B, k, QComplex(Rat(1, 7), Rat(1, 3)));
    std::vector<QComplex> w;
    for (const auto& beta : roots) w.push_back(QComplex(1) / fam.P.eval(beta));
    int d = B.degree() - 1;
    QPoly zm = QPoly::constant(QComplex(1));
    for (int m = 0; m <= fam.n + d - 2; ++m) {
      CHECK(residue_apply(B, k, roots, w, fam.P * zm).is_zero());
      zm = zm * QPoly::variable();
    }

    // numeric route: roots of P solve the equilibrium equations, and the
    // dual-contour weights reproduce 1/P(beta) up to one global scale
    Polynomial A = B.derivative().to_polynomial(bits) * Complex(ctx, static_cast<double>(k), 0);
    SemiclassicalType t = build_type(A, B.to_polynomial(bits), false, ctx);
    REQUIRE(t.finite_rank);
    WeightedContourSet wcs = build_contours(t);
    Configuration cfg;
    cfg.points = poly_roots(fam.P.to_polynomial(bits));
    cfg.n = static_cast<int>(cfg.points.size());
    Real mx(bits);
    for (const auto& r : residual(t, cfg.points)) mx = max(mx, abs(r));
    CHECK(mx < pow10(bits, -40));
    cfg.converged = true;
    cfg.residual_norm = mx;

    auto s = weights_from_config(t, cfg, wcs, pow10(bits, -50));
    REQUIRE(s.size() == 2);
    // match contour anchors to the exact roots
    std::vector<Complex> expect;
    for (const auto& anchor : wcs.anchors) {
      size_t best = 0;
      Real bd = abs(anchor - roots[0].to_complex(bits));
      for (size_t i = 1; i < roots.size(); ++i)
        if (abs(anchor - roots[i].to_complex(bits)) < bd) {
          bd = abs(anchor - roots[i].to_complex(bits));
          best = i;
        }
      expect.push_back((QComplex(1) / fam.P.eval(roots[best])).to_complex(bits));
    }
    Complex ratio = s[0] / expect[0];
    for (size_t i = 1; i < s.size(); ++i)
      CHECK(abs(s[i] / expect[i] - ratio) < abs(ratio) * pow10(bits, -15));
  }
}

TEST_CASE("lift_primality: residuals vanish, root center is inconsistent, weights minimal") {
  PrecisionContext ctx(50);
  const mpfr_prec_t bits = ctx.bits();
  Real tol = pow10(bits, -45);
  Real qtol = pow10(bits, -52);

  SemiclassicalType t = build_type(rpoly(ctx, {0, 0, 0, 2}), rpoly(ctx, {1}), false, ctx);
  WeightedContourSet wcs = build_contours(t);
  SeedSpec seed;
  seed.rng_seed = 5;
  Configuration cfg = solve(t, 4, seed, tol);
  REQUIRE(cfg.converged);
  wcs.s = weights_from_config(t, cfg, wcs, qtol);
  Polynomial P = Polynomial::from_roots(bits, cfg.points);

  for (int K : {1, 2}) {
    Complex c(ctx, 10, 0);
    LiftedFunctional lf = lift_primality(t, wcs, P, c, K, qtol);
    REQUIRE(static_cast<int>(lf.s_tilde.size()) == K);
    REQUIRE(static_cast<int>(lf.residuals.size()) == 4 + t.d + K - 1);
    for (const auto& r : lf.residuals)
      CHECK(r < pow10(bits, -35) * max(lf.scale, Real::with_prec(bits, 1L)));

    // dropping any single delta weight breaks the lifted orthogonality
    for (int l = 0; l < K; ++l) {
      auto broken = lf.s_tilde;
      broken[static_cast<size_t>(l)] = Complex(bits);
      Real scale(bits);
      auto res = lifted_residuals(t, wcs, P, c, K, broken, qtol, &scale);
      Real worst(bits);
      for (const auto& r : res) worst = max(worst, r);
      CHECK(worst > max(scale, Real::with_prec(bits, 1L)) * pow10(bits, -12));
    }
  }

  // c at a root of P raises the predicted inconsistency
  CHECK_THROWS_AS(lift_primality(t, wcs, P, cfg.points[0], 1, qtol), numeric_error);
}
