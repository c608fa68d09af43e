#include "sbethe/equilibrium.hpp"

#include <cmath>
#include <cstdio>
#include <random>

namespace sbethe {

namespace {

Real config_diameter(const std::vector<Complex>& pts, mpfr_prec_t bits) {
  Real d(bits);
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j) d = max(d, abs(pts[i] - pts[j]));
  if (d.is_zero()) d = Real::with_prec(bits, 1L);
  return d;
}

void check_points(const SemiclassicalType& t, const std::vector<Complex>& pts) {
  const mpfr_prec_t bits = t.bits;
  Real diam = config_diameter(pts, bits);
  Real coll = diam * pow10(bits, -(t.digits / 2));
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j)
      if (abs(pts[i] - pts[j]) < coll)
        throw collision_error("residual: near-coincident points");
  if (t.b >= 1) {
    Real scale = max(t.B.max_coeff_abs(), Real::with_prec(bits, 1L));
    for (const auto& z : pts)
      if (abs(t.B.eval(z)) < scale * pow10(bits, -(t.digits / 2)))
        throw numeric_error("residual: point at a zero of B");
  }
}

bool poly_is_real(const Polynomial& p, mpfr_prec_t bits, int digits) {
  Real tol = p.max_coeff_abs() * pow10(bits, -digits);
  for (const auto& c : p.coeffs())
    if (abs(c.im()) > tol) return false;
  return true;
}

}  // namespace

std::vector<Complex> residual(const SemiclassicalType& t, const std::vector<Complex>& pts) {
  check_points(t, pts);
  const mpfr_prec_t bits = t.bits;
  const int n = static_cast<int>(pts.size());
  std::vector<Complex> r(static_cast<size_t>(n), Complex(bits));
  for (int j = 0; j < n; ++j) {
    Complex sum(bits);
    for (int k = 0; k < n; ++k)
      if (k != j) sum += inv(pts[static_cast<size_t>(j)] - pts[static_cast<size_t>(k)]);
    Complex field = t.A.eval(pts[static_cast<size_t>(j)]) /
                    (t.B.eval(pts[static_cast<size_t>(j)]) * 2L);
    r[static_cast<size_t>(j)] = sum - field;
  }
  return r;
}

Matrix jacobian(const SemiclassicalType& t, const std::vector<Complex>& pts) {
  check_points(t, pts);
  const mpfr_prec_t bits = t.bits;
  const int n = static_cast<int>(pts.size());
  // (A/2B)' = (A'B - AB')/(2B^2)
  Polynomial num = t.A.derivative() * t.B - t.A * t.B.derivative();
  Matrix J(bits, n, n);
  for (int j = 0; j < n; ++j) {
    Complex diag(bits);
    for (int k = 0; k < n; ++k) {
      if (k == j) continue;
      Complex inv2 = inv(pts[static_cast<size_t>(j)] - pts[static_cast<size_t>(k)]);
      inv2 *= inv2;
      J.at(j, k) = inv2;
      diag -= inv2;
    }
    Complex bz = t.B.eval(pts[static_cast<size_t>(j)]);
    diag -= num.eval(pts[static_cast<size_t>(j)]) / (bz * bz * 2L);
    J.at(j, j) = diag;
  }
  return J;
}

namespace {

std::vector<Complex> hermite_zeros(int n, mpfr_prec_t bits) {
  std::vector<Real> diag(static_cast<size_t>(n), Real(bits));
  std::vector<Real> off;
  for (int k = 1; k < n; ++k)
    off.push_back(sqrt(Real::with_prec(bits, static_cast<double>(k) / 2.0)));
  auto ev = symtridiag_eigenvalues(diag, off);
  std::vector<Complex> z;
  for (const auto& x : ev) z.emplace_back(x, Real(bits));
  return z;
}

std::vector<Complex> laguerre_zeros(int n, const Real& alpha, mpfr_prec_t bits) {
  std::vector<Real> diag, off;
  for (int k = 0; k < n; ++k)
    diag.push_back(Real::with_prec(bits, static_cast<long>(2 * k + 1)) + alpha);
  for (int k = 1; k < n; ++k)
    off.push_back(sqrt(Real::with_prec(bits, static_cast<long>(k)) *
                       (Real::with_prec(bits, static_cast<long>(k)) + alpha)));
  auto ev = symtridiag_eigenvalues(diag, off);
  std::vector<Complex> z;
  for (const auto& x : ev) z.emplace_back(x, Real(bits));
  return z;
}

std::vector<Complex> jacobi_zeros(int n, const Real& al, const Real& be, mpfr_prec_t bits) {
  // monic Jacobi recurrence on [-1, 1]
  const Real one = Real::with_prec(bits, 1L);
  std::vector<Real> diag, off;
  for (int k = 0; k < n; ++k) {
    if (k == 0) {
      diag.push_back((be - al) / (al + be + 2L));
      continue;
    }
    Real kk = Real::with_prec(bits, static_cast<long>(k));
    Real s = kk * 2L + al + be;
    diag.push_back((be * be - al * al) / (s * (s + 2L)));
  }
  for (int k = 1; k < n; ++k) {
    Real kk = Real::with_prec(bits, static_cast<long>(k));
    Real s = kk * 2L + al + be;
    Real num = (kk * 4L) * (kk + al) * (kk + be) * (kk + al + be);
    Real den = s * s * (s + one) * (s - one);
    off.push_back(sqrt(num / den));
  }
  auto ev = symtridiag_eigenvalues(diag, off);
  std::vector<Complex> z;
  for (const auto& x : ev) z.emplace_back(x, Real(bits));
  return z;
}

}  // namespace

std::vector<Complex> seed_points(const SemiclassicalType& t, int n, const SeedSpec& seed) {
  const mpfr_prec_t bits = t.bits;
  std::mt19937_64 rng(seed.rng_seed);
  auto u01 = [&]() { return (rng() >> 11) * 0x1.0p-53; };

  std::vector<Complex> base;
  bool real_class = poly_is_real(t.A, bits, t.digits / 2) && poly_is_real(t.B, bits, t.digits / 2);

  switch (seed.strategy) {
    case SeedSpec::Strategy::user_list:
      if (static_cast<int>(seed.user_points.size()) != n)
        throw std::invalid_argument("seed_points: user list length must equal n");
      base = seed.user_points;
      break;
    case SeedSpec::Strategy::random_disk: {
      double sc = seed.scale > 0 ? seed.scale : 1.0;
      for (int j = 0; j < n; ++j) {
        double r = sc * std::sqrt(u01());
        double ph = 2.0 * 3.14159265358979323846 * u01();
        base.emplace_back(Real::with_prec(bits, r * std::cos(ph)),
                          Real::with_prec(bits, r * std::sin(ph)));
      }
      real_class = false;
      break;
    }
    case SeedSpec::Strategy::scaled_roots_of_unity: {
      double sc = seed.scale > 0 ? seed.scale
                                 : std::pow(static_cast<double>(n), 1.0 / (t.a + 1));
      for (int j = 0; j < n; ++j) {
        double ph = 2.0 * 3.14159265358979323846 * j / n + 0.3;
        base.emplace_back(Real::with_prec(bits, sc * std::cos(ph)),
                          Real::with_prec(bits, sc * std::sin(ph)));
      }
      real_class = false;
      break;
    }
    case SeedSpec::Strategy::classical_zeros: {
      if (t.b == 0) {
        base = hermite_zeros(n, bits);
        double maxabs = 1e-30;
        for (const auto& z : base) maxabs = std::max(maxabs, abs(z).to_double());
        double sc = seed.scale > 0
                        ? seed.scale / maxabs
                        : std::pow(static_cast<double>(n), 1.0 / (t.a + 1)) / maxabs;
        for (auto& z : base) z *= Real::with_prec(bits, sc);
      } else if (t.b == 1 && !t.poles.empty()) {
        Real alpha = t.poles[0].residue.re();
        if (alpha <= -0.99) alpha = Real::with_prec(bits, -0.5);
        base = laguerre_zeros(n, alpha, bits);
        for (auto& z : base) z += t.poles[0].location;
      } else if (t.b == 2 && t.a < t.b && t.poles.size() == 2) {
        // exponents from the theta_hat residues: res = -(exponent + 1)
        size_t hi = t.poles[0].location.re() > t.poles[1].location.re() ? 0 : 1;
        size_t lo = 1 - hi;
        auto hat_res = [&](size_t i) {
          return (t.A.eval(t.poles[i].location) /
                  t.B.derivative().eval(t.poles[i].location))
              .re();
        };
        Real al = -hat_res(hi) - Real::with_prec(bits, 1L);
        Real be = -hat_res(lo) - Real::with_prec(bits, 1L);
        if (al <= -0.99) al = Real::with_prec(bits, -0.5);
        if (be <= -0.99) be = Real::with_prec(bits, -0.5);
        auto xs = jacobi_zeros(n, al, be, bits);
        Complex mid = (t.poles[lo].location + t.poles[hi].location) / 2L;
        Complex half = (t.poles[hi].location - t.poles[lo].location) / 2L;
        for (const auto& x : xs) base.push_back(mid + half * x.re());
      } else {
        SeedSpec alt = seed;
        alt.strategy = SeedSpec::Strategy::scaled_roots_of_unity;
        return seed_points(t, n, alt);
      }
      break;
    }
  }

  // jitter; stays on the real slice for real-symmetric classes
  Real diam = config_diameter(base, bits);
  for (auto& z : base) {
    double jr = seed.jitter * (2.0 * u01() - 1.0);
    double ji = real_class ? 0.0 : seed.jitter * (2.0 * u01() - 1.0);
    z += Complex(diam * Real::with_prec(bits, jr), diam * Real::with_prec(bits, ji));
  }
  return base;
}

Configuration solve(const SemiclassicalType& t, int n, const SeedSpec& seed, const Real& tol,
                    int max_iter) {
  if (n < 1) throw std::invalid_argument("solve: n must be >= 1");
  const mpfr_prec_t bits = t.bits;
  if (t.a < t.b && !t.degree_bound_ok(n))
    std::fprintf(stderr, "solve: warning: 2n > Re(Lambda) - 1 - deg B fails for n = %d\n", n);

  auto l2 = [&](const std::vector<Complex>& v) {
    Real s(bits);
    for (const auto& c : v) s += norm(c);
    return sqrt(s);
  };
  auto linf = [&](const std::vector<Complex>& v) {
    Real s(bits);
    for (const auto& c : v) s = max(s, abs(c));
    return s;
  };

  SeedSpec attempt_seed = seed;
  for (int attempt = 0; attempt < 5; ++attempt) {
    Configuration cfg;
    cfg.n = n;
    try {
      std::vector<Complex> z = seed_points(t, n, attempt_seed);
      std::vector<Complex> r = residual(t, z);
      Real rl2 = l2(r);
      for (int iter = 0; iter < max_iter; ++iter) {
        cfg.iterations = iter + 1;
        if (linf(r) < tol) break;
        Matrix J = jacobian(t, z);
        LU f = lu_decompose(J);
        if (f.singular) throw numeric_error("solve: Jacobian numerically singular");
        std::vector<Complex> step = lu_solve(f, r);
        // damped update: halve until the l2 residual decreases
        Real lambda = Real::with_prec(bits, 1L);
        bool accepted = false;
        for (int h = 0; h <= 30; ++h) {
          std::vector<Complex> znew = z;
          for (int i = 0; i < n; ++i)
            znew[static_cast<size_t>(i)] -= step[static_cast<size_t>(i)] * lambda;
          try {
            std::vector<Complex> rnew = residual(t, znew);
            Real rnew2 = l2(rnew);
            if (rnew2 < rl2 || h == 30) {
              z = std::move(znew);
              r = std::move(rnew);
              rl2 = rnew2;
              accepted = true;
              break;
            }
          } catch (const collision_error&) {
            // shrink the step away from the collision
          }
          lambda *= Real::with_prec(bits, 0.5);
        }
        if (!accepted) throw numeric_error("solve: damped step rejected");
      }
      cfg.points = std::move(z);
      cfg.residual_norm = linf(r);
      cfg.converged = cfg.residual_norm < tol;
      if (cfg.converged || attempt == 4) return cfg;
    } catch (const numeric_error&) {
      if (attempt == 4) throw;
    }
    attempt_seed.rng_seed = attempt_seed.rng_seed * 6364136223846793005ULL + 1442695040888963407ULL;
    attempt_seed.jitter = seed.jitter * (1.0 + 0.5 * (attempt + 1));
  }
  throw convergence_error("solve: retry budget exhausted");
}

Real energy(const SemiclassicalType& t, const Configuration& cfg) {
  const mpfr_prec_t bits = t.bits;
  Real e(bits);
  const auto& z = cfg.points;
  for (size_t i = 0; i < z.size(); ++i)
    for (size_t j = i + 1; j < z.size(); ++j) e -= log(abs(z[i] - z[j])) * 2L;
  for (const auto& p : z) e += eval_theta_hat(t.sym, p).re() * 2L;
  return e;
}

}  // namespace sbethe
