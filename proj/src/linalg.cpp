#include "sbethe/linalg.hpp"

#include <random>

namespace sbethe {

LU lu_decompose(const Matrix& a) {
  if (a.rows() != a.cols()) throw std::domain_error("lu_decompose: square matrix required");
  const int n = a.rows();
  LU f{a, std::vector<int>(static_cast<size_t>(n)), 1, false};
  for (int i = 0; i < n; ++i) f.perm[static_cast<size_t>(i)] = i;

  for (int k = 0; k < n; ++k) {
    int piv = k;
    Real best = abs(f.lu.at(k, k));
    for (int i = k + 1; i < n; ++i) {
      Real m = abs(f.lu.at(i, k));
      if (m > best) {
        best = m;
        piv = i;
      }
    }
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(f.lu.at(piv, j), f.lu.at(k, j));
      std::swap(f.perm[static_cast<size_t>(piv)], f.perm[static_cast<size_t>(k)]);
      f.sign = -f.sign;
    }
    if (best.is_zero()) {
      f.singular = true;
      continue;
    }
    for (int i = k + 1; i < n; ++i) {
      Complex m = f.lu.at(i, k) / f.lu.at(k, k);
      f.lu.at(i, k) = m;
      for (int j = k + 1; j < n; ++j) f.lu.at(i, j) -= m * f.lu.at(k, j);
    }
  }
  return f;
}

std::vector<Complex> lu_solve(const LU& f, const std::vector<Complex>& rhs) {
  const int n = f.lu.rows();
  if (static_cast<int>(rhs.size()) != n) throw std::domain_error("lu_solve: size mismatch");
  if (f.singular) throw numeric_error("lu_solve: singular factorization");
  std::vector<Complex> x(static_cast<size_t>(n), Complex(f.lu.prec()));
  for (int i = 0; i < n; ++i) x[static_cast<size_t>(i)] = rhs[static_cast<size_t>(f.perm[static_cast<size_t>(i)])];
  for (int i = 1; i < n; ++i)
    for (int j = 0; j < i; ++j) x[static_cast<size_t>(i)] -= f.lu.at(i, j) * x[static_cast<size_t>(j)];
  for (int i = n - 1; i >= 0; --i) {
    for (int j = i + 1; j < n; ++j) x[static_cast<size_t>(i)] -= f.lu.at(i, j) * x[static_cast<size_t>(j)];
    x[static_cast<size_t>(i)] /= f.lu.at(i, i);
  }
  return x;
}

DetResult determinant(const Matrix& a) {
  LU f = lu_decompose(a);
  const mpfr_prec_t bits = a.prec();
  DetResult r{Complex(bits), Real(bits), Complex(bits), f.singular};
  if (f.singular) {
    mpfr_set_inf(r.log10_abs.raw(), -1);
    return r;
  }
  Complex det = Complex(Real::with_prec(bits, static_cast<long>(f.sign)), Real(bits));
  Real log10abs(bits);
  Complex phase = det;
  for (int k = 0; k < a.rows(); ++k) {
    const Complex& p = f.lu.at(k, k);
    det *= p;
    Real m = abs(p);
    log10abs += log10(m);
    phase *= p / m;
  }
  r.value = det;
  r.log10_abs = log10abs;
  r.phase = phase;
  return r;
}

MinEigResult min_abs_eigenvalue(const Matrix& a, int restarts, int max_iter,
                                unsigned long rng_seed) {
  if (a.rows() != a.cols()) throw std::domain_error("min_abs_eigenvalue: square matrix required");
  const int n = a.rows();
  const mpfr_prec_t bits = a.prec();
  LU f = lu_decompose(a);
  if (f.singular) {
    // exactly singular to working precision: report the precision floor
    MinEigResult r{pow10(bits, -static_cast<long>(bits * 0.30103)), true, 0};
    return r;
  }

  std::mt19937_64 rng(rng_seed);
  auto rnd = [&]() { return Real::with_prec(bits, ((rng() >> 11) * 0x1.0p-53) - 0.5); };

  const Real conv = pow10(bits, -static_cast<long>(bits * 0.30103) / 2);
  Real best(bits);
  bool have_best = false;
  int iters_total = 0;

  for (int attempt = 0; attempt < restarts; ++attempt) {
    std::vector<Complex> v(static_cast<size_t>(n), Complex(bits));
    for (auto& c : v) c = Complex(rnd(), rnd());

    Complex lambda(bits);
    Real prev_mod(bits);
    bool have_prev = false;
    for (int it = 0; it < max_iter; ++it) {
      ++iters_total;
      std::vector<Complex> w = lu_solve(f, v);
      Real nw(bits);
      for (const auto& c : w) nw = max(nw, abs(c));
      if (nw.is_zero()) break;
      for (auto& c : w) c /= nw;

      // Rayleigh quotient lambda = (v* A v)/(v* v) at the current iterate
      std::vector<Complex> av(static_cast<size_t>(n), Complex(bits));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) av[static_cast<size_t>(i)] += a.at(i, j) * w[static_cast<size_t>(j)];
      Complex num(bits), den(bits);
      for (int i = 0; i < n; ++i) {
        num += conj(w[static_cast<size_t>(i)]) * av[static_cast<size_t>(i)];
        den += conj(w[static_cast<size_t>(i)]) * w[static_cast<size_t>(i)];
      }
      lambda = num / den;
      Real mod = abs(lambda);
      v = std::move(w);
      if (have_prev) {
        Real diff = abs(mod - prev_mod);
        if (diff <= conv * max(mod, Real::with_prec(bits, 1e-300))) break;
      }
      prev_mod = mod;
      have_prev = true;
    }
    Real mod = abs(lambda);
    if (!have_best || mod < best) {
      best = mod;
      have_best = true;
    }
  }
  return MinEigResult{best, false, iters_total};
}

std::vector<Real> symtridiag_eigenvalues(const std::vector<Real>& diag,
                                         const std::vector<Real>& off) {
  const int n = static_cast<int>(diag.size());
  if (static_cast<int>(off.size()) != n - 1)
    throw std::domain_error("symtridiag_eigenvalues: off-diagonal size must be n-1");
  const mpfr_prec_t bits = diag.empty() ? Real::kDefaultBits : diag[0].prec();

  // Gershgorin bounds
  Real lo = diag[0], hi = diag[0];
  for (int i = 0; i < n; ++i) {
    Real radius(bits);
    if (i > 0) radius += abs(off[static_cast<size_t>(i - 1)]);
    if (i < n - 1) radius += abs(off[static_cast<size_t>(i)]);
    lo = min(lo, diag[static_cast<size_t>(i)] - radius);
    hi = max(hi, diag[static_cast<size_t>(i)] + radius);
  }
  Real span = hi - lo;
  if (span.is_zero()) return std::vector<Real>(static_cast<size_t>(n), diag[0]);
  const Real tiny = pow10(bits, -static_cast<long>(bits * 0.30103) * 2);

  // Sturm count: number of eigenvalues strictly below x
  auto count_below = [&](const Real& x) {
    int cnt = 0;
    Real q = diag[0] - x;
    if (q < Real(bits)) ++cnt;
    for (int i = 1; i < n; ++i) {
      Real denom = q;
      if (abs(denom) < tiny) denom = (denom.sign() < 0 ? -tiny : tiny);
      q = diag[static_cast<size_t>(i)] - x - off[static_cast<size_t>(i - 1)] * off[static_cast<size_t>(i - 1)] / denom;
      if (q < Real(bits)) ++cnt;
    }
    return cnt;
  };

  const long bisect_steps = static_cast<long>(bits) + 8;
  std::vector<Real> ev;
  ev.reserve(static_cast<size_t>(n));
  for (int k = 1; k <= n; ++k) {
    Real a = lo - span * Real::with_prec(bits, 1e-3);
    Real b = hi + span * Real::with_prec(bits, 1e-3);
    for (long step = 0; step < bisect_steps; ++step) {
      Real mid = (a + b) / 2L;
      if (count_below(mid) < k)
        a = mid;
      else
        b = mid;
      if (b - a <= Real(bits)) break;
    }
    ev.push_back((a + b) / 2L);
  }
  return ev;
}

}  // namespace sbethe
