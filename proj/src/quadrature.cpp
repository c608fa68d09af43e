#include "sbethe/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace sbethe {

namespace {

GLRule compute_gl(int order, mpfr_prec_t bits) {
  const mpfr_prec_t work = bits + 64;
  GLRule rule;
  rule.nodes.reserve(static_cast<size_t>(order));
  rule.weights.reserve(static_cast<size_t>(order));
  const Real one = Real::with_prec(work, 1L);
  const Real two = Real::with_prec(work, 2L);

  for (int i = 0; i < order; ++i) {
    double guess = std::cos(3.14159265358979323846 * (i + 0.75) / (order + 0.5));
    Real x = Real::with_prec(work, guess);
    Real dp(work);
    for (int it = 0; it < 60; ++it) {
      // Legendre recurrence for P_order(x), P'_order(x)
      Real p0 = one, p1 = x;
      for (int k = 2; k <= order; ++k) {
        Real p2 = (x * p1 * static_cast<long>(2 * k - 1) - p0 * static_cast<long>(k - 1)) /
                  static_cast<long>(k);
        p0 = p1;
        p1 = p2;
      }
      dp = (x * p1 - p0) * static_cast<long>(order) / (x * x - one);
      Real step = p1 / dp;
      x -= step;
      if (abs(step) < pow10(work, -static_cast<long>(work * 0.30103) + 2)) break;
    }
    {
      // recompute derivative at the converged node for the weight
      Real p0 = one, p1 = x;
      for (int k = 2; k <= order; ++k) {
        Real p2 = (x * p1 * static_cast<long>(2 * k - 1) - p0 * static_cast<long>(k - 1)) /
                  static_cast<long>(k);
        p0 = p1;
        p1 = p2;
      }
      dp = (x * p1 - p0) * static_cast<long>(order) / (x * x - one);
    }
    Real w = two / ((one - x * x) * dp * dp);
    Real xr(bits), wr(bits);
    mpfr_set(xr.raw(), x.raw(), MPFR_RNDN);
    mpfr_set(wr.raw(), w.raw(), MPFR_RNDN);
    rule.nodes.push_back(std::move(xr));
    rule.weights.push_back(std::move(wr));
  }
  return rule;
}

std::map<std::pair<int, mpfr_prec_t>, GLRule> g_gl_cache;
std::mutex g_gl_mutex;

}  // namespace

const GLRule& gl_rule(int order, mpfr_prec_t bits) {
  std::lock_guard<std::mutex> lock(g_gl_mutex);
  auto key = std::make_pair(order, bits);
  auto it = g_gl_cache.find(key);
  if (it != g_gl_cache.end()) return it->second;
  return g_gl_cache.emplace(key, compute_gl(order, bits)).first->second;
}

namespace {

void gl_panel(const VecIntegrand& f, size_t dim, const Real& a, const Real& b, int order,
              mpfr_prec_t bits, std::vector<Complex>& out, std::vector<Complex>& scratch) {
  const GLRule& rule = gl_rule(order, bits);
  const Real half = Real::with_prec(bits, 0.5);
  Real mid = (a + b) * half;
  Real rad = (b - a) * half;
  for (auto& v : out) v = Complex(bits);
  for (size_t i = 0; i < rule.nodes.size(); ++i) {
    Real t = mid + rad * rule.nodes[i];
    f(t, scratch);
    for (size_t k = 0; k < dim; ++k) {
      Complex term = scratch[k] * rule.weights[i];
      out[k] += term;
    }
  }
  for (auto& v : out) v *= rad;
}

}  // namespace

VecQuadResult adaptive_gl_01(const VecIntegrand& f, size_t dim, const Real& abs_tol,
                             mpfr_prec_t bits, int max_depth, long max_panels) {
  struct Panel {
    Real a, b;
    int depth;
  };
  VecQuadResult res;
  res.values.assign(dim, Complex(bits));
  res.abs_error_estimate = Real(bits);

  std::vector<Panel> stack;
  stack.push_back({Real(bits), Real::with_prec(bits, 1L), 0});
  std::vector<Complex> lo(dim, Complex(bits)), hi(dim, Complex(bits)), scratch(dim, Complex(bits));

  while (!stack.empty()) {
    Panel p = std::move(stack.back());
    stack.pop_back();
    gl_panel(f, dim, p.a, p.b, 32, bits, lo, scratch);
    gl_panel(f, dim, p.a, p.b, 64, bits, hi, scratch);
    Real err(bits);
    for (size_t k = 0; k < dim; ++k) err = max(err, abs(hi[k] - lo[k]));
    if (!err.is_finite()) throw numeric_error("adaptive_gl_01: non-finite integrand on path");
    Real budget = abs_tol * (p.b - p.a);
    if (err <= budget || p.depth >= max_depth) {
      if (p.depth >= max_depth && !(err <= budget * 64L))
        throw convergence_error("adaptive_gl_01: panel bisection depth exhausted");
      for (size_t k = 0; k < dim; ++k) res.values[k] += hi[k];
      res.abs_error_estimate += err;
      ++res.panels;
      if (res.panels > max_panels)
        throw convergence_error("adaptive_gl_01: panel budget exhausted");
      continue;
    }
    Real mid = (p.a + p.b) * Real::with_prec(bits, 0.5);
    stack.push_back({p.a, mid, p.depth + 1});
    stack.push_back({mid, p.b, p.depth + 1});
  }
  return res;
}

VecQuadResult tanh_sinh_01(const TsIntegrand& f, size_t dim, const Real& abs_tol,
                           mpfr_prec_t bits, int max_level) {
  const Real half_pi = pi(bits) * Real::with_prec(bits, 0.5);
  const Real one = Real::with_prec(bits, 1L);
  const Real quarter = Real::with_prec(bits, 0.25);

  // node at u: x = (1 + tanh(s))/2 with s = (pi/2) sinh u;
  // offset from the near endpoint delta = 1/(1 + e^{2|s|}), weight
  // (pi/4) cosh u / cosh^2 s.
  auto eval_at = [&](const Real& u, std::vector<Complex>& scratch) {
    Real s = half_pi * sinh(u);
    bool from_right = s.sign() > 0;
    Real e2 = exp(abs(s) * 2L);
    Real delta = one / (one + e2);
    Real ch = cosh(s);
    Real w = quarter * pi(bits) * cosh(u) / (ch * ch);
    f(delta, from_right, scratch);
    for (auto& v : scratch) v *= w;
  };

  // |u| beyond which the offset underflows the interesting range
  const double digits_work = static_cast<double>(bits) * 0.30103;
  const double s_max = 0.5 * (3.2 * digits_work * 2.302585);
  const double u_max_d = std::asinh(2.0 * s_max / 3.14159265358979323846);

  std::vector<Complex> sum(dim, Complex(bits)), scratch(dim, Complex(bits));
  Real h = Real::with_prec(bits, 0.5);
  const Real u_max = Real::with_prec(bits, u_max_d);
  long evals = 0;

  // level 0: coarse grid including u = 0
  {
    eval_at(Real(bits), scratch);
    for (size_t k = 0; k < dim; ++k) sum[k] = scratch[k];
    for (long j = 1;; ++j) {
      Real u = h * (2L * j);
      if (u > u_max) break;
      eval_at(u, scratch);
      for (size_t k = 0; k < dim; ++k) sum[k] += scratch[k];
      eval_at(-u, scratch);
      for (size_t k = 0; k < dim; ++k) sum[k] += scratch[k];
      ++evals;
    }
  }
  std::vector<Complex> prev(dim, Complex(bits));
  Real err(bits);
  for (int level = 0; level < max_level; ++level) {
    // refine: add midpoints at odd multiples of h
    for (long j = 1;; j += 2) {
      Real u = h * j;
      if (u > u_max) break;
      eval_at(u, scratch);
      for (size_t k = 0; k < dim; ++k) sum[k] += scratch[k];
      eval_at(-u, scratch);
      for (size_t k = 0; k < dim; ++k) sum[k] += scratch[k];
      ++evals;
    }
    std::vector<Complex> cur(dim, Complex(bits));
    for (size_t k = 0; k < dim; ++k) cur[k] = sum[k] * h;
    if (level > 0) {
      err = Real(bits);
      for (size_t k = 0; k < dim; ++k) err = max(err, abs(cur[k] - prev[k]));
      if (!err.is_finite()) throw numeric_error("tanh_sinh_01: non-finite integrand");
      if (err <= abs_tol) {
        VecQuadResult r{std::move(cur), err, evals};
        return r;
      }
    }
    prev = std::move(cur);
    h *= Real::with_prec(bits, 0.5);
  }
  throw convergence_error("tanh_sinh_01: level budget exhausted");
}

}  // namespace sbethe
