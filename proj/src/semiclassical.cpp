#include "sbethe/semiclassical.hpp"

#include <algorithm>

#include "sbethe/roots.hpp"

namespace sbethe {

namespace {

Real cut_arg(const Complex& w, const Real& cut_angle) {
  // argument of w measured in (cut_angle - 2pi, cut_angle)
  const mpfr_prec_t bits = w.prec();
  Complex rot = w * polar(Real::with_prec(bits, 1L), -cut_angle);
  Real a = arg(-rot);  // principal, cut moved to the ray `cut_angle`
  return a + cut_angle - pi(bits);
}

bool on_cut(const Complex& w, const Real& cut_angle) {
  const mpfr_prec_t bits = w.prec();
  Complex rot = w * polar(Real::with_prec(bits, 1L), -cut_angle);
  // on the ray: positive real part, relatively negligible imaginary part
  if (rot.re().sign() <= 0) return false;
  return abs(rot.im()) < rot.re() * pow10(bits, -static_cast<long>(bits * 0.30103) + 6);
}

}  // namespace

Complex Antiderivative::eval(const Complex& z, const EvalHints* hints) const {
  Complex acc = poly_part.eval(z);
  auto offset_for = [&](const Complex& center) -> std::optional<Complex> {
    if (hints && hints->offset && hints->offset->first == center) return hints->offset->second;
    return std::nullopt;
  };
  for (const auto& pp : principal) {
    Complex w = z - pp.center;
    if (auto o = offset_for(pp.center)) w = *o;
    if (w.is_zero()) throw numeric_error("Antiderivative::eval at a pole");
    Complex winv = inv(w);
    Complex pw = winv;
    for (size_t j = 0; j < pp.coeffs.size(); ++j) {
      acc += pp.coeffs[j] * pw;
      pw *= winv;
    }
  }
  for (const auto& lt : logs) {
    Complex w = z - lt.center;
    if (auto o = offset_for(lt.center)) w = *o;
    if (w.is_zero()) throw numeric_error("Antiderivative::eval at a log center");
    if (hints && hints->polar && hints->polar->first == lt.center) {
      acc += lt.coeff * Complex(log(abs(w)), hints->polar->second);
      continue;
    }
    if (!lt.integer_coeff && on_cut(w, lt.cut_angle))
      throw numeric_error("Antiderivative::eval on a branch cut");
    Real a = lt.integer_coeff ? arg(w) : cut_arg(w, lt.cut_angle);
    acc += lt.coeff * Complex(log(abs(w)), a);
  }
  return acc;
}

Complex eval_theta(const SymbolFns& sym, const Complex& z) { return sym.theta.eval(z); }
Complex eval_theta_hat(const SymbolFns& sym, const Complex& z) { return sym.theta_hat.eval(z); }

namespace {

struct RootCluster {
  Complex center;
  int multiplicity;
};

std::vector<RootCluster> cluster_roots(const std::vector<Complex>& roots, const Real& tol) {
  std::vector<RootCluster> out;
  std::vector<bool> used(roots.size(), false);
  for (size_t i = 0; i < roots.size(); ++i) {
    if (used[i]) continue;
    Complex sum = roots[i];
    int count = 1;
    used[i] = true;
    for (size_t j = i + 1; j < roots.size(); ++j) {
      if (used[j]) continue;
      if (abs(roots[j] - roots[i]) < tol) {
        sum += roots[j];
        ++count;
        used[j] = true;
      }
    }
    out.push_back({sum / static_cast<long>(count), count});
  }
  return out;
}

// Antiderivative of a rational function N/B given B's root clusters: the
// polynomial part plus, per pole, integrated principal part and log term.
Antiderivative integrate_rational(const Polynomial& N, const Polynomial& B,
                                  const std::vector<RootCluster>& clusters,
                                  std::vector<std::vector<Complex>>* prime_principal_out,
                                  const PrecisionContext& ctx) {
  const mpfr_prec_t bits = N.prec();
  Antiderivative out;
  out.poly_part = poly_divmod(N, B).first.antiderivative();
  const Real int_tol = pow10(bits, -(ctx.digits() / 2));

  for (const auto& cl : clusters) {
    const int m = cl.multiplicity;
    // Taylor series of N and of S = B/(z-c)^m around c
    Polynomial Nc = N.shift(cl.center);
    Polynomial Bc = B.shift(cl.center);
    std::vector<Complex> S, t;
    for (int j = 0; j <= m; ++j) S.push_back(Bc.coeff(m + j));
    // series division t = Nc / S mod w^m
    for (int j = 0; j < m; ++j) {
      Complex v = Nc.coeff(j);
      for (int i = 0; i < j; ++i) v -= t[static_cast<size_t>(i)] * S[static_cast<size_t>(j - i)];
      t.push_back(v / S[0]);
    }
    // principal coefficients of N/B at c: e_k = t[m-k], k = 1..m
    if (prime_principal_out) {
      std::vector<Complex> e;
      for (int k = 1; k <= m; ++k) e.push_back(t[static_cast<size_t>(m - k)]);
      prime_principal_out->push_back(std::move(e));
    }
    PrincipalPart pp{cl.center, {}};
    for (int k = 2; k <= m; ++k) {
      // integral of e_k (z-c)^{-k} = e_k (z-c)^{1-k} / (1-k)
      Complex ek = t[static_cast<size_t>(m - k)];
      pp.coeffs.resize(static_cast<size_t>(k - 1), Complex(bits));
      pp.coeffs[static_cast<size_t>(k - 2)] = ek / static_cast<long>(1 - k);
    }
    Complex res = t[static_cast<size_t>(m - 1)];
    const Real pp_scale = max(N.max_coeff_abs(), Real::with_prec(bits, 1L));
    bool keep_pp = false;
    for (const auto& c : pp.coeffs)
      if (!(abs(c) < int_tol * pp_scale)) keep_pp = true;
    if (keep_pp) out.principal.push_back(std::move(pp));
    if (!(abs(res) < int_tol * max(N.max_coeff_abs(), Real::with_prec(bits, 1L)))) {
      LogTerm lt{cl.center, res, Real(bits), false, 0};
      Real rounded = round(res.re());
      if (abs(res.re() - rounded) + abs(res.im()) <
          pow10(bits, -(ctx.digits() - 5)) * max(Real::with_prec(bits, 1L), abs(res))) {
        lt.integer_coeff = true;
        lt.coeff_int = rounded.to_long();
      }
      out.logs.push_back(std::move(lt));
    }
  }
  return out;
}

}  // namespace

bool SemiclassicalType::degree_bound_ok(int n) const {
  if (a >= b) return true;
  Real lhs = Real::with_prec(bits, static_cast<long>(2 * n));
  Real rhs = Lambda.re() - Real::with_prec(bits, static_cast<long>(1 + b));
  return lhs > rhs;
}

SemiclassicalType build_type(const Polynomial& A_in, const Polynomial& B_in, bool allow_nonprime,
                             const PrecisionContext& ctx) {
  if (B_in.is_zero()) throw std::domain_error("build_type: B must not be identically zero");
  if (A_in.is_zero()) throw std::domain_error("build_type: A must not be identically zero");
  const mpfr_prec_t bits = ctx.bits();
  if (A_in.prec() != bits || B_in.prec() != bits)
    throw precision_mismatch("build_type: operand precision differs from context");

  SemiclassicalType t;
  t.bits = bits;
  t.digits = ctx.digits();
  Complex blead = B_in.leading();
  t.B = B_in.monic();
  t.A = A_in * inv(blead);
  t.a = t.A.degree();
  t.b = t.B.degree();
  t.d = std::max(t.a, t.b - 1);
  if (t.d < 1) throw unsupported_type("build_type: class number d = max(deg A, deg B - 1) must be >= 1");
  t.d_inf = t.a - t.b + 1;

  const Real coprime_tol = pow10(bits, -(ctx.digits() / 2));
  if (!allow_nonprime && t.b >= 1 && !poly_gcd_coprime_check(t.A, t.B, coprime_tol))
    throw numeric_error("build_type: A and B share a (near-)common factor");

  // finite-rank detection: A = k B' with a positive integer k
  if (t.b >= 1 && t.a == t.b - 1) {
    Polynomial Bp = t.B.derivative();
    Complex ratio = t.A.leading() / Bp.leading();
    Polynomial diff = t.A - Bp * ratio;
    if (ratio.im().is_zero() || abs(ratio.im()) < coprime_tol) {
      Real k = round(ratio.re());
      if (k >= 1.0 && abs(ratio.re() - k) < coprime_tol &&
          diff.max_coeff_abs() < coprime_tol * t.A.max_coeff_abs()) {
        t.finite_rank = true;
        t.finite_rank_k = k.to_long();
      }
    }
  }

  // pole data at the finite zeros of B
  std::vector<RootCluster> clusters;
  if (t.b >= 1) {
    std::vector<Complex> roots = poly_roots(t.B);
    Real scale = Real::with_prec(bits, 1L);
    for (const auto& r : roots) scale = max(scale, abs(r));
    clusters = cluster_roots(roots, scale * pow10(bits, -(ctx.digits() / 2)));
  }

  Polynomial N = -(t.A + t.B.derivative());
  std::vector<std::vector<Complex>> prime_principal;
  t.sym.theta = integrate_rational(N, t.B, clusters, &prime_principal, ctx);
  t.sym.theta_hat = integrate_rational(t.A, t.B, clusters, nullptr, ctx);
  t.sym.theta_prime = RationalFn{N, t.B};
  t.sym.theta_hat_prime = RationalFn{t.A, t.B};

  const Real zero_tol = pow10(bits, -(ctx.digits() / 2));
  const Real half = Real::with_prec(bits, 0.5);
  Complex residue_sum(bits);
  for (size_t ci = 0; ci < clusters.size(); ++ci) {
    const auto& cl = clusters[ci];
    const auto& e = prime_principal[ci];  // e[k-1] multiplies (z-c)^{-k}
    PoleInfo p;
    p.location = cl.center;
    p.b_multiplicity = cl.multiplicity;
    int order = 0;
    for (int k = cl.multiplicity; k >= 1; --k) {
      if (!(abs(e[static_cast<size_t>(k - 1)]) <
            zero_tol * max(N.max_coeff_abs(), Real::with_prec(bits, 1L)))) {
        order = k;
        break;
      }
    }
    p.order = order;
    p.leading = order >= 1 ? e[static_cast<size_t>(order - 1)] : Complex(bits);
    p.residue = e[0];
    residue_sum += p.residue;
    if (order >= 2)
      p.kind = PoleKind::higher_order;
    else if (order == 1)
      p.kind = (p.residue.re() > -half) ? PoleKind::end_pole : PoleKind::flag_pole;
    else
      p.kind = PoleKind::hard_edge;
    t.poles.push_back(std::move(p));
  }
  t.Lambda = residue_sum;

  if (t.d_inf >= 1) {
    PoleInfo p;
    p.at_infinity = true;
    p.order = t.d_inf + 1;
    p.leading = t.A.leading();  // theta' dz = lc(A) zeta^{-d_inf-1} (1+...) dzeta
    p.residue = -t.Lambda;
    p.kind = PoleKind::higher_order;
    t.pole_inf = std::move(p);
  } else if (!(abs(t.Lambda) < zero_tol)) {
    PoleInfo p;
    p.at_infinity = true;
    p.order = 1;
    p.residue = -t.Lambda;
    p.leading = p.residue;
    p.kind = (p.residue.re() > -half) ? PoleKind::end_pole : PoleKind::flag_pole;
    t.pole_inf = std::move(p);
  }

  // cut layout: along the escape direction when theta' dz has a higher-order
  // pole at infinity, otherwise outward from the root centroid
  Real esc_angle(bits);
  bool have_esc = false;
  if (t.d_inf >= 1) {
    Real argT = arg(t.A.leading());
    Real dpi = pi(bits) / static_cast<long>(t.d_inf);
    esc_angle = -(argT / static_cast<long>(t.d_inf)) + dpi * static_cast<long>(2 * t.d_inf - 1);
    have_esc = true;
  }
  Complex centroid(bits);
  if (!clusters.empty()) {
    for (const auto& cl : clusters) centroid += cl.center;
    centroid /= static_cast<long>(clusters.size());
  }
  auto assign_cuts = [&](Antiderivative& anti) {
    for (auto& lt : anti.logs) {
      if (have_esc) {
        lt.cut_angle = esc_angle;
      } else {
        Complex off = lt.center - centroid;
        if (abs(off) > zero_tol) {
          lt.cut_angle = arg(off);
        } else {
          // lone multiple root: cut along its first ascent direction
          for (const auto& p : t.poles)
            if (!p.at_infinity && p.order >= 2 && abs(p.location - lt.center) < zero_tol) {
              Real argT = arg(p.leading);
              int dc = p.order - 1;
              lt.cut_angle = argT / static_cast<long>(dc) + pi(bits) / static_cast<long>(dc);
            }
        }
      }
      // real-normalize the term along the anti-cut ray
      Real ref(bits);
      if (lt.integer_coeff) {
        // plain-arg evaluation: reference angle wrapped to (-pi, pi]
        Real x = lt.cut_angle + pi(bits);
        Real two_pi = pi(bits) * 2L;
        Real k = -floor(-((x - pi(bits)) / two_pi));  // ceil
        ref = x - two_pi * k;
      } else {
        ref = lt.cut_angle - pi(bits);
      }
      anti.poly_part += Polynomial::constant(Complex(Real(bits), -ref) * lt.coeff);
    }
  };
  assign_cuts(t.sym.theta);
  assign_cuts(t.sym.theta_hat);

  // theta_hat anchored at 0 when regular there
  bool zero_is_pole = false;
  for (const auto& cl : clusters)
    if (abs(cl.center) < zero_tol) zero_is_pole = true;
  if (!zero_is_pole) {
    try {
      Complex at0 = t.sym.theta_hat.eval(Complex(bits));
      t.sym.theta_hat.poly_part -= Polynomial::constant(at0);
    } catch (const numeric_error&) {
      // 0 sits on a branch cut: keep the lowest-order normalization
    }
  }

  // the genuinely Pochhammer case is out of scope
  if (t.a < t.b && !t.finite_rank) {
    bool all_simple = true;
    for (const auto& cl : clusters)
      if (cl.multiplicity >= 2) all_simple = false;
    if (all_simple) {
      for (const auto& p : t.poles)
        if (p.kind == PoleKind::flag_pole) {
          Real rr = round(p.residue.re());
          bool neg_int = abs(p.residue.re() - rr) + abs(p.residue.im()) < zero_tol && rr < 0.0;
          if (!neg_int)
            throw unsupported_type(
                "build_type: deg A < deg B with all-simple-root B and a non-integer "
                "flag-pole residue: unsupported contour class");
        }
    }
  }

  return t;
}

std::vector<Real> steepest_directions(const SemiclassicalType& t, const PoleInfo& pole) {
  if (pole.order < 2)
    throw std::domain_error("steepest_directions: pole of order >= 2 required");
  const mpfr_prec_t bits = t.bits;
  const int dc = pole.order - 1;
  // theta ~ -(T/dc) zeta^{-dc}: Re theta -> -inf steepest where
  // arg zeta = arg T / dc + 2 pi k / dc
  Real base = arg(pole.leading) / static_cast<long>(dc);
  Real step = pi(bits) / static_cast<long>(dc);
  std::vector<Real> out;
  out.reserve(static_cast<size_t>(2 * dc));
  for (int l = 0; l < 2 * dc; ++l) out.push_back(base + step * static_cast<long>(l));
  return out;
}

Real infinity_ray_angle(const SemiclassicalType& t, int m) {
  if (t.d_inf < 1) throw std::domain_error("infinity_ray_angle: no higher-order pole at infinity");
  // z-plane angle: arg z = -arg zeta; descent rays are even m
  Real base = -(arg(t.A.leading()) / static_cast<long>(t.d_inf));
  Real step = pi(t.bits) / static_cast<long>(t.d_inf);
  return base + step * static_cast<long>(m);
}

}  // namespace sbethe
