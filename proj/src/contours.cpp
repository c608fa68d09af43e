#include "sbethe/contours.hpp"

#include <algorithm>
#include <cmath>

namespace sbethe {

namespace {

Real rr(mpfr_prec_t bits, double v) { return Real::with_prec(bits, v); }
Complex unit(mpfr_prec_t bits, const Real& angle) { return polar(Real::with_prec(bits, 1L), angle); }

}  // namespace

Segment Segment::line_between(const Complex& a, const Complex& b) {
  Segment s;
  s.type = Type::line;
  s.p0 = a;
  s.p1 = b;
  return s;
}

Segment Segment::arc_around(const Complex& c, const Real& r, const Real& ang0, const Real& ang1) {
  Segment s;
  s.type = Type::arc;
  s.center = c;
  s.radius = r;
  s.a0 = ang0;
  s.a1 = ang1;
  return s;
}

SegPoint seg_point(const Segment& s, const Real& t) {
  const mpfr_prec_t bits = t.prec();
  SegPoint out;
  switch (s.type) {
    case Segment::Type::line: {
      Complex d = s.p1 - s.p0;
      out.z = s.p0 + d * t;
      out.dz = d;
      if (s.end_center0) out.offset = {{*s.end_center0, (s.p0 - *s.end_center0) + d * t}};
      break;
    }
    case Segment::Type::arc: {
      Real phi = s.a0 + (s.a1 - s.a0) * t;
      Complex e = unit(bits, phi);
      out.z = s.center + e * s.radius;
      out.dz = Complex(-e.im(), e.re()) * (s.radius * (s.a1 - s.a0));
      out.polar = {{s.center, phi}};
      break;
    }
    case Segment::Type::petal: {
      Real u = s.t_lo + (s.t_hi - s.t_lo) * t;
      Real pu = pi(bits) * u;
      Real sn = sin(pu), cs = cos(pu);
      Real rho = s.rho_max * pow(sn, s.kappa);
      Real drho = s.rho_max * s.kappa * pi(bits) * cs * pow(sn, s.kappa - rr(bits, 1.0));
      Real phi = s.a0 + (s.a1 - s.a0) * u;
      Real dphi = s.a1 - s.a0;
      Complex e = unit(bits, phi);
      out.z = s.center + e * rho;
      Complex tangent = Complex(drho, rho * dphi);  // (rho' + i rho phi') in the rotated frame
      out.dz = tangent * e * (s.t_hi - s.t_lo);
      out.polar = {{s.center, phi}};
      break;
    }
    case Segment::Type::inv_tail_in: {
      // from infinity (t=0) to p (t=1) along -dir
      Real invt = rr(bits, 1.0) / t;
      out.z = s.p0 + s.dir * (s.len * (invt - rr(bits, 1.0)));
      out.dz = -s.dir * (s.len * invt * invt);
      break;
    }
    case Segment::Type::inv_tail_out: {
      Real om = rr(bits, 1.0) - t;
      Real invt = rr(bits, 1.0) / om;
      out.z = s.p0 + s.dir * (s.len * (invt - rr(bits, 1.0)));
      out.dz = s.dir * (s.len * invt * invt);
      break;
    }
  }
  return out;
}

namespace {

// tanh-sinh variant: exact offset `delta` from the singular parameter end
SegPoint seg_point_ts(const Segment& s, const Real& delta, bool from_right) {
  const mpfr_prec_t bits = delta.prec();
  SegPoint out;
  switch (s.type) {
    case Segment::Type::line: {
      Complex d = s.p1 - s.p0;
      if (!from_right) {
        out.z = s.p0 + d * delta;
        out.dz = d;
        if (s.end_center0) out.offset = {{*s.end_center0, (s.p0 - *s.end_center0) + d * delta}};
      } else {
        out.z = s.p1 - d * delta;
        out.dz = d;
        if (s.end_center1) out.offset = {{*s.end_center1, (s.p1 - *s.end_center1) - d * delta}};
      }
      return out;
    }
    case Segment::Type::inv_tail_in: {
      Real t = from_right ? rr(bits, 1.0) - delta : delta;
      return seg_point(s, t);
    }
    case Segment::Type::inv_tail_out: {
      if (from_right) {
        Real invt = rr(bits, 1.0) / delta;
        out.z = s.p0 + s.dir * (s.len * (invt - rr(bits, 1.0)));
        out.dz = s.dir * (s.len * invt * invt);
        return out;
      }
      return seg_point(s, delta);
    }
    default:
      return seg_point(s, from_right ? rr(bits, 1.0) - delta : delta);
  }
}

}  // namespace

Contour Contour::reversed() const {
  Contour r;
  r.kind = kind;
  for (auto it = segs.rbegin(); it != segs.rend(); ++it) {
    Segment s = *it;
    switch (s.type) {
      case Segment::Type::line:
        std::swap(s.p0, s.p1);
        std::swap(s.end_center0, s.end_center1);
        break;
      case Segment::Type::arc:
        std::swap(s.a0, s.a1);
        break;
      case Segment::Type::petal:
        // the petal map is affine in its parameter window; swapping the
        // window endpoints reverses travel
        std::swap(s.t_lo, s.t_hi);
        break;
      case Segment::Type::inv_tail_in:
        s.type = Segment::Type::inv_tail_out;
        break;
      case Segment::Type::inv_tail_out:
        s.type = Segment::Type::inv_tail_in;
        break;
    }
    r.segs.push_back(std::move(s));
  }
  return r;
}

std::vector<std::pair<double, double>> Contour::polyline(int per_seg) const {
  std::vector<std::pair<double, double>> pts;
  for (const auto& s : segs) {
    int n = per_seg;
    if (s.type == Segment::Type::line) n = std::max(2, per_seg / 8);
    if (s.type == Segment::Type::petal) n = per_seg * 4;
    mpfr_prec_t bits = Real::kDefaultBits;
    switch (s.type) {
      case Segment::Type::line: bits = s.p0.prec(); break;
      case Segment::Type::arc: bits = s.radius.prec(); break;
      case Segment::Type::petal: bits = s.rho_max.prec(); break;
      default: bits = s.len.prec(); break;
    }
    for (int i = 0; i <= n; ++i) {
      double td = static_cast<double>(i) / n;
      // keep tails finite for geometry work
      if (s.type == Segment::Type::inv_tail_in) td = 0.05 + 0.95 * td;
      if (s.type == Segment::Type::inv_tail_out) td = 0.95 * td;
      if (s.type == Segment::Type::petal) td = std::min(1.0 - 1e-9, std::max(1e-9, td));
      SegPoint mp = seg_point(s, Real::with_prec(bits, td));
      pts.emplace_back(mp.z.re().to_double(), mp.z.im().to_double());
    }
  }
  return pts;
}

int intersection_number(const Contour& a, const Contour& b) {
  auto pa = a.polyline(96);
  auto pb = b.polyline(96);
  auto cross = [](double ux, double uy, double vx, double vy) { return ux * vy - uy * vx; };
  int total = 0;
  for (size_t i = 0; i + 1 < pa.size(); ++i) {
    double ax = pa[i].first, ay = pa[i].second;
    double bx = pa[i + 1].first, by = pa[i + 1].second;
    if (ax == bx && ay == by) continue;
    for (size_t j = 0; j + 1 < pb.size(); ++j) {
      double cx = pb[j].first, cy = pb[j].second;
      double dx = pb[j + 1].first, dy = pb[j + 1].second;
      if (cx == dx && cy == dy) continue;
      double d1 = cross(bx - ax, by - ay, cx - ax, cy - ay);
      double d2 = cross(bx - ax, by - ay, dx - ax, dy - ay);
      double d3 = cross(dx - cx, dy - cy, ax - cx, ay - cy);
      double d4 = cross(dx - cx, dy - cy, bx - cx, by - cy);
      if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
          ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
        double s = cross(bx - ax, by - ay, dx - cx, dy - cy);
        total += (s > 0) ? 1 : -1;
      }
    }
  }
  return total;
}

double polyline_distance(const Contour& c, const std::vector<Complex>& pts) {
  auto pl = c.polyline(96);
  double best = 1e300;
  for (const auto& p : pts) {
    double px = p.re().to_double(), py = p.im().to_double();
    for (size_t i = 0; i + 1 < pl.size(); ++i) {
      double ax = pl[i].first, ay = pl[i].second;
      double bx = pl[i + 1].first, by = pl[i + 1].second;
      double vx = bx - ax, vy = by - ay;
      double L2 = vx * vx + vy * vy;
      double tt = L2 > 0 ? ((px - ax) * vx + (py - ay) * vy) / L2 : 0.0;
      tt = std::max(0.0, std::min(1.0, tt));
      double qx = ax + tt * vx - px, qy = ay + tt * vy - py;
      best = std::min(best, std::sqrt(qx * qx + qy * qy));
    }
  }
  return best;
}

Real ray_truncation_radius(const SemiclassicalType& t, const Complex& anchor, const Real& angle,
                           int theta_sign, double extra_digits) {
  const mpfr_prec_t bits = t.bits;
  const double target = (t.digits + 10 + 30 + extra_digits) * 2.302585092994046;
  Complex e = unit(bits, angle);
  auto decayed = [&](double R) {
    Complex z = anchor + e * rr(bits, R);
    Real re = eval_theta(t.sym, z).re();
    double v = re.to_double() * theta_sign;
    return v <= -target;
  };
  double hi = 1.0;
  int guard = 0;
  while (!decayed(hi)) {
    hi *= 1.5;
    if (++guard > 120) throw numeric_error("ray_truncation_radius: no decay along ray");
  }
  double lo = hi / 1.5;
  for (int i = 0; i < 50; ++i) {
    double mid = 0.5 * (lo + hi);
    if (decayed(mid))
      hi = mid;
    else
      lo = mid;
  }
  return rr(bits, hi);
}

// ---------------------------------------------------------------------------
// integration engine
// ---------------------------------------------------------------------------

namespace {

// fills out[] given z and the common factor (already includes dz, e^{s theta},
// num, den, pole factors)
using NodeFill = std::function<void(std::vector<Complex>&, const Complex&, const Complex&)>;

Complex common_factor(const SegPoint& mp, const SymbolFns* sym, int theta_sign,
                      const Polynomial* num, const Polynomial* den,
                      const std::optional<std::pair<Complex, int>>& pole_factor) {
  Complex f = mp.dz;
  if (sym) {
    EvalHints hints;
    hints.polar = mp.polar;
    hints.offset = mp.offset;
    Complex th = sym->theta.eval(mp.z, &hints);
    f *= exp(theta_sign >= 0 ? th : -th);
  }
  if (num) f *= num->eval(mp.z);
  if (den) {
    Complex dv = den->eval(mp.z);
    if (dv.is_zero()) throw numeric_error("contour integrand: pole of denominator on path");
    f /= dv;
  }
  if (pole_factor) {
    Complex w = mp.z - pole_factor->first;
    if (w.is_zero()) throw numeric_error("contour integrand: pole factor on path");
    f /= pow_si(w, pole_factor->second);
  }
  if (!f.is_finite()) throw numeric_error("contour integrand: non-finite value on path");
  return f;
}

VecQuadResult integrate_contour(const Contour& C, const SymbolFns* sym, int theta_sign,
                                const Polynomial* num, const Polynomial* den,
                                const std::optional<std::pair<Complex, int>>& pole_factor,
                                const NodeFill& fill, size_t dim, const Real& rel_tol,
                                mpfr_prec_t bits) {
  // coarse magnitude estimate fixes the absolute budget
  Real scale = rr(bits, 1.0);
  {
    std::vector<Complex> acc(dim, Complex(bits)), scratch(dim, Complex(bits));
    const GLRule& rule = gl_rule(16, bits);
    for (const auto& seg : C.segs) {
      for (auto& v : scratch) v = Complex(bits);
      for (size_t i = 0; i < rule.nodes.size(); ++i) {
        Real tt = (rule.nodes[i] + rr(bits, 1.0)) * rr(bits, 0.5);
        if (seg.type == Segment::Type::inv_tail_in) tt = rr(bits, 0.02) + tt * rr(bits, 0.98);
        if (seg.type == Segment::Type::inv_tail_out) tt = tt * rr(bits, 0.98);
        SegPoint mp = seg_point(seg, tt);
        Complex f;
        try {
          f = common_factor(mp, sym, theta_sign, num, den, pole_factor);
        } catch (const numeric_error&) {
          continue;  // coarse pass only estimates scale
        }
        fill(scratch, mp.z, f * rule.weights[i]);
      }
      for (size_t k = 0; k < dim; ++k) scale = max(scale, abs(scratch[k]) * rr(bits, 0.5));
    }
  }
  Real abs_tol = rel_tol * scale / static_cast<long>(C.segs.size());

  VecQuadResult total;
  total.values.assign(dim, Complex(bits));
  total.abs_error_estimate = Real(bits);
  for (const auto& seg : C.segs) {
    VecQuadResult part;
    if (seg.ts) {
      TsIntegrand f = [&](const Real& delta, bool from_right, std::vector<Complex>& out) {
        for (auto& v : out) v = Complex(bits);
        SegPoint mp = seg_point_ts(seg, delta, from_right);
        Complex fac = common_factor(mp, sym, theta_sign, num, den, pole_factor);
        fill(out, mp.z, fac);
      };
      part = tanh_sinh_01(f, dim, abs_tol, bits);
    } else {
      VecIntegrand f = [&](const Real& t, std::vector<Complex>& out) {
        for (auto& v : out) v = Complex(bits);
        SegPoint mp = seg_point(seg, t);
        Complex fac = common_factor(mp, sym, theta_sign, num, den, pole_factor);
        fill(out, mp.z, fac);
      };
      part = adaptive_gl_01(f, dim, abs_tol, bits);
    }
    for (size_t k = 0; k < dim; ++k) total.values[k] += part.values[k];
    total.abs_error_estimate += part.abs_error_estimate;
    total.panels += part.panels;
  }
  return total;
}

}  // namespace

QuadratureReport integrate_weighted(const Contour& c, const Integrand& f, const SymbolFns& sym,
                                    const Real& tol, mpfr_prec_t bits) {
  if (f.num.is_zero()) return QuadratureReport{Complex(bits), Real(bits), 0};
  NodeFill fill = [](std::vector<Complex>& out, const Complex&, const Complex& fac) {
    out[0] += fac;
  };
  VecQuadResult r = integrate_contour(c, &sym, f.theta_sign, &f.num,
                                      f.den ? &*f.den : nullptr, f.pole_factor, fill, 1, tol, bits);
  return QuadratureReport{r.values[0], r.abs_error_estimate, r.panels};
}

std::vector<Complex> contour_monomial_integrals(const Contour& c, const SymbolFns& sym, int k_max,
                                                const Real& tol, mpfr_prec_t bits,
                                                const std::optional<std::pair<Complex, int>>& pole_factor) {
  NodeFill fill = [k_max](std::vector<Complex>& out, const Complex& z, const Complex& fac) {
    Complex p = fac;
    out[0] += p;
    for (int k = 1; k <= k_max; ++k) {
      p *= z;
      out[static_cast<size_t>(k)] += p;
    }
  };
  VecQuadResult r = integrate_contour(c, &sym, +1, nullptr, nullptr, pole_factor, fill,
                                      static_cast<size_t>(k_max) + 1, tol, bits);
  return std::move(r.values);
}

std::vector<Complex> moments(const WeightedContourSet& wcs, const SymbolFns& sym, int k_max,
                             const Real& tol, mpfr_prec_t bits) {
  if (wcs.s.size() != wcs.contours.size())
    throw std::logic_error("moments: weights s are not set");
  {
    std::lock_guard<std::mutex> lock(*wcs.cache_mutex);
    if (wcs.raw_moments.size() != wcs.contours.size())
      wcs.raw_moments.assign(wcs.contours.size(), {});
  }
  for (size_t j = 0; j < wcs.contours.size(); ++j) {
    bool need = false;
    {
      std::lock_guard<std::mutex> lock(*wcs.cache_mutex);
      need = static_cast<int>(wcs.raw_moments[j].size()) < k_max + 1;
    }
    if (need) {
      auto vals = contour_monomial_integrals(wcs.contours[j], sym, k_max, tol, bits);
      std::lock_guard<std::mutex> lock(*wcs.cache_mutex);
      if (wcs.raw_moments[j].size() < vals.size()) wcs.raw_moments[j] = std::move(vals);
    }
  }
  std::vector<Complex> mu(static_cast<size_t>(k_max) + 1, Complex(bits));
  std::lock_guard<std::mutex> lock(*wcs.cache_mutex);
  for (size_t j = 0; j < wcs.contours.size(); ++j)
    for (int k = 0; k <= k_max; ++k)
      mu[static_cast<size_t>(k)] += wcs.s[j] * wcs.raw_moments[j][static_cast<size_t>(k)];
  return mu;
}

Complex apply_functional(const WeightedContourSet& wcs, const SymbolFns& sym,
                         const Polynomial& p, const Real& tol, mpfr_prec_t bits) {
  if (p.is_zero()) return Complex(bits);
  std::vector<Complex> mu = moments(wcs, sym, p.degree(), tol, bits);
  Complex acc(bits);
  for (int k = 0; k <= p.degree(); ++k) acc += p.coeff(k) * mu[static_cast<size_t>(k)];
  return acc;
}

// ---------------------------------------------------------------------------
// contour construction
// ---------------------------------------------------------------------------

namespace {

bool near_integer(const Complex& v, double tol, long* out = nullptr) {
  Real r = round(v.re());
  bool ok = (abs(v.re() - r) + abs(v.im())).to_double() < tol;
  if (ok && out) *out = r.to_long();
  return ok;
}

Contour make_lasso(const SemiclassicalType& t, const Complex& c, const Real& anchor_angle,
                   const Real& R, const Real& rho, ContourKind kind) {
  // Counterclockwise loop anchored on the ray `anchor_angle`, which carries
  // the branch cut of the enclosed pole.  The arc's continued angle runs in
  // the cut determination window (anchor - 2pi, anchor), so the lasso
  // evaluates continuously and the monodromy sits between the two legs.
  const mpfr_prec_t bits = t.bits;
  Contour L;
  L.kind = kind;
  Real ain = anchor_angle + rr(bits, 0.0617) - pi(bits) * 2L;
  Real aout = anchor_angle - rr(bits, 0.0833);
  L.segs.push_back(Segment::line_between(c + unit(bits, ain) * R, c + unit(bits, ain) * rho));
  L.segs.push_back(Segment::arc_around(c, rho, ain, aout));
  L.segs.push_back(Segment::line_between(c + unit(bits, aout) * rho, c + unit(bits, aout) * R));
  return L;
}

Contour make_circle(const Complex& c, const Real& rho) {
  Contour C;
  C.kind = ContourKind::circle;
  const mpfr_prec_t bits = rho.prec();
  Real a0 = rr(bits, 0.0731);
  C.segs.push_back(Segment::arc_around(c, rho, a0, a0 + pi(bits) * 2L));
  return C;
}

// ray from a root to infinity along `angle`, tanh-sinh when the endpoint
// exponent is non-integer
Segment root_ray(const SemiclassicalType& t, const Complex& c, const Real& angle, const Real& R,
                 bool singular) {
  Segment s = Segment::line_between(c, c + unit(t.bits, angle) * R);
  if (singular) {
    s.ts = true;
    s.end_center0 = c;
  }
  return s;
}

struct FreudGeometry {
  std::vector<Real> ray_R;      // truncation radius per ray index (2a+2 rays)
  std::vector<Real> ray_Rhat;   // dual truncation radii
  Real rho_knot;
  Real eps;
};

FreudGeometry freud_geometry(const SemiclassicalType& t, const ContourBuildOptions& opt) {
  const mpfr_prec_t bits = t.bits;
  FreudGeometry g{{}, {}, Real(bits), rr(bits, 0.01)};
  const int nray = 2 * t.d_inf;
  Real minR = rr(bits, 1e300);
  for (int m = 0; m < nray; ++m) {
    Real ang = infinity_ray_angle(t, m);
    if (m % 2 == 0) {
      Real R = ray_truncation_radius(t, Complex(bits), ang + g.eps, +1) * rr(bits, opt.trunc_scale);
      minR = min(minR, R);
      g.ray_R.push_back(R);
      g.ray_Rhat.push_back(Real(bits));
    } else {
      Real Rh = ray_truncation_radius(t, Complex(bits), ang + rr(bits, 0.02), -1) *
                rr(bits, opt.trunc_scale);
      g.ray_R.push_back(Real(bits));
      g.ray_Rhat.push_back(Rh);
    }
  }
  g.rho_knot = minR * rr(bits, 0.05);
  return g;
}

Contour freud_sector_impl(const SemiclassicalType& t, int j, const FreudGeometry& g) {
  const mpfr_prec_t bits = t.bits;
  Contour C;
  C.kind = ContourKind::sector_arc;
  Real w_in = infinity_ray_angle(t, 2 * j - 2) + g.eps;
  Real w_out = infinity_ray_angle(t, 2 * j) - g.eps;
  Real w_mid = infinity_ray_angle(t, 2 * j - 1);
  Complex A = unit(bits, w_in) * g.ray_R[static_cast<size_t>((2 * j - 2) % (2 * t.d_inf))];
  Complex K = unit(bits, w_mid) * g.rho_knot;
  Complex B = unit(bits, w_out) * g.ray_R[static_cast<size_t>((2 * j) % (2 * t.d_inf))];
  C.segs.push_back(Segment::line_between(A, K));
  C.segs.push_back(Segment::line_between(K, B));
  return C;
}

Contour freud_dual_impl(const SemiclassicalType& t, int j, const FreudGeometry& g) {
  const mpfr_prec_t bits = t.bits;
  Contour D;
  D.kind = ContourKind::dual_ray;
  const int last_odd = 2 * t.d_inf - 1;
  Real a_in = infinity_ray_angle(t, last_odd) + rr(bits, 0.015) * static_cast<long>(j);
  Real a_out = infinity_ray_angle(t, 2 * j - 1) - rr(bits, 0.05);
  // continuous ccw sweep
  Real two_pi = pi(bits) * 2L;
  while (a_out <= a_in) a_out += two_pi;
  Real rho = g.rho_knot * rr(bits, 0.25);
  Real Rin = g.ray_Rhat[static_cast<size_t>(last_odd)];
  Real Rout = g.ray_Rhat[static_cast<size_t>(2 * j - 1)];
  D.segs.push_back(Segment::line_between(unit(bits, a_in) * Rin, unit(bits, a_in) * rho));
  D.segs.push_back(Segment::arc_around(Complex(bits), rho, a_in, a_out));
  D.segs.push_back(Segment::line_between(unit(bits, a_out) * rho, unit(bits, a_out) * Rout));
  return D;
}

void orient_duals(WeightedContourSet& wcs) {
  for (size_t j = 0; j < wcs.duals.size(); ++j) {
    int num = intersection_number(wcs.duals[j], wcs.contours[j]);
    if (num == -1)
      wcs.duals[j] = wcs.duals[j].reversed();
    else if (num != 1)
      throw numeric_error("build_contours: dual pairing is not +-1");
  }
}

}  // namespace

Contour freud_sector(const SemiclassicalType& t, int j, const ContourBuildOptions& opt) {
  if (t.b != 0 || t.a < 1) throw unsupported_type("freud_sector: type is not of Freud kind");
  if (j < 1 || j > t.a + 1) throw std::domain_error("freud_sector: sector index out of range");
  FreudGeometry g = freud_geometry(t, opt);
  return freud_sector_impl(t, j, g);
}

WeightedContourSet build_contours(SemiclassicalType& t, const ContourBuildOptions& opt) {
  const mpfr_prec_t bits = t.bits;
  WeightedContourSet wcs;
  const double int_tol = std::pow(10.0, -(t.digits / 2));

  if (t.b == 0) {
    FreudGeometry g = freud_geometry(t, opt);
    if (t.a == 1) {
      // single straight line through the two descent directions
      wcs.klass = WeightedContourSet::Class::line;
      Real w0 = infinity_ray_angle(t, 0);
      Real w2 = infinity_ray_angle(t, 2);
      Contour C;
      C.kind = ContourKind::hard_edge_segment;
      C.segs.push_back(Segment::line_between(unit(bits, w2) * g.ray_R[2],
                                             unit(bits, w0) * g.ray_R[0]));
      wcs.contours.push_back(std::move(C));
      Real w1 = infinity_ray_angle(t, 1);
      Real w3 = infinity_ray_angle(t, 3);
      Complex q0 = unit(bits, w0) * (g.ray_R[0] * rr(bits, 0.0731));
      Contour D;
      D.kind = ContourKind::dual_ray;
      D.segs.push_back(Segment::line_between(q0 + unit(bits, w3) * g.ray_Rhat[3],
                                             q0 + unit(bits, w1) * g.ray_Rhat[1]));
      wcs.duals.push_back(std::move(D));
    } else {
      wcs.klass = WeightedContourSet::Class::freud_sectors;
      for (int j = 1; j <= t.a; ++j) {
        wcs.contours.push_back(freud_sector_impl(t, j, g));
        wcs.duals.push_back(freud_dual_impl(t, j, g));
      }
    }
    orient_duals(wcs);
    return wcs;
  }

  // collect root data by the effective pole order of theta' dz (which can be
  // lower than the root multiplicity when A, B share factors)
  std::vector<const PoleInfo*> simple_end, simple_flag_ni, simple_flag_negint, multiple;
  for (const auto& p : t.poles) {
    if (p.order >= 2) {
      multiple.push_back(&p);
      continue;
    }
    long dummy;
    if (p.kind == PoleKind::end_pole || p.kind == PoleKind::hard_edge)
      simple_end.push_back(&p);
    else if (near_integer(p.residue, int_tol, &dummy) && dummy < 0)
      simple_flag_negint.push_back(&p);
    else
      simple_flag_ni.push_back(&p);
  }

  if (t.finite_rank) {
    wcs.klass = WeightedContourSet::Class::finite_rank_circles;
    Real mind = rr(bits, 1e300);
    for (const auto& p : t.poles) {
      for (const auto& q : t.poles)
        if (&p != &q) mind = min(mind, abs(p.location - q.location));
      wcs.anchors.push_back(p.location);
    }
    if (t.poles.size() == 1) mind = rr(bits, 2.0);
    Real rho = mind * rr(bits, 0.4);
    Complex centroid(bits);
    for (const auto& p : t.poles) centroid += p.location;
    centroid /= static_cast<long>(t.poles.size());
    for (const auto& p : t.poles) {
      wcs.contours.push_back(make_circle(p.location, rho));
      Complex off = p.location - centroid;
      Real ang = (abs(off).to_double() > 1e-12) ? arg(off) : Real(bits);
      ang += rr(bits, 0.0731);
      Contour D;
      D.kind = ContourKind::dual_ray;
      Complex u = unit(bits, ang);
      Real reach = rho * rr(bits, 2.37);
      D.segs.push_back(Segment::line_between(p.location, p.location + u * reach));
      Segment tail;
      tail.type = Segment::Type::inv_tail_out;
      tail.p0 = p.location + u * reach;
      tail.dir = u;
      tail.len = reach;
      D.segs.push_back(tail);
      wcs.duals.push_back(std::move(D));
    }
    orient_duals(wcs);
    return wcs;
  }

  if (multiple.size() >= 2)
    throw unsupported_type("build_contours: several multiple roots of B are unsupported");

  if (multiple.size() == 1) {
    if (t.a >= t.b)
      throw unsupported_type("build_contours: multiple-root B with deg A >= deg B is unsupported");
    wcs.klass = WeightedContourSet::Class::petals;
    const PoleInfo& p0 = *multiple[0];
    const int dc = p0.order - 1;
    wcs.anchors.push_back(p0.location);
    std::vector<Real> dirs = steepest_directions(t, p0);
    // radial budget: |Re theta| <= 12 ln 10 at the widest point
    double Tmag = abs(p0.leading).to_double();
    double rho_budget = std::pow(Tmag / (dc * 12.0 * 2.302585), 1.0 / dc);
    double rho_cap = 1e9;
    for (const auto* q : simple_end) rho_cap = std::min(rho_cap, 0.6 * abs(q->location - p0.location).to_double());
    for (const auto* q : simple_flag_negint) rho_cap = std::min(rho_cap, 0.6 * abs(q->location - p0.location).to_double());
    double rho_max_d = std::min(std::max(rho_budget * 3.0, 1e-3), rho_cap);
    Real rho_max = rr(bits, rho_max_d);
    const double target = (t.digits + 40.0) * 2.302585;
    double rho_end_d = std::pow(Tmag / (dc * target), 1.0 / dc);
    double kappa_d = 2.0 / dc;
    double t_cut = std::asin(std::min(0.999, std::pow(rho_end_d / rho_max_d, 1.0 / kappa_d))) / 3.14159265358979323846;

    long res_int;
    bool int_res = near_integer(p0.residue, int_tol, &res_int);
    if (dc == 1 && int_res) {
      wcs.contours.push_back(make_circle(p0.location, rho_max));
    } else {
      for (int k = 0; k < dc; ++k) {
        Segment s;
        s.type = Segment::Type::petal;
        s.center = p0.location;
        s.rho_max = rho_max;
        s.kappa = rr(bits, kappa_d);
        s.a0 = dirs[0] + (pi(bits) * 2L * static_cast<long>(k)) / static_cast<long>(dc);
        s.a1 = s.a0 + (pi(bits) * 2L) / static_cast<long>(dc);
        s.t_lo = rr(bits, t_cut);
        s.t_hi = rr(bits, 1.0 - t_cut);
        Contour C;
        C.kind = ContourKind::sector_arc;
        C.segs.push_back(std::move(s));
        wcs.contours.push_back(std::move(C));
      }
    }
    // anti-petals: ray from p0 along each ascent direction, then inverted tail
    for (int k = 0; k < dc && static_cast<int>(wcs.duals.size()) < static_cast<int>(wcs.contours.size()); ++k) {
      Real ang = dirs[0] + pi(bits) / static_cast<long>(dc) +
                 (pi(bits) * 2L) * static_cast<long>(k) / static_cast<long>(dc) + rr(bits, 0.04);
      Complex u = unit(bits, ang);
      Contour D;
      D.kind = ContourKind::dual_ray;
      Real L0 = rho_max * 2L;
      Segment first = Segment::line_between(p0.location, p0.location + u * L0);
      D.segs.push_back(first);
      Segment tail;
      tail.type = Segment::Type::inv_tail_out;
      tail.p0 = p0.location + u * L0;
      tail.dir = u;
      tail.len = L0;
      D.segs.push_back(tail);
      wcs.duals.push_back(std::move(D));
    }
    // extra simple roots: contour from the root into p0 along a descent ray
    for (const auto* q : simple_end) {
      Real ang_near = dirs[0];
      Real bestd = rr(bits, 1e300);
      Real qa = arg(q->location - p0.location);
      for (int k = 0; k < dc; ++k) {
        Real cand = dirs[0] + (pi(bits) * 2L) * static_cast<long>(k) / static_cast<long>(dc);
        Real dd = abs(cos(cand - qa) - rr(bits, 1.0));
        if (dd < bestd) {
          bestd = dd;
          ang_near = cand;
        }
      }
      Complex u = unit(bits, ang_near);
      Complex Jmid = p0.location + u * rho_max;
      Complex Jend = p0.location + u * rr(bits, rho_end_d);
      Contour C;
      C.kind = ContourKind::stem_like;
      long dummy;
      bool sing = !near_integer(q->residue, int_tol, &dummy);
      Segment s1 = Segment::line_between(q->location, Jmid);
      if (sing) {
        s1.ts = true;
        s1.end_center0 = q->location;
      }
      C.segs.push_back(s1);
      C.segs.push_back(Segment::line_between(Jmid, Jend));
      wcs.contours.push_back(std::move(C));
      // dual: lasso around q anchored away from p0
      Real back = arg(q->location - p0.location);
      Contour D = make_lasso(t, q->location, back, abs(q->location - p0.location) * 2L,
                             abs(q->location - p0.location) * rr(bits, 0.25), ContourKind::lasso);
      // extend both far legs with inverted tails
      Complex far0 = D.segs.front().p0;
      Complex far1 = D.segs.back().p1;
      Contour D2;
      D2.kind = ContourKind::dual_ray;
      Segment tin;
      tin.type = Segment::Type::inv_tail_in;
      tin.p0 = far0;
      tin.dir = unit(bits, back + rr(bits, 0.06));
      tin.len = abs(far0 - q->location);
      D2.segs.push_back(tin);
      for (auto& sgl : D.segs) D2.segs.push_back(sgl);
      Segment tout;
      tout.type = Segment::Type::inv_tail_out;
      tout.p0 = far1;
      tout.dir = unit(bits, back - rr(bits, 0.06));
      tout.len = abs(far1 - q->location);
      D2.segs.push_back(tout);
      wcs.duals.push_back(std::move(D2));
    }
    if (!simple_flag_ni.empty() || !simple_flag_negint.empty())
      throw unsupported_type("build_contours: flag poles next to a multiple root are unsupported");
    orient_duals(wcs);
    return wcs;
  }

  // all simple roots
  if (t.a >= t.b) {
    // only the single-simple-root pattern (deg A = deg B = 1) is in scope
    if (t.b != 1 || t.a != 1)
      throw unsupported_type(
          "build_contours: deg A >= deg B with visible simple poles is supported only "
          "for deg A = deg B = 1");
    wcs.klass = WeightedContourSet::Class::endpole_rays;
    const PoleInfo& q = t.poles[0];
    wcs.anchors.push_back(q.location);
    Real w0 = infinity_ray_angle(t, 0);
    Real esc = infinity_ray_angle(t, 1);
    Real R = ray_truncation_radius(t, q.location, w0, +1) * rr(bits, opt.trunc_scale);
    Real Rh = ray_truncation_radius(t, q.location, esc + rr(bits, 0.06), -1) *
              rr(bits, opt.trunc_scale);
    long ri;
    bool int_res = near_integer(q.residue, int_tol, &ri);
    if (q.kind == PoleKind::end_pole || q.kind == PoleKind::hard_edge) {
      Contour C;
      C.kind = ContourKind::hard_edge_segment;
      C.segs.push_back(root_ray(t, q.location, w0, R, !int_res));
      wcs.contours.push_back(std::move(C));
      if (int_res) {
        wcs.duals.push_back(make_circle(q.location, R * rr(bits, 0.2)));
      } else {
        wcs.duals.push_back(
            make_lasso(t, q.location, esc, Rh, R * rr(bits, 0.2), ContourKind::lasso));
      }
    } else if (int_res && ri < 0) {
      wcs.contours.push_back(make_circle(q.location, R * rr(bits, 0.15)));
      Contour D;
      D.kind = ContourKind::dual_ray;
      D.segs.push_back(Segment::line_between(q.location, q.location + unit(bits, esc) * Rh));
      wcs.duals.push_back(std::move(D));
    } else {
      // non-integer flag pole: lasso anchored on the descent ray, cut inside it
      wcs.contours.push_back(make_lasso(t, q.location, w0, R, R * rr(bits, 0.15), ContourKind::lasso));
      for (auto& lt : t.sym.theta.logs)
        if (lt.center == q.location) lt.cut_angle = w0;
      for (auto& lt : t.sym.theta_hat.logs)
        if (lt.center == q.location) lt.cut_angle = w0;
      Contour D;
      D.kind = ContourKind::dual_ray;
      Segment s = Segment::line_between(q.location, q.location + unit(bits, esc) * Rh);
      s.ts = true;
      s.end_center0 = q.location;
      D.segs.push_back(s);
      wcs.duals.push_back(std::move(D));
    }
    orient_duals(wcs);
    return wcs;
  }

  // deg A < deg B, all simple: chain over end/hard roots plus circles
  wcs.klass = WeightedContourSet::Class::segment_chain;
  if (!simple_flag_ni.empty())
    throw unsupported_type("build_contours: non-integer flag residues need Pochhammer contours");
  std::vector<const PoleInfo*> chain = simple_end;
  std::sort(chain.begin(), chain.end(), [](const PoleInfo* x, const PoleInfo* y) {
    if (x->location.re() != y->location.re()) return x->location.re() < y->location.re();
    return x->location.im() < y->location.im();
  });
  for (const auto* q : chain) wcs.anchors.push_back(q->location);
  if (chain.size() + simple_flag_negint.size() != static_cast<size_t>(t.b) ||
      static_cast<int>(chain.size()) < 1)
    throw unsupported_type("build_contours: unsupported simple-root layout");
  for (size_t i = 0; i + 1 < chain.size(); ++i) {
    const Complex& c0 = chain[i]->location;
    const Complex& c1 = chain[i + 1]->location;
    Segment s = Segment::line_between(c0, c1);
    long dummy;
    bool s0 = !near_integer(chain[i]->residue, int_tol, &dummy);
    bool s1 = !near_integer(chain[i + 1]->residue, int_tol, &dummy);
    if (s0 || s1) {
      s.ts = true;
      if (s0) s.end_center0 = c0;
      if (s1) s.end_center1 = c1;
    }
    Contour C;
    C.kind = ContourKind::hard_edge_segment;
    C.segs.push_back(std::move(s));
    wcs.contours.push_back(std::move(C));
    // dual: perpendicular transversal, crossing point off any sampling vertex
    Complex mid = c0 + (c1 - c0) * rr(bits, 0.5371);
    Complex dirc = (c1 - c0) / abs(c1 - c0);
    Complex nrm(-dirc.im(), dirc.re());
    Real h = abs(c1 - c0);
    Real hup = h * rr(bits, 1.18), hdn = h * rr(bits, 0.82);
    Contour D;
    D.kind = ContourKind::dual_ray;
    Segment tin;
    tin.type = Segment::Type::inv_tail_in;
    tin.p0 = mid + nrm * hup;
    tin.dir = nrm;
    tin.len = h;
    D.segs.push_back(tin);
    D.segs.push_back(Segment::line_between(mid + nrm * hup, mid - nrm * hdn));
    Segment tout;
    tout.type = Segment::Type::inv_tail_out;
    tout.p0 = mid - nrm * hdn;
    tout.dir = -nrm;
    tout.len = h;
    D.segs.push_back(tout);
    wcs.duals.push_back(std::move(D));
  }
  for (const auto* q : simple_flag_negint) {
    Real mind = rr(bits, 1e300);
    for (const auto& p : t.poles)
      if (&p != q) mind = min(mind, abs(p.location - q->location));
    wcs.contours.push_back(make_circle(q->location, mind * rr(bits, 0.35)));
    Complex centroid(bits);
    for (const auto& p : t.poles) centroid += p.location;
    centroid /= static_cast<long>(t.poles.size());
    Complex off = q->location - centroid;
    Real ang = (abs(off).to_double() > 1e-12) ? arg(off) : Real(bits);
    Complex u = unit(bits, ang);
    Contour D;
    D.kind = ContourKind::dual_ray;
    D.segs.push_back(Segment::line_between(q->location, q->location + u * mind));
    Segment tail;
    tail.type = Segment::Type::inv_tail_out;
    tail.p0 = q->location + u * mind;
    tail.dir = u;
    tail.len = mind;
    D.segs.push_back(tail);
    wcs.duals.push_back(std::move(D));
  }
  orient_duals(wcs);
  return wcs;
}

}  // namespace sbethe

namespace sbethe {

namespace {

double min_dist(const Contour& c, const std::vector<Complex>& pts) {
  return pts.empty() ? 1e300 : polyline_distance(c, pts);
}

}  // namespace

std::vector<Contour> duals_avoiding(const SemiclassicalType& t, const WeightedContourSet& wcs,
                                    const std::vector<Complex>& pts, double margin,
                                    const ContourBuildOptions& opt) {
  const mpfr_prec_t bits = t.bits;
  std::vector<Contour> duals = wcs.duals;

  switch (wcs.klass) {
    case WeightedContourSet::Class::freud_sectors: {
      FreudGeometry g = freud_geometry(t, opt);
      double knot = g.rho_knot.to_double();
      double best_r = 0.25 * knot, best_d = -1.0;
      double best_eps = 0.05;
      for (double frac : {0.08, 0.12, 0.18, 0.25, 0.33, 0.42, 0.55, 0.7, 0.85}) {
        for (double epso : {0.05, 0.11, 0.17}) {
          double worst = 1e300;
          std::vector<Contour> cand;
          for (int j = 1; j <= t.a; ++j) {
            Contour D = freud_dual_impl(t, j, g);
            // rebuild with the candidate arc radius and out-leg offset
            Real rho = rr(bits, frac * knot);
            Real a_in = D.segs[1].a0;
            Real a_out_base = infinity_ray_angle(t, 2 * j - 1);
            Real a_out = a_out_base - rr(bits, epso);
            Real two_pi = pi(bits) * 2L;
            while (a_out <= a_in) a_out += two_pi;
            Real Rout = g.ray_Rhat[static_cast<size_t>(2 * j - 1)];
            Real Rin = g.ray_Rhat[static_cast<size_t>(2 * t.d_inf - 1)];
            Contour D2;
            D2.kind = ContourKind::dual_ray;
            D2.segs.push_back(Segment::line_between(unit(bits, a_in) * Rin, unit(bits, a_in) * rho));
            D2.segs.push_back(Segment::arc_around(Complex(bits), rho, a_in, a_out));
            D2.segs.push_back(Segment::line_between(unit(bits, a_out) * rho, unit(bits, a_out) * Rout));
            worst = std::min(worst, min_dist(D2, pts));
            cand.push_back(std::move(D2));
          }
          if (worst > best_d) {
            best_d = worst;
            best_r = frac * knot;
            best_eps = epso;
            duals = std::move(cand);
          }
        }
      }
      if (best_d < margin)
        throw numeric_error("duals_avoiding: cannot separate dual arcs from the zeros");
      break;
    }
    case WeightedContourSet::Class::line: {
      // move the crossing point into the widest gap along the contour line
      const Segment& main = wcs.contours[0].segs[0];
      Complex u = (main.p1 - main.p0) / abs(main.p1 - main.p0);
      std::vector<double> proj;
      for (const auto& p : pts) proj.push_back((conj(u) * p).re().to_double());
      std::sort(proj.begin(), proj.end());
      double best = 0.0, best_d = -1.0;
      std::vector<double> cands;
      if (proj.empty()) {
        cands.push_back(0.0);
      } else {
        cands.push_back(proj.front() - 1.0);
        cands.push_back(proj.back() + 1.0);
        for (size_t i = 0; i + 1 < proj.size(); ++i)
          cands.push_back(0.5 * (proj[i] + proj[i + 1]));
      }
      for (double c : cands) {
        double d = 1e300;
        for (double p : proj) d = std::min(d, std::abs(c - p));
        if (d > best_d) {
          best_d = d;
          best = c;
        }
      }
      const Segment& old_seg = wcs.duals[0].segs[0];
      Complex dirn = (old_seg.p1 - old_seg.p0) / abs(old_seg.p1 - old_seg.p0);
      Complex q0 = u * rr(bits, best);
      Real len0 = abs(old_seg.p1 - old_seg.p0);
      Contour D;
      D.kind = ContourKind::dual_ray;
      Real hup = len0 * rr(bits, 0.59), hdn = len0 * rr(bits, 0.41);
      D.segs.push_back(Segment::line_between(q0 - dirn * hdn, q0 + dirn * hup));
      duals[0] = std::move(D);
      break;
    }
    case WeightedContourSet::Class::segment_chain: {
      for (size_t j = 0; j < wcs.contours.size(); ++j) {
        if (wcs.contours[j].kind != ContourKind::hard_edge_segment) continue;
        const Segment& s = wcs.contours[j].segs[0];
        Complex dir = s.p1 - s.p0;
        Real len = abs(dir);
        Complex u = dir / len;
        std::vector<double> proj{0.08, 0.92};
        for (const auto& p : pts) {
          double x = ((conj(u) * (p - s.p0)).re() / len).to_double();
          if (x > 0.03 && x < 0.97) proj.push_back(x);
        }
        std::sort(proj.begin(), proj.end());
        double best = 0.5, best_d = -1.0;
        for (size_t i = 0; i + 1 < proj.size(); ++i) {
          double c = 0.5 * (proj[i] + proj[i + 1]);
          double d = 1e300;
          for (double p : proj) d = std::min(d, std::abs(c - p));
          if (d > best_d) {
            best_d = d;
            best = c;
          }
        }
        Complex mid = s.p0 + dir * rr(bits, best);
        Complex nrm(-u.im(), u.re());
        Real hup = len * rr(bits, 1.18), hdn = len * rr(bits, 0.82);
        Contour D;
        D.kind = ContourKind::dual_ray;
        Segment tin;
        tin.type = Segment::Type::inv_tail_in;
        tin.p0 = mid + nrm * hup;
        tin.dir = nrm;
        tin.len = len;
        D.segs.push_back(tin);
        D.segs.push_back(Segment::line_between(mid + nrm * hup, mid - nrm * hdn));
        Segment tout;
        tout.type = Segment::Type::inv_tail_out;
        tout.p0 = mid - nrm * hdn;
        tout.dir = -nrm;
        tout.len = len;
        D.segs.push_back(tout);
        duals[j] = std::move(D);
      }
      break;
    }
    default:
      break;
  }

  // orientation and margin validation
  for (size_t j = 0; j < duals.size(); ++j) {
    int num = intersection_number(duals[j], wcs.contours[j]);
    if (num == -1)
      duals[j] = duals[j].reversed();
    else if (num != 1)
      throw numeric_error("duals_avoiding: dual pairing failed after adaptation");
    if (min_dist(duals[j], pts) < margin)
      throw numeric_error("duals_avoiding: dual path too close to a zero of P");
  }
  return duals;
}

}  // namespace sbethe
