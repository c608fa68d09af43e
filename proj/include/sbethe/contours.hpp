#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <optional>

#include "sbethe/quadrature.hpp"
#include "sbethe/semiclassical.hpp"

namespace sbethe {

enum class ContourKind { sector_arc, hard_edge_segment, lasso, stem_like, dual_ray, circle };

/// One parameterized path piece, t in [0,1] along the travel direction.
struct Segment {
  enum class Type { line, arc, petal, inv_tail_in, inv_tail_out };
  Type type = Type::line;

  Complex p0, p1;  // line endpoints

  Complex center;  // arc / petal center
  Real radius;     // arc radius
  Real a0, a1;     // arc / petal angles (continuous, may wind)

  Real rho_max, kappa;  // petal radial profile rho_max * sin(pi t)^kappa
  Real t_lo, t_hi;      // petal parameter window (cusp truncation)

  Complex dir;  // inv-tail unit direction toward infinity
  Real len;     // inv-tail scale L

  bool ts = false;                       // integrate by tanh-sinh (endpoint singularities)
  std::optional<Complex> end_center0;    // log-center coinciding with the t=0 endpoint
  std::optional<Complex> end_center1;    // ... with the t=1 endpoint

  Segment() = default;
  static Segment line_between(const Complex& a, const Complex& b);
  static Segment arc_around(const Complex& c, const Real& r, const Real& ang0, const Real& ang1);
};

struct Contour {
  ContourKind kind = ContourKind::sector_arc;
  std::vector<Segment> segs;

  Contour reversed() const;
  /// Double-precision polyline for geometry checks and plots.
  std::vector<std::pair<double, double>> polyline(int per_seg = 48) const;
};

/// Point of a segment map: position, velocity dz/dt, and branch hints for the
/// symbol evaluation.
struct SegPoint {
  Complex z;
  Complex dz;
  std::optional<std::pair<Complex, Real>> polar;     // (center, continued arg)
  std::optional<std::pair<Complex, Complex>> offset;  // (center, exact z - center)
};

SegPoint seg_point(const Segment& s, const Real& t);

struct QuadratureReport {
  Complex value;
  Real abs_error_estimate;
  long panels = 0;
};

/// Integrand descriptor: num(z) * e^{theta_sign * theta(z)} / den(z) / (z-c)^K.
struct Integrand {
  Polynomial num;
  int theta_sign = +1;
  std::optional<Polynomial> den;
  std::optional<std::pair<Complex, int>> pole_factor;
};

struct WeightedContourSet {
  std::vector<Contour> contours;
  std::vector<Contour> duals;
  std::vector<Complex> s;  // weights; empty until set

  // class geometry, consumed by weight recovery and the dual builders
  enum class Class { freud_sectors, line, endpole_rays, segment_chain, petals, finite_rank_circles };
  Class klass = Class::freud_sectors;
  std::vector<Complex> anchors;  // class-specific anchor points (roots of B, ...)

  // raw per-contour monomial moments, grown on demand
  mutable std::vector<std::vector<Complex>> raw_moments;
  mutable std::shared_ptr<std::mutex> cache_mutex = std::make_shared<std::mutex>();
};

struct ContourBuildOptions {
  double trunc_scale = 1.0;   // multiplies every truncation radius
  double extra_decay_digits = 0.0;  // widens the truncation target
};

/// Contour systems gamma_j and duals for the supported type classes.  May
/// adjust branch-cut angles in t.sym so that lassos enclose their own cut.
WeightedContourSet build_contours(SemiclassicalType& t, const ContourBuildOptions& opt = {});

/// One Freud sector contour (j = 1..a+1) for homology checks; j <= a
/// reproduces the canonical set.
Contour freud_sector(const SemiclassicalType& t, int j, const ContourBuildOptions& opt = {});

QuadratureReport integrate_weighted(const Contour& c, const Integrand& f, const SymbolFns& sym,
                                    const Real& tol, mpfr_prec_t bits);

/// Integrals of z^k * e^{theta} dz over one contour for k = 0..k_max.
std::vector<Complex> contour_monomial_integrals(const Contour& c, const SymbolFns& sym,
                                                int k_max, const Real& tol, mpfr_prec_t bits,
                                                const std::optional<std::pair<Complex, int>>& pole_factor = {});

/// Weighted moments mu_k = sum_j s_j int_{gamma_j} z^k e^theta dz, cached per
/// (contour, k).
std::vector<Complex> moments(const WeightedContourSet& wcs, const SymbolFns& sym, int k_max,
                             const Real& tol, mpfr_prec_t bits);

Complex apply_functional(const WeightedContourSet& wcs, const SymbolFns& sym,
                         const Polynomial& p, const Real& tol, mpfr_prec_t bits);

/// Signed intersection number of two contours (double-precision polylines).
int intersection_number(const Contour& a, const Contour& b);

/// Smallest distance from the contour polyline to any of the given points.
double polyline_distance(const Contour& c, const std::vector<Complex>& pts);

/// Truncation radius R along a ray: |e^{sign*theta}| drops below the working
/// tolerance at anchor + R e^{i angle}.
Real ray_truncation_radius(const SemiclassicalType& t, const Complex& anchor, const Real& angle,
                           int theta_sign, double extra_digits = 0.0);

/// Dual contours rebuilt so their paths keep at least `margin` distance from
/// the given points (the weight-recovery integrand has double poles there),
/// re-oriented to pair +1 with the stored contours.
std::vector<Contour> duals_avoiding(const SemiclassicalType& t, const WeightedContourSet& wcs,
                                    const std::vector<Complex>& pts, double margin,
                                    const ContourBuildOptions& opt = {});

}  // namespace sbethe
