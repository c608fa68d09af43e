#include "sbethe/pipeline.hpp"

#include <chrono>
#include <filesystem>
#include <set>

#include "sbethe/roots.hpp"

namespace sbethe {

namespace {

class StageTimer {
 public:
  explicit StageTimer(json& sink) : sink_(sink) {}
  template <typename F>
  auto run(const std::string& name, F&& f) {
    auto t0 = std::chrono::steady_clock::now();
    if constexpr (std::is_void_v<decltype(f())>) {
      f();
      store(name, t0);
    } else {
      auto r = f();
      store(name, t0);
      return r;
    }
  }

 private:
  void store(const std::string& name, std::chrono::steady_clock::time_point t0) {
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    sink_[name] = ms;
  }
  json& sink_;
};

SeedSpec seed_of(const Scenario& sc, const PrecisionContext& ctx) {
  SeedSpec seed;
  if (sc.seed_strategy == "classical-zeros")
    seed.strategy = SeedSpec::Strategy::classical_zeros;
  else if (sc.seed_strategy == "scaled-roots-of-unity")
    seed.strategy = SeedSpec::Strategy::scaled_roots_of_unity;
  else if (sc.seed_strategy == "user-list")
    seed.strategy = SeedSpec::Strategy::user_list;
  else if (sc.seed_strategy == "random-disk")
    seed.strategy = SeedSpec::Strategy::random_disk;
  else
    throw std::invalid_argument("scenario: unknown seed strategy '" + sc.seed_strategy + "'");
  seed.scale = sc.seed_scale;
  seed.jitter = sc.seed_jitter;
  seed.rng_seed = sc.rng_seed;
  if (!sc.user_points.is_null())
    for (const auto& p : sc.user_points) seed.user_points.push_back(complex_from_json(p, ctx));
  return seed;
}

json versions_json() {
  return json{{"sbethe", "0.1.0"}, {"mpfr", mpfr_get_version()}};
}

}  // namespace

Scenario scenario_from_json(const json& j) {
  static const std::set<std::string> allowed{
      "A", "B", "n", "digits", "guard_digits", "allow_nonprime", "seed", "tolerances",
      "pipeline", "out_dir", "points", "family", "lift"};
  static const std::set<std::string> allowed_seed{"strategy", "scale", "jitter", "rng_seed"};
  static const std::set<std::string> allowed_tol{"solver", "quadrature", "degeneracy",
                                                 "degeneracy_gap"};
  static const std::set<std::string> allowed_family{"B_re", "B_im", "k", "C_re", "C_im", "grid"};
  static const std::set<std::string> allowed_lift{"c_re", "c_im", "K"};
  for (const auto& [key, val] : j.items())
    if (!allowed.count(key)) throw std::invalid_argument("scenario: unknown key '" + key + "'");

  Scenario sc;
  if (j.contains("A")) sc.A = j["A"];
  if (j.contains("B")) sc.B = j["B"];
  if (j.contains("n")) sc.n = j["n"].get<int>();
  if (j.contains("digits")) sc.digits = j["digits"].get<int>();
  if (j.contains("guard_digits")) sc.guard_digits = j["guard_digits"].get<int>();
  if (j.contains("allow_nonprime")) sc.allow_nonprime = j["allow_nonprime"].get<bool>();
  if (j.contains("points")) sc.user_points = j["points"];
  if (j.contains("seed")) {
    for (const auto& [key, val] : j["seed"].items())
      if (!allowed_seed.count(key))
        throw std::invalid_argument("scenario: unknown seed key '" + key + "'");
    const json& s = j["seed"];
    if (s.contains("strategy")) sc.seed_strategy = s["strategy"].get<std::string>();
    if (s.contains("scale")) sc.seed_scale = s["scale"].get<double>();
    if (s.contains("jitter")) sc.seed_jitter = s["jitter"].get<double>();
    if (s.contains("rng_seed")) sc.rng_seed = s["rng_seed"].get<unsigned long>();
  }
  if (j.contains("tolerances")) {
    for (const auto& [key, val] : j["tolerances"].items())
      if (!allowed_tol.count(key))
        throw std::invalid_argument("scenario: unknown tolerance key '" + key + "'");
    const json& s = j["tolerances"];
    if (s.contains("solver")) sc.solver_tol = s["solver"].get<std::string>();
    if (s.contains("quadrature")) sc.quadrature_tol = s["quadrature"].get<std::string>();
    if (s.contains("degeneracy")) sc.degeneracy_tol = s["degeneracy"].get<std::string>();
    if (s.contains("degeneracy_gap")) sc.degeneracy_gap = s["degeneracy_gap"].get<double>();
  }
  if (j.contains("pipeline")) sc.pipeline = j["pipeline"].get<std::string>();
  if (j.contains("out_dir")) sc.out_dir = j["out_dir"].get<std::string>();
  if (j.contains("family")) {
    for (const auto& [key, val] : j["family"].items())
      if (!allowed_family.count(key))
        throw std::invalid_argument("scenario: unknown family key '" + key + "'");
    const json& s = j["family"];
    if (s.contains("B_re")) sc.family_B_re = s["B_re"].get<std::vector<std::string>>();
    if (s.contains("B_im")) sc.family_B_im = s["B_im"].get<std::vector<std::string>>();
    if (s.contains("k")) sc.family_k = s["k"].get<long>();
    if (s.contains("C_re")) sc.family_C_re = s["C_re"].get<std::string>();
    if (s.contains("C_im")) sc.family_C_im = s["C_im"].get<std::string>();
    if (s.contains("grid")) sc.family_grid = s["grid"].get<int>();
  }
  if (j.contains("lift")) {
    for (const auto& [key, val] : j["lift"].items())
      if (!allowed_lift.count(key))
        throw std::invalid_argument("scenario: unknown lift key '" + key + "'");
    const json& s = j["lift"];
    if (s.contains("c_re")) sc.lift_c_re = s["c_re"].get<std::string>();
    if (s.contains("c_im")) sc.lift_c_im = s["c_im"].get<std::string>();
    if (s.contains("K")) sc.lift_K = s["K"].get<int>();
  }
  return sc;
}

json scenario_to_json(const Scenario& sc) {
  json j;
  j["A"] = sc.A;
  j["B"] = sc.B;
  j["n"] = sc.n;
  j["digits"] = sc.digits;
  j["guard_digits"] = sc.guard_digits;
  j["allow_nonprime"] = sc.allow_nonprime;
  j["seed"] = json{{"strategy", sc.seed_strategy},
                   {"scale", sc.seed_scale},
                   {"jitter", sc.seed_jitter},
                   {"rng_seed", sc.rng_seed}};
  j["tolerances"] = json{{"solver", sc.solver_tol},
                         {"quadrature", sc.quadrature_tol},
                         {"degeneracy", sc.degeneracy_tol},
                         {"degeneracy_gap", sc.degeneracy_gap}};
  j["pipeline"] = sc.pipeline;
  if (!sc.out_dir.empty()) j["out_dir"] = sc.out_dir;
  return j;
}

namespace {

RunReport roundtrip_impl(const Scenario& sc, bool do_solve, bool do_verify) {
  RunReport rep;
  rep.body["scenario"] = scenario_to_json(sc);
  rep.body["versions"] = versions_json();
  StageTimer timer(rep.timings);
  std::string stage = "setup";
  bool converged = false, deg_ok = false, gap_ok = true, ode_ok = true, wr_ok = true;

  try {
    PrecisionContext ctx(sc.digits, sc.guard_digits);
    const mpfr_prec_t bits = ctx.bits();
    Real solver_tol(ctx, sc.solver_tol);
    Real quad_tol(ctx, sc.quadrature_tol);
    Real deg_tol(ctx, sc.degeneracy_tol);

    stage = "build_type";
    SemiclassicalType t = timer.run(stage, [&] {
      return build_type(poly_from_json(sc.A, ctx), poly_from_json(sc.B, ctx), sc.allow_nonprime,
                        ctx);
    });
    rep.body["type"] = json{{"deg_A", t.a}, {"deg_B", t.b}, {"d", t.d}, {"d_inf", t.d_inf},
                            {"Lambda", complex_to_json(t.Lambda, 12)},
                            {"finite_rank", t.finite_rank}};

    stage = "build_contours";
    WeightedContourSet wcs = timer.run(stage, [&] { return build_contours(t); });

    stage = do_solve ? "solve" : "load_points";
    Configuration cfg = timer.run(stage, [&] {
      if (do_solve) return solve(t, sc.n, seed_of(sc, ctx), solver_tol);
      Configuration c;
      for (const auto& p : sc.user_points) c.points.push_back(complex_from_json(p, ctx));
      c.n = static_cast<int>(c.points.size());
      Real mx(bits);
      for (const auto& r : residual(t, c.points)) mx = max(mx, abs(r));
      c.residual_norm = mx;
      c.converged = mx < solver_tol;
      return c;
    });
    rep.body["configuration"] = configuration_to_json(cfg);
    rep.body["energy"] = energy(t, cfg).to_string(20);
    converged = cfg.converged;
    if (!converged) throw numeric_error("configuration residual above solver tolerance");

    if (!do_verify) {
      rep.ok = converged;
      return rep;
    }

    stage = "weights_from_config";
    std::vector<Complex> s_raw = timer.run(stage, [&] {
      return weights_from_config(t, cfg, wcs, quad_tol);
    });
    std::vector<Complex> s_norm = normalize_weights(s_raw);
    wcs.s = s_norm;
    json sj = json::array();
    for (const auto& v : s_norm) sj.push_back(complex_to_json(v, 20));
    rep.body["s_normalized"] = sj;

    stage = "verify_degeneracy";
    Polynomial P = Polynomial::from_roots(bits, cfg.points);
    DegeneracyReport drep = timer.run(stage, [&] {
      return verify_degeneracy(t, wcs, P, t.d - 1, deg_tol);
    });
    deg_ok = drep.passed;

    stage = "heine_stieltjes_Q";
    auto [Q, ode_rem] = timer.run(stage, [&] { return heine_stieltjes_Q(t, P); });
    drep.ode_residual = ode_rem;
    drep.ode_deg_Q = Q.degree();
    ode_ok = ode_rem < deg_tol && Q.degree() <= t.d - 1;
    rep.body["Q"] = poly_to_json(Q, 20);

    stage = "wronskian_check";
    WronskianResult w = timer.run(stage, [&] {
      auto samples = wronskian_samples(t, wcs, cfg.points, 5);
      return wronskian_check(t, wcs, P, samples, quad_tol);
    });
    drep.wronskian_spread = w.spread;
    wr_ok = w.spread < Real(ctx, "1e-20");

    for (size_t k = 0; k < drep.min_eig_n1.size(); ++k)
      if (!(drep.min_eig_n1[k] * Real(ctx, sc.degeneracy_gap) < drep.min_eig_nn)) gap_ok = false;
    rep.body["degeneracy"] = degeneracy_report_to_json(drep);
    rep.body["checks"] = json{{"converged", converged},
                              {"degeneracy_passed", deg_ok},
                              {"determinant_gap", gap_ok},
                              {"ode", ode_ok},
                              {"wronskian", wr_ok}};

    stage = "moments_export";
    auto mu = moments(wcs, t.sym, 2 * cfg.n + t.d - 1, quad_tol, bits);
    json mj = json::array();
    for (const auto& m : mu) mj.push_back(complex_to_json(m, 30));
    rep.body["moments"] = mj;
    rep.body["contours"] = contours_to_json(wcs);
    rep.body["degeneracy_csv"] = degeneracy_report_to_csv(drep, s_norm);
  } catch (const std::exception& e) {
    rep.body["failed_stage"] = stage;
    rep.body["error"] = e.what();
    rep.ok = false;
    return rep;
  }
  rep.ok = converged && deg_ok && gap_ok && ode_ok && wr_ok;
  return rep;
}

}  // namespace

RunReport run_roundtrip(const Scenario& sc) { return roundtrip_impl(sc, true, true); }
RunReport run_verify(const Scenario& sc) { return roundtrip_impl(sc, false, true); }
RunReport run_solve(const Scenario& sc) { return roundtrip_impl(sc, true, false); }

RunReport run_family(const Scenario& sc) {
  RunReport rep;
  rep.body["scenario"] = scenario_to_json(sc);
  rep.body["versions"] = versions_json();
  std::string stage = "family_setup";
  try {
    PrecisionContext ctx(sc.digits, sc.guard_digits);
    const mpfr_prec_t bits = ctx.bits();

    std::vector<QComplex> bc;
    for (size_t i = 0; i < sc.family_B_re.size(); ++i) {
      Rat re(sc.family_B_re[i]);
      Rat im = i < sc.family_B_im.size() ? Rat(sc.family_B_im[i]) : Rat(0);
      bc.emplace_back(re, im);
    }
    QPoly B(bc);
    QComplex C(Rat(sc.family_C_re), Rat(sc.family_C_im));

    stage = "family_polynomial";
    FamilyInstance fam = family_polynomial(B, sc.family_k, C);
    rep.body["family"] = json{{"k", fam.k}, {"n", fam.n}, {"deg_B", fam.B.degree()}};
    rep.body["lame_identity_exact"] = true;

    // exact roots of B (rational reconstruction is the caller's contract)
    stage = "exact_roots";
    std::vector<QComplex> roots;
    {
      Polynomial Bf = B.to_polynomial(bits);
      for (const auto& r : poly_roots(Bf)) {
        // rationalize with a small-denominator search, then verify exactly
        bool found = false;
        for (long den = 1; den <= 1000000 && !found; den *= 10) {
          Rat re(static_cast<long>(std::llround(r.re().to_double() * den)), den);
          Rat im(static_cast<long>(std::llround(r.im().to_double() * den)), den);
          QComplex cand(re, im);
          if (B.eval(cand).is_zero()) {
            roots.push_back(cand);
            found = true;
          }
        }
        if (!found) throw numeric_error("family: B has a non-rational root (unsupported in v1)");
      }
    }

    stage = "exact_orthogonality";
    std::vector<QComplex> weights;
    for (const auto& beta : roots) {
      QComplex pb = fam.P.eval(beta);
      if (pb.is_zero()) throw numeric_error("family: P vanishes at a root of B");
      weights.push_back(QComplex(1) / pb);
    }
    int d = fam.B.degree() - 1;
    bool exact_ok = true;
    QPoly zm = QPoly::constant(QComplex(1));
    for (int m = 0; m <= fam.n + d - 2; ++m) {
      QComplex v = residue_apply(fam.B, fam.k, roots, weights, fam.P * zm);
      if (!v.is_zero()) exact_ok = false;
      zm = zm * QPoly::variable();
    }
    rep.body["orthogonality_exact"] = exact_ok;

    stage = "numeric_residual";
    Polynomial Pf = fam.P.to_polynomial(bits);
    auto zr = poly_roots(Pf);
    SemiclassicalType t = build_type(fam.B.derivative().to_polynomial(bits) *
                                         Complex(Real::with_prec(bits, sc.family_k), Real(bits)),
                                     fam.B.to_polynomial(bits), false, ctx);
    Real mx(bits);
    for (const auto& r : residual(t, zr)) mx = max(mx, abs(r));
    rep.body["equilibrium_residual"] = mx.to_string(8);
    bool resid_ok = mx < pow10(bits, -(sc.digits - 12));

    // optional C-grid sweep: root trajectories
    if (sc.family_grid > 1) {
      stage = "family_sweep";
      std::string csv = "t,root_index,re,im\n";
      for (int g = 0; g < sc.family_grid; ++g) {
        Rat tpar(g, std::max(1, sc.family_grid - 1));
        QComplex Cg = C + QComplex(tpar * Rat(1, 2), tpar * Rat(1, 4));
        FamilyInstance fg = family_polynomial(B, sc.family_k, Cg);
        auto rg = poly_roots(fg.P.to_polynomial(bits));
        for (size_t i = 0; i < rg.size(); ++i)
          csv += std::to_string(g) + "," + std::to_string(i) + "," +
                 rg[i].re().to_string(20) + "," + rg[i].im().to_string(20) + "\n";
      }
      rep.body["trajectories_csv"] = csv;
    }

    rep.ok = exact_ok && resid_ok;
  } catch (const std::exception& e) {
    rep.body["failed_stage"] = stage;
    rep.body["error"] = e.what();
    rep.ok = false;
  }
  return rep;
}

RunReport run_lift(const Scenario& sc) {
  RunReport rep = roundtrip_impl(sc, true, true);
  if (!rep.ok) return rep;
  std::string stage = "lift";
  try {
    PrecisionContext ctx(sc.digits, sc.guard_digits);
    const mpfr_prec_t bits = ctx.bits();
    Real quad_tol(ctx, sc.quadrature_tol);
    Real deg_tol(ctx, sc.degeneracy_tol);

    SemiclassicalType t = build_type(poly_from_json(sc.A, ctx), poly_from_json(sc.B, ctx),
                                     sc.allow_nonprime, ctx);
    WeightedContourSet wcs = build_contours(t);
    Configuration cfg;
    for (const auto& p : rep.body["configuration"]["points"])
      cfg.points.push_back(complex_from_json(p, ctx));
    cfg.n = static_cast<int>(cfg.points.size());
    cfg.converged = true;
    cfg.residual_norm = Real(bits);
    wcs.s = weights_from_config(t, cfg, wcs, quad_tol);

    Polynomial P = Polynomial::from_roots(bits, cfg.points);
    Complex c(Real(ctx, sc.lift_c_re), Real(ctx, sc.lift_c_im));
    LiftedFunctional lf = lift_primality(t, wcs, P, c, sc.lift_K, quad_tol);
    json lj;
    lj["K"] = lf.K;
    lj["c"] = complex_to_json(c, 12);
    json st = json::array();
    for (const auto& v : lf.s_tilde) st.push_back(complex_to_json(v, 20));
    lj["s_tilde"] = st;
    json res = json::array();
    bool lift_ok = true;
    for (const auto& r : lf.residuals) {
      res.push_back(r.to_string(8));
      if (!(r < deg_tol * max(lf.scale, Real::with_prec(bits, 1L)))) lift_ok = false;
    }
    lj["residuals"] = res;
    lj["scale"] = lf.scale.to_string(8);
    rep.body["lift"] = lj;
    rep.ok = rep.ok && lift_ok;
  } catch (const std::exception& e) {
    rep.body["failed_stage"] = stage;
    rep.body["error"] = e.what();
    rep.ok = false;
  }
  return rep;
}

std::vector<RunReport> run_classical_suite(int digits) {
  std::vector<RunReport> out;
  PrecisionContext ctx(digits, 10);
  const mpfr_prec_t bits = ctx.bits();
  Real tol(ctx, "1e-40");

  struct Row {
    const char* name;
    std::vector<double> A;
    std::vector<double> B;
  };
  // Hermite with the self-consistent sign, Laguerre alpha = 0, Legendre
  std::vector<Row> rows{{"hermite", {0, 2}, {1}},
                        {"laguerre_alpha0", {-1, 1}, {0, 1}},
                        {"jacobi_00", {0, -2}, {-1, 0, 1}}};

  for (const auto& row : rows) {
    for (int n : {2, 5, 10}) {
      RunReport rep;
      rep.body["case"] = row.name;
      rep.body["n"] = n;
      rep.body["versions"] = versions_json();
      try {
        std::vector<Complex> ac, bc;
        for (double c : row.A) ac.emplace_back(ctx, c);
        for (double c : row.B) bc.emplace_back(ctx, c);
        SemiclassicalType t =
            build_type(Polynomial(bits, ac), Polynomial(bits, bc), false, ctx);
        SeedSpec seed;
        seed.jitter = 1e-3;
        seed.rng_seed = 7;
        Configuration cfg = solve(t, n, seed, tol);

        // oracle: Jacobi-matrix eigenvalues of the classical recurrences
        std::vector<Real> diag, off;
        if (std::string(row.name) == "hermite") {
          diag.assign(static_cast<size_t>(n), Real(bits));
          for (int k = 1; k < n; ++k) off.push_back(sqrt(Real(ctx, k / 2.0)));
        } else if (std::string(row.name) == "laguerre_alpha0") {
          for (int k = 0; k < n; ++k) diag.push_back(Real(ctx, static_cast<long>(2 * k + 1)));
          for (int k = 1; k < n; ++k) off.push_back(Real(ctx, static_cast<long>(k)));
        } else {
          diag.assign(static_cast<size_t>(n), Real(bits));
          for (int k = 1; k < n; ++k) {
            Real kk(ctx, static_cast<long>(k));
            off.push_back(kk / sqrt(kk * kk * 4L - Real(ctx, 1L)));
          }
        }
        auto oracle = symtridiag_eigenvalues(diag, off);
        std::vector<Real> got;
        for (const auto& z : cfg.points) got.push_back(z.re());
        std::sort(got.begin(), got.end());
        Real dev(bits), imag(bits);
        for (int i = 0; i < n; ++i) {
          dev = max(dev, abs(got[static_cast<size_t>(i)] - oracle[static_cast<size_t>(i)]));
          imag = max(imag, abs(cfg.points[static_cast<size_t>(i)].im()));
        }
        Real rmax(bits);
        for (const auto& r : residual(t, cfg.points)) rmax = max(rmax, abs(r));

        rep.body["converged"] = cfg.converged;
        rep.body["residual_norm"] = cfg.residual_norm.to_string(8);
        rep.body["oracle_deviation"] = dev.to_string(8);
        rep.body["max_imag"] = imag.to_string(8);
        rep.ok = cfg.converged && dev < Real(ctx, "1e-35") && rmax < tol;
      } catch (const std::exception& e) {
        rep.body["error"] = e.what();
        rep.ok = false;
      }
      out.push_back(std::move(rep));
    }
  }
  return out;
}

RunReport run_scenario(const Scenario& sc) {
  if (sc.pipeline == "roundtrip") return run_roundtrip(sc);
  if (sc.pipeline == "verify") return run_verify(sc);
  if (sc.pipeline == "solve") return run_solve(sc);
  if (sc.pipeline == "family") return run_family(sc);
  if (sc.pipeline == "lift") return run_lift(sc);
  throw std::invalid_argument("scenario: unknown pipeline '" + sc.pipeline + "'");
}

void write_outputs(const RunReport& rep, const Scenario& sc) {
  namespace fs = std::filesystem;
  std::string dir = sc.out_dir.empty() ? "." : sc.out_dir;
  fs::create_directories(dir);
  write_text_file(dir + "/report.json", rep.body.dump(2) + "\n");
  write_text_file(dir + "/timings.json", rep.timings.dump(2) + "\n");

  if (rep.body.contains("configuration")) {
    PrecisionContext ctx(sc.digits, sc.guard_digits);
    std::vector<Complex> pts;
    for (const auto& p : rep.body["configuration"]["points"])
      pts.push_back(complex_from_json(p, ctx));
    write_text_file(dir + "/zeros.csv", points_to_csv(pts));
    write_text_file(dir + "/zeros.svg", points_to_svg(pts));
  }
  if (rep.body.contains("moments")) {
    PrecisionContext ctx(sc.digits, sc.guard_digits);
    std::vector<Complex> mu;
    for (const auto& m : rep.body["moments"]) mu.push_back(complex_from_json(m, ctx));
    write_text_file(dir + "/moments.csv", moments_to_csv(mu));
  }
  if (rep.body.contains("trajectories_csv"))
    write_text_file(dir + "/trajectories.csv", rep.body["trajectories_csv"].get<std::string>());
  if (rep.body.contains("degeneracy_csv"))
    write_text_file(dir + "/degeneracy.csv", rep.body["degeneracy_csv"].get<std::string>());
  if (rep.body.contains("contours"))
    write_text_file(dir + "/contours.json", rep.body["contours"].dump(1) + "\n");
}

}  // namespace sbethe
