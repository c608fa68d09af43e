#pragma once

#include <optional>
#include <string>

#include "sbethe/exactfam.hpp"
#include "sbethe/report.hpp"

namespace sbethe {

/// One batch job: type data, degree, precision, seeding, tolerances, and the
/// pipeline selector.  Parsed strictly: unknown keys are rejected.
struct Scenario {
  json A, B;  // coefficient arrays of [re, im] decimal strings
  int n = 0;
  int digits = 50;
  int guard_digits = 10;
  bool allow_nonprime = false;

  std::string seed_strategy = "classical-zeros";
  double seed_scale = 0.0;
  double seed_jitter = 1e-3;
  unsigned long rng_seed = 1;
  json user_points;  // for the user-list strategy / verify pipeline

  std::string solver_tol = "1e-40";
  std::string quadrature_tol = "1e-50";
  std::string degeneracy_tol = "1e-35";
  double degeneracy_gap = 1e30;

  std::string pipeline = "roundtrip";  // solve | verify | roundtrip | family | lift | classical
  std::string out_dir;

  // family extras (exact-rational data)
  std::vector<std::string> family_B_re, family_B_im;
  long family_k = 1;
  std::string family_C_re = "0", family_C_im = "0";
  int family_grid = 0;  // C-grid sweep size for root trajectories

  // lift extras
  std::string lift_c_re = "10", lift_c_im = "0";
  int lift_K = 1;
};

Scenario scenario_from_json(const json& j);
json scenario_to_json(const Scenario& sc);

struct RunReport {
  json body;          // deterministic report content
  json timings;       // wall-clock stage timings, written separately
  bool ok = false;
};

/// solve -> weights_from_config -> moments -> verify_degeneracy ->
/// heine_stieltjes_Q -> wronskian_check.  Failures are recorded per stage and
/// a partial report is still produced.
RunReport run_roundtrip(const Scenario& sc);
/// Same pipeline without the solve: verifies a user-supplied configuration.
RunReport run_verify(const Scenario& sc);
RunReport run_solve(const Scenario& sc);
RunReport run_family(const Scenario& sc);
RunReport run_lift(const Scenario& sc);

/// Hermite / Laguerre(0) / Jacobi(0,0) at n in {2, 5, 10}: solve, cross-check
/// against the Jacobi-matrix oracle zeros, verify the equilibrium residuals.
std::vector<RunReport> run_classical_suite(int digits);

RunReport run_scenario(const Scenario& sc);

/// Writes report.json, zeros.csv, zeros.svg, moments.csv (when present in the
/// report) and timings.json under sc.out_dir.
void write_outputs(const RunReport& rep, const Scenario& sc);

}  // namespace sbethe
