#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>

#include "CLI11.hpp"
#include "sbethe/pipeline.hpp"

namespace {

sbethe::Scenario load_scenario(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open scenario file: " + path);
  sbethe::json j = sbethe::json::parse(f);
  return sbethe::scenario_from_json(j);
}

int default_digits() {
  if (const char* env = std::getenv("SBETHE_DIGITS")) {
    int d = std::atoi(env);
    if (d >= 15) return d;
  }
  return 50;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sbethe: high-precision Stieltjes-Bethe equilibria and degenerate "
               "semiclassical orthogonal polynomials"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir;
  int digits = 0;
  std::string tol;
  unsigned long rng_seed = 0;
  bool have_seed = false;

  auto add_common = [&](CLI::App* cmd, bool needs_file) {
    if (needs_file)
      cmd->add_option("scenario", scenario_path, "scenario JSON file")->required();
    cmd->add_option("--digits", digits, "decimal working digits (default 50 or SBETHE_DIGITS)");
    cmd->add_option("--tol", tol, "solver tolerance, decimal string");
    cmd->add_option("--seed", rng_seed, "rng seed override")->each([&](const std::string&) {
      have_seed = true;
    });
    cmd->add_option("--out", out_dir, "output directory");
  };

  CLI::App* c_solve = app.add_subcommand("solve", "solve the equilibrium equations");
  CLI::App* c_round = app.add_subcommand("roundtrip", "solve, recover weights, verify degeneracy");
  CLI::App* c_verify = app.add_subcommand("verify", "verify a supplied configuration");
  CLI::App* c_classical = app.add_subcommand("classical", "classical-row cross-check suite");
  CLI::App* c_family = app.add_subcommand("family", "exact one-parameter family checks");
  CLI::App* c_lift = app.add_subcommand("lift", "roundtrip plus functional lifting");
  add_common(c_solve, true);
  add_common(c_round, true);
  add_common(c_verify, true);
  add_common(c_classical, false);
  add_common(c_family, true);
  add_common(c_lift, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(c_classical)) {
      int d = digits > 0 ? digits : default_digits();
      auto reports = sbethe::run_classical_suite(d);
      bool all_ok = true;
      sbethe::json body = sbethe::json::array();
      for (const auto& r : reports) {
        all_ok = all_ok && r.ok;
        std::cout << (r.ok ? "[PASS] " : "[FAIL] ") << r.body["case"].get<std::string>()
                  << " n=" << r.body["n"].get<int>() << "\n";
        body.push_back(r.body);
      }
      if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        sbethe::write_text_file(out_dir + "/report.json", body.dump(2) + "\n");
      }
      return all_ok ? 0 : 1;
    }

    if (std::filesystem::is_directory(scenario_path)) {
      // batch mode: every *.json in the directory, run concurrently
      std::vector<std::string> files;
      for (const auto& e : std::filesystem::directory_iterator(scenario_path))
        if (e.path().extension() == ".json") files.push_back(e.path().string());
      std::sort(files.begin(), files.end());
      std::vector<std::future<std::pair<std::string, sbethe::RunReport>>> jobs;
      for (const auto& f : files)
        jobs.push_back(std::async(std::launch::async, [&, f] {
          sbethe::Scenario sc = load_scenario(f);
          if (digits > 0) sc.digits = digits;
          if (!tol.empty()) sc.solver_tol = tol;
          if (have_seed) sc.rng_seed = rng_seed;
          std::string stem = std::filesystem::path(f).stem().string();
          sc.out_dir = (out_dir.empty() ? std::string("out") : out_dir) + "/" + stem;
          sbethe::RunReport rep = sbethe::run_scenario(sc);
          sbethe::write_outputs(rep, sc);
          return std::make_pair(stem, std::move(rep));
        }));
      bool all_ok = true;
      for (auto& j : jobs) {
        auto [stem, rep] = j.get();
        all_ok = all_ok && rep.ok;
        std::cout << (rep.ok ? "[PASS] " : "[FAIL] ") << stem << "\n";
      }
      return all_ok ? 0 : 1;
    }

    sbethe::Scenario sc = load_scenario(scenario_path);
    if (app.got_subcommand(c_solve)) sc.pipeline = "solve";
    if (app.got_subcommand(c_round)) sc.pipeline = "roundtrip";
    if (app.got_subcommand(c_verify)) sc.pipeline = "verify";
    if (app.got_subcommand(c_family)) sc.pipeline = "family";
    if (app.got_subcommand(c_lift)) sc.pipeline = "lift";
    if (digits > 0) sc.digits = digits;
    else if (sc.digits <= 0) sc.digits = default_digits();
    if (!tol.empty()) sc.solver_tol = tol;
    if (have_seed) sc.rng_seed = rng_seed;
    if (!out_dir.empty()) sc.out_dir = out_dir;

    sbethe::RunReport rep = sbethe::run_scenario(sc);
    sbethe::write_outputs(rep, sc);
    std::cout << (rep.ok ? "[PASS] " : "[FAIL] ") << sc.pipeline << "\n";
    if (rep.body.contains("error"))
      std::cout << "  stage " << rep.body["failed_stage"].get<std::string>() << ": "
                << rep.body["error"].get<std::string>() << "\n";
    return rep.ok ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
