// Command-line front end: run benchmark campaigns, rebuild data profiles
// from stored histories, and verify the estimator bounds on live runs.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ssopt/bench.hpp"
#include "ssopt/history.hpp"
#include "ssopt/problem.hpp"
#include "ssopt/regret.hpp"
#include "ssopt/subspace_gd.hpp"

namespace fs = std::filesystem;
using ssopt::DataProfile;
using ssopt::SolveTrace;

namespace {

// Filenames written by run_experiment look like
// <problem>__<solver>__s<seed>.jsonl; the parts never contain "__".
bool split_stem(const std::string& stem, std::string& solver,
                std::string& instance) {
  const auto pos_seed = stem.rfind("__s");
  if (pos_seed == std::string::npos || pos_seed == 0) return false;
  const auto pos_solver = stem.rfind("__", pos_seed - 1);
  if (pos_solver == std::string::npos || pos_solver == pos_seed) return false;
  solver = stem.substr(pos_solver + 2, pos_seed - pos_solver - 2);
  instance = stem.substr(0, pos_solver) + "#" + stem.substr(pos_seed + 2);
  return !solver.empty();
}

SolveTrace trace_from_jsonl(const fs::path& path) {
  SolveTrace trace;
  if (!split_stem(path.stem().string(), trace.solver, trace.instance)) {
    throw std::runtime_error("cannot parse run name from " +
                             path.filename().string() +
                             " (expected problem__solver__s<seed>.jsonl)");
  }
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  double best = std::numeric_limits<double>::infinity();
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const nlohmann::json rec = nlohmann::json::parse(line);
    const long evals = rec.at("evals").get<long>();
    const double f = rec.at("f").get<double>();
    if (first) {
      trace.f0 = f;
      first = false;
    }
    trace.total_evals = std::max(trace.total_evals, evals);
    if (f < best) {
      best = f;
      if (!trace.curve.empty() && trace.curve.back().first == evals) {
        trace.curve.back().second = best;
      } else {
        trace.curve.emplace_back(evals, best);
      }
    } else if (trace.curve.empty()) {
      trace.curve.emplace_back(evals, f);
      best = f;
    }
  }
  if (trace.curve.empty()) {
    throw std::runtime_error("no iteration records in " + path.string());
  }
  return trace;
}

int cmd_run(const std::string& config_path, const std::string& out_override) {
  ssopt::ExperimentConfig config =
      ssopt::load_experiment_config(config_path);
  if (!out_override.empty()) config.output_dir = out_override;
  const ssopt::ExperimentResult result = ssopt::run_experiment(config);
  std::cout << "wrote " << result.files.size() << " files under "
            << config.output_dir << "\n";
  std::cout << "ratios: " << result.ratios.size() << "\n";
  if (!result.ratios.empty()) {
    std::vector<double> rs;
    for (const auto& row : result.ratios) rs.push_back(row.r);
    std::nth_element(rs.begin(), rs.begin() + rs.size() / 2, rs.end());
    std::cout << "median r: " << rs[rs.size() / 2] << "\n";
  }
  for (const std::string& failure : result.failures) {
    std::cerr << "failed: " << failure << "\n";
  }
  return 0;
}

int cmd_profile(const std::string& dir, int dim, double tau,
                const std::string& out_csv, const std::string& out_svg) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".jsonl") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    std::cerr << "no .jsonl histories in " << dir << "\n";
    return 1;
  }
  std::vector<SolveTrace> traces;
  for (const fs::path& f : files) traces.push_back(trace_from_jsonl(f));
  const DataProfile profile = ssopt::data_profile(traces, tau, dim);
  if (out_csv.empty()) {
    ssopt::write_profile_csv(profile, std::cout);
  } else {
    std::ofstream out(out_csv, std::ios::trunc);
    ssopt::write_profile_csv(profile, out);
    std::cout << "wrote " << out_csv << "\n";
  }
  if (!out_svg.empty()) {
    std::ofstream out(out_svg, std::ios::trunc);
    ssopt::write_profile_svg(profile, out);
    std::cout << "wrote " << out_svg << "\n";
  }
  return 0;
}

int cmd_verify(const std::vector<std::string>& problems, long horizon,
               std::uint64_t seed, const std::string& report_dir) {
  bool failed = false;
  if (!report_dir.empty()) fs::create_directories(report_dir);
  for (const std::string& id : problems) {
    ssopt::Problem problem = ssopt::make_problem_from_id(id);
    ssopt::GdConfig config;
    config.sketch_spec.p = 1;  // pure confidence rule: unit directions
    config.use_ucb = true;
    config.horizon = horizon;
    config.record_full = true;
    config.solver_label = "gd:ucb";
    ssopt::Rng rng(seed);
    const ssopt::RunHistory history =
        ssopt::run_subspace_gd(problem, config, rng);
    const ssopt::RegretTrace trace =
        ssopt::build_regret_trace(problem, history, config);

    const ssopt::GradErrorReport report =
        ssopt::check_gradient_error_bound(trace);
    std::vector<ssopt::Vector> directions;
    directions.reserve(trace.entries.size());
    std::vector<double> bounds_u;
    bounds_u.reserve(trace.entries.size());
    for (const ssopt::RegretEntry& entry : trace.entries) {
      directions.push_back(entry.sketch.col(0));
      bounds_u.push_back(entry.U);
    }
    const ssopt::PotentialCheck potential = ssopt::check_potential_lemma(
        directions, trace.lambda, trace.memory, trace.dim);
    const double dk = ssopt::dynamic_regret(trace);
    const double vk = ssopt::total_variation(trace);
    const double ceiling =
        ssopt::regret_bound(trace.dim, trace.lambda, trace.memory, vk,
                            bounds_u, static_cast<long>(trace.entries.size()));
    const ssopt::FirstInequalityRecord gaps =
        ssopt::first_inequality_record(trace);

    const bool grad_ok = report.violations == 0;
    const bool pot_ok = potential.slack >= -1e-9;
    const bool regret_ok = dk <= ceiling;
    failed = failed || !grad_ok || !pot_ok || !regret_ok;

    std::cout << id << ": gradient bound "
              << (grad_ok ? "ok" : "VIOLATED") << " ("
              << report.checks.size() << " checks, " << report.violations
              << " violations), potential slack " << potential.slack << " "
              << (pot_ok ? "ok" : "VIOLATED") << ", regret " << dk
              << " <= " << ceiling << " " << (regret_ok ? "ok" : "VIOLATED")
              << "\n";
    std::cout << "  norm-gap sum " << gaps.norm_gap_sum
              << ", inner-gap sum " << gaps.inner_gap_sum
              << " (recorded, not asserted)\n";

    if (!report_dir.empty()) {
      std::string stem;
      for (char c : id) {
        stem.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
      }
      const fs::path out_path =
          fs::path(report_dir) / ("bound_report_" + stem + ".json");
      std::ofstream out(out_path, std::ios::trunc);
      ssopt::write_bound_report(report, out);
      std::cout << "  wrote " << out_path.string() << "\n";
    }
  }
  return failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sketched-subspace optimization benchmark harness"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand(
      "run", "run an experiment campaign from a JSON config file");
  std::string config_path;
  std::string out_override;
  run->add_option("-c,--config", config_path,
                  "flat key-value JSON config (problems, solvers, seeds, "
                  "horizon, budget, sketch_fraction, taus, output_dir, "
                  "write_histories, regret_dim_cap)")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("-o,--output", out_override,
                  "override the config's output directory");

  auto* profile = app.add_subcommand(
      "profile", "build a data profile from a directory of .jsonl histories");
  std::string hist_dir;
  int dim = 0;
  double tau = 0.1;
  std::string out_csv, out_svg;
  profile->add_option("--histories", hist_dir, "directory of run histories")
      ->required()
      ->check(CLI::ExistingDirectory);
  profile->add_option("--dim", dim, "problem dimension d (budget unit d+2)")
      ->required()
      ->check(CLI::PositiveNumber);
  profile->add_option("--tau", tau, "solve tolerance in (0,1)")->capture_default_str();
  profile->add_option("--out", out_csv, "CSV output path (default stdout)");
  profile->add_option("--svg", out_svg, "also write an SVG chart here");

  auto* verify = app.add_subcommand(
      "verify", "run the estimator bound checks on live descent runs");
  std::vector<std::string> verify_problems = {"sphere:10", "quad_cond10:10",
                                              "quad_cond100:10"};
  long horizon = 50;
  std::uint64_t seed = 10;
  std::string report_dir;
  verify->add_option("--problem", verify_problems,
                     "problem ids (name[:dim][@D=<D>,seed=<s>])");
  verify->add_option("--horizon", horizon, "iterations per run")->capture_default_str();
  verify->add_option("--seed", seed, "random seed")->capture_default_str();
  verify->add_option("--report", report_dir,
                     "directory for per-problem bound reports (JSON)");

  auto* list = app.add_subcommand("list-problems",
                                  "print the built-in problem names");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, out_override);
    if (profile->parsed())
      return cmd_profile(hist_dir, dim, tau, out_csv, out_svg);
    if (verify->parsed())
      return cmd_verify(verify_problems, horizon, seed, report_dir);
    if (list->parsed()) {
      for (const std::string& name : ssopt::builtin_problem_names()) {
        std::cout << name << "\n";
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
