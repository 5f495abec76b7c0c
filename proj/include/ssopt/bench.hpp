#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ssopt/types.hpp"

namespace ssopt {

/// One benchmark campaign: every (problem, seed, solver) cell is run with a
/// shared per-seed random stream so head-to-head comparisons are fair.
struct ExperimentConfig {
  std::vector<std::string> problems;  // ids, e.g. "sphere:100" or
                                      // "wood@D=100,seed=4"
  std::vector<std::string> solvers;   // "gd:random", "gd:ucb", "pounders:..."
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  long horizon = 1000;          // gradient-descent iteration count
  long budget = 0;              // trust-region evaluation budget; 0 = 50(d+2)
  double sketch_fraction = 0.01;  // p = ceil(fraction * d), at least 1
  std::vector<double> taus = {0.1};
  std::string output_dir = "bench_out";
  bool write_histories = true;
  // Regret diagnostics replay the estimator with dense d x d state; above
  // this dimension they are skipped to keep large campaigns affordable.
  int regret_dim_cap = 200;
};

/// Parses the flat key-value JSON config format (scalars, or lists given as
/// arrays or comma-separated strings). Unknown keys are an error.
ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::string& path);

/// The head-to-head benchmark suite at dimension d: smooth scalable
/// objectives instantiated at d, plus a low-effective-dimension embedding.
/// The confidence-rule estimator costs O(d^2) per iteration, so the suite
/// thins at d >= 1000 to keep a full 10-seed campaign affordable.
std::vector<std::string> builtin_suite(int d);

/// r = (f_rand - f_ucb) / max{f0 - f_rand, f0 - f_ucb, 1}. Positive when the
/// confidence-rule arm finished lower. Throws if either final exceeds f0.
double performance_ratio(double f0, double f_rand, double f_ucb);

/// Best-value-so-far curve of one solver on one instance. The curve holds
/// (cumulative evaluations, best value) pairs recorded at improvements only;
/// total_evals (0 = last curve entry) closes the budget axis.
struct SolveTrace {
  std::string solver;
  std::string instance;
  double f0 = 0.0;
  std::vector<std::pair<long, double>> curve;
  long total_evals = 0;
};

/// Fraction of instances solved per budget, budget counted in units of d+2
/// evaluations. fractions[i][b] is solver i's value at b units, b = 0..max.
struct DataProfile {
  std::vector<std::string> solvers;
  long max_units = 0;
  std::vector<std::vector<double>> fractions;
};

/// An instance counts as solved at the first evaluation where
/// f0 - f >= (1 - tau)(f0 - fL), with fL the best value any solver found on
/// that instance. Requires every solver to cover every instance with one
/// trace and a consistent f0.
DataProfile data_profile(const std::vector<SolveTrace>& traces, double tau,
                         int d);

/// CSV with header "solver,budget_units,fraction".
void write_profile_csv(const DataProfile& profile, std::ostream& out);
/// Self-contained step-curve chart, one path per solver.
void write_profile_svg(const DataProfile& profile, std::ostream& out);

struct RatioRow {
  std::string problem;
  std::uint64_t seed = 0;
  double r = 0.0;
};

struct ExperimentResult {
  std::vector<RatioRow> ratios;
  std::map<double, DataProfile> profiles;  // keyed by tau
  std::vector<std::string> failures;       // "cell: error message"
  std::vector<std::string> files;          // paths written, output-dir relative
};

/// Runs the full campaign and writes per-run JSON-lines histories, per-run
/// improvement curves, ratios.csv, one profile CSV/SVG per tau, a regret
/// diagnostics section, and report.json. Every file is written atomically;
/// run failures are recorded and the campaign continues.
ExperimentResult run_experiment(const ExperimentConfig& config);

}  // namespace ssopt
