// Acceptance gate: one self-contained check per criterion, one PASS/FAIL
// line each, nonzero exit when anything failed. An optional argument
// restricts the run to a single criterion id (e.g. "AC-3"). Every tolerance
// is pinned here, next to the check that uses it.

#include <Eigen/Cholesky>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ssopt/bandit.hpp"
#include "ssopt/bench.hpp"
#include "ssopt/history.hpp"
#include "ssopt/pounders.hpp"
#include "ssopt/problem.hpp"
#include "ssopt/regret.hpp"
#include "ssopt/sketch.hpp"
#include "ssopt/subspace_gd.hpp"
#include "ssopt/types.hpp"

namespace fs = std::filesystem;
using ssopt::GdConfig;
using ssopt::Matrix;
using ssopt::Problem;
using ssopt::Rng;
using ssopt::RunHistory;
using ssopt::Vector;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2]
                    : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

// AC-1: pure confidence-rule descent on the ill-conditioned quadratic.
// Average dynamic regret must halve from K=500 to K=2000 and the measured
// regret must stay under the closed-form ceiling at every checkpoint.
Outcome ac1() {
  Problem problem = ssopt::make_problem("quad_ill", 50);
  GdConfig config;
  config.sketch_spec.p = 1;
  config.use_ucb = true;
  config.horizon = 2000;
  config.record_full = true;
  Rng rng(1);
  const RunHistory history = ssopt::run_subspace_gd(problem, config, rng);
  const ssopt::RegretTrace trace =
      ssopt::build_regret_trace(problem, history, config);
  const std::size_t K = trace.entries.size();
  if (K != 2000) return {false, "expected 2000 recorded iterations"};

  std::vector<double> regret_prefix(K + 1, 0.0), drift_prefix(K + 1, 0.0);
  std::vector<double> bounds_u;
  bounds_u.reserve(K);
  for (std::size_t k = 0; k < K; ++k) {
    const ssopt::RegretEntry& e = trace.entries[k];
    const Vector& s = e.sketch.col(0);
    const double realized = std::abs(s.dot(e.grad)) / s.norm();
    regret_prefix[k + 1] = regret_prefix[k] + (e.grad.norm() - realized);
    const Vector& next_grad =
        k + 1 < K ? trace.entries[k + 1].grad : trace.final_grad;
    drift_prefix[k + 1] = drift_prefix[k] + (next_grad - e.grad).norm();
    bounds_u.push_back(e.U);
  }
  // Self-check: the prefix accumulation must agree with the library total.
  const double library_total = ssopt::dynamic_regret(trace);
  if (std::abs(regret_prefix[K] - library_total) >
      1e-8 * std::max(1.0, library_total)) {
    return {false, "prefix regret disagrees with dynamic_regret"};
  }

  const double avg500 = regret_prefix[500] / 500.0;
  const double avg2000 = regret_prefix[2000] / 2000.0;
  bool pass = avg2000 <= 0.5 * avg500;
  std::ostringstream detail;
  detail << "D_K/K " << fmt(avg500) << " at 500 -> " << fmt(avg2000)
         << " at 2000";
  for (long cp : {500L, 1000L, 1500L, 2000L}) {
    const std::vector<double> u_prefix(bounds_u.begin(),
                                       bounds_u.begin() + cp);
    const double ceiling =
        ssopt::regret_bound(50, trace.lambda, trace.memory, drift_prefix[cp],
                            u_prefix, cp);
    if (regret_prefix[cp] > ceiling) {
      pass = false;
      detail << "; D_" << cp << " " << fmt(regret_prefix[cp])
             << " exceeds ceiling " << fmt(ceiling);
    }
  }
  if (pass) detail << "; under the ceiling at all checkpoints";
  return {pass, detail.str()};
}

// AC-2: every accepted backtracking step on quadratics with known L clears
// the (2*beta-1)/(2L) * ||projected gradient||^2 decrease floor.
Outcome ac2() {
  const double beta = 0.75;
  long accepted = 0;
  long violations = 0;
  double worst_slack = 1e300;
  const char* names[5] = {"sphere", "quad_cond10", "quad_cond100", "quad_ill",
                          "quad_rot"};
  for (int i = 0; i < 5; ++i) {
    Problem problem = ssopt::make_problem(names[i], 12);
    const double L = *problem.lipschitz();
    GdConfig config;
    config.beta = beta;
    config.sigma = 0.5;
    config.horizon = 201;
    config.sketch_spec.p = 3;
    config.record_full = true;
    Rng rng(100 + i);
    const RunHistory history = ssopt::run_subspace_gd(problem, config, rng);
    for (std::size_t k = 0; k < history.iterations.size(); ++k) {
      const auto& rec = history.iterations[k];
      if (rec.alpha <= 0.0) continue;
      const double f_next = k + 1 < history.iterations.size()
                                ? history.iterations[k + 1].f
                                : history.final_f;
      const double decrease = rec.f - f_next;
      const double floor = (2.0 * beta - 1.0) / (2.0 * L) *
                           rec.projected_gradient.squaredNorm();
      ++accepted;
      const double slack = decrease - floor;
      worst_slack = std::min(worst_slack, slack);
      if (slack < -1e-10) ++violations;
    }
  }
  std::ostringstream detail;
  detail << accepted << " accepted steps, " << violations
         << " below the floor, worst slack " << fmt(worst_slack);
  return {accepted >= 1000 && violations == 0, detail.str()};
}

// AC-3: the projector never inflates a vector, and reproduces in-span
// vectors to near machine precision.
Outcome ac3() {
  Rng rng(7);
  std::normal_distribution<double> normal(0.0, 1.0);
  long checked = 0;
  long inflation = 0;
  long span_misses = 0;
  for (int d : {3, 10, 50}) {
    const long reps = d == 3 ? 3334 : 3333;
    std::uniform_int_distribution<int> pick_p(1, d);
    for (long rep = 0; rep < reps; ++rep) {
      const int p = pick_p(rng);
      const Matrix S = ssopt::gaussian_sketch(d, p, rng).entries;
      Vector v(d);
      for (int i = 0; i < d; ++i) v(i) = normal(rng);
      const Vector Pv = ssopt::projection_apply(S, v);
      ++checked;
      if (v.dot(Pv) > v.squaredNorm() * (1.0 + 1e-12)) ++inflation;
      if (rep < 100) {
        Vector w(p);
        for (int i = 0; i < p; ++i) w(i) = normal(rng);
        const Vector in_span = S * w;
        const Vector proj = ssopt::projection_apply(S, in_span);
        if (std::abs(in_span.dot(proj) - in_span.squaredNorm()) >
            1e-10 * in_span.squaredNorm()) {
          ++span_misses;
        }
      }
    }
  }
  std::ostringstream detail;
  detail << checked << " random (S, v) pairs, " << inflation
         << " inflations, " << span_misses << " in-span mismatches";
  return {checked == 10000 && inflation == 0 && span_misses == 0,
          detail.str()};
}

// AC-4: the windowed elliptical potential ceiling over the full parameter
// grid, 100 random unit-vector sequences per cell.
Outcome ac4() {
  long cells_failed = 0;
  long sequences_failed = 0;
  std::map<double, long> failures_by_lambda;
  std::normal_distribution<double> normal(0.0, 1.0);
  int cell = 0;
  for (int d : {2, 5, 20}) {
    for (int M : {1, 5, 20}) {
      for (double lambda : {0.01, 1.0}) {
        ++cell;
        long bad = 0;
        for (int seq = 0; seq < 100; ++seq) {
          Rng rng(1000 * cell + seq);
          std::vector<Vector> dirs;
          dirs.reserve(100);
          for (int j = 0; j < 100; ++j) {
            Vector s(d);
            for (int i = 0; i < d; ++i) s(i) = normal(rng);
            dirs.push_back(s / s.norm());
          }
          const auto check =
              ssopt::check_potential_lemma(dirs, lambda, M, d);
          if (check.slack < -1e-9) ++bad;
        }
        if (bad > 0) {
          ++cells_failed;
          sequences_failed += bad;
          failures_by_lambda[lambda] += bad;
        }
      }
    }
  }
  std::ostringstream detail;
  detail << "18 cells x 100 sequences; " << cells_failed
         << " cells with violations (" << sequences_failed << " sequences";
  for (const auto& [lambda, count] : failures_by_lambda) {
    detail << ", " << count << " at lambda=" << lambda;
  }
  detail << ")";
  return {cells_failed == 0, detail.str()};
}

// AC-5: the drift-plus-confidence gradient error bound on 20 seeded pure
// confidence-rule runs over linear and quadratic objectives.
Outcome ac5() {
  long violations = 0;
  long checks = 0;
  for (int i = 0; i < 20; ++i) {
    const int d = 5 + (i % 16);
    Problem problem =
        i % 2 == 0 ? ssopt::make_problem("linear_slope", d)
                   : ssopt::make_problem(i % 4 == 1 ? "quad_cond10"
                                                    : "quad_cond100",
                                         d);
    GdConfig config;
    config.sketch_spec.p = 1;
    config.use_ucb = true;
    config.horizon = 50;
    config.record_full = true;
    Rng rng(200 + i);
    const RunHistory history = ssopt::run_subspace_gd(problem, config, rng);
    const ssopt::RegretTrace trace =
        ssopt::build_regret_trace(problem, history, config);
    const auto report = ssopt::check_gradient_error_bound(trace);
    violations += report.violations;
    checks += static_cast<long>(report.checks.size());
  }
  std::ostringstream detail;
  detail << "20 runs, " << checks << " probe checks, " << violations
         << " violations";
  return {violations == 0, detail.str()};
}

// AC-6: the selection subproblem solver against a 1e5-point angle grid at
// d=2, plus the two analytically solvable corners.
Outcome ac6() {
  Rng rng(6);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.1, 2.0);
  const int grid_points = 100000;
  long misses = 0;
  double worst_gap = 0.0;
  for (int inst = 0; inst < 200; ++inst) {
    ssopt::UcbState state = ssopt::ucb_init(2, unif(rng), 5, 0.8);
    Matrix A(2, 2);
    for (int i = 0; i < 4; ++i) A(i / 2, i % 2) = normal(rng);
    state.C_inverse = A * A.transpose() + 0.05 * Matrix::Identity(2, 2);
    state.g = Vector(2);
    state.g << normal(rng), normal(rng);
    const double U = std::abs(normal(rng)) + 0.01;
    const Vector s = ssopt::ucb_select(state, U);
    const double found = ssopt::ucb_objective(state, U, s);
    double grid_best = -1e300;
    for (int i = 0; i < grid_points; ++i) {
      const double theta = 2.0 * M_PI * i / grid_points;
      Vector c(2);
      c << std::cos(theta), std::sin(theta);
      grid_best = std::max(grid_best, ssopt::ucb_objective(state, U, c));
    }
    const double gap = (grid_best - found) / std::max(std::abs(grid_best),
                                                      1e-30);
    worst_gap = std::max(worst_gap, gap);
    if (gap > 1e-3) ++misses;
  }

  // U = 0 with a nonzero estimate: the exact answer is g/||g||.
  ssopt::UcbState flat = ssopt::ucb_init(2, 0.7, 5, 0.8);
  flat.g = Vector(2);
  flat.g << 3.0, -4.0;
  const Vector s0 = ssopt::ucb_select(flat, 0.0);
  const bool u0_exact = (s0 - flat.g / flat.g.norm()).norm() <= 1e-12;

  // g = 0: the score reduces to the ellipse width; the maximizer is the top
  // eigenvector of C_inverse and the value is sqrt(lambda)*U*sqrt(eig_max).
  ssopt::UcbState ridge = ssopt::ucb_init(2, 0.7, 5, 0.8);
  ridge.C_inverse = Matrix::Zero(2, 2);
  ridge.C_inverse(0, 0) = 2.0;
  ridge.C_inverse(1, 1) = 0.5;
  ridge.g = Vector::Zero(2);
  const double U_ridge = 1.3;
  const Vector s_ridge = ssopt::ucb_select(ridge, U_ridge);
  const double analytic = std::sqrt(0.7) * U_ridge * std::sqrt(2.0);
  const double got = ssopt::ucb_objective(ridge, U_ridge, s_ridge);
  const bool g0_exact =
      std::abs(got - analytic) <= 1e-10 * analytic &&
      std::abs(s_ridge(0)) >= 1.0 - 1e-8;

  std::ostringstream detail;
  detail << "200 instances, worst relative gap " << fmt(worst_gap) << ", "
         << misses << " misses; U=0 exact " << (u0_exact ? "yes" : "NO")
         << ", g=0 exact " << (g0_exact ? "yes" : "NO");
  return {misses == 0 && u0_exact && g0_exact, detail.str()};
}

// AC-7: incrementally maintained inverse vs dense inversion after 100
// windowed updates.
Outcome ac7() {
  const int d = 20;
  const int memory = 10;
  const double lambda = 1.0 / d;
  double worst = 0.0;
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int seed = 1; seed <= 20; ++seed) {
    Rng rng(seed);
    ssopt::UcbState state = ssopt::ucb_init(d, lambda, memory, 0.8);
    for (int step = 0; step < 100; ++step) {
      Vector s(d);
      for (int i = 0; i < d; ++i) s(i) = normal(rng);
      s /= s.norm();
      Matrix dirs(d, 1);
      dirs.col(0) = s;
      Vector response(1);
      response(0) = normal(rng);
      ssopt::ucb_update(state, dirs, response);
    }
    Matrix C = lambda * Matrix::Identity(d, d);
    for (const ssopt::WindowEntry& entry : state.window) {
      C += entry.directions * entry.directions.transpose();
    }
    const Matrix dense =
        Eigen::LLT<Matrix>(C).solve(Matrix::Identity(d, d));
    worst = std::max(worst,
                     (state.C_inverse - dense).cwiseAbs().maxCoeff());
  }
  std::ostringstream detail;
  detail << "20 seeds, worst max-entry error " << fmt(worst);
  return {worst <= 1e-8, detail.str()};
}

// AC-8: the built-in suite head-to-head at d=100 and d=1000. Median ratio
// over all cells positive, and at least 60% of per-problem medians positive,
// at each dimension.
Outcome ac8() {
  bool pass = true;
  std::ostringstream detail;
  for (int d : {100, 1000}) {
    ssopt::ExperimentConfig config;
    config.problems = ssopt::builtin_suite(d);
    config.solvers = {"gd:random", "gd:ucb"};
    config.seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    config.horizon = 1000;
    config.sketch_fraction = 0.01;
    config.taus = {0.1};
    config.write_histories = false;
    config.regret_dim_cap = 0;
    config.output_dir =
        (fs::temp_directory_path() / ("ssopt_acceptance_suite_d" +
                                      std::to_string(d)))
            .string();
    fs::remove_all(config.output_dir);
    const ssopt::ExperimentResult result = ssopt::run_experiment(config);
    if (!result.failures.empty()) {
      pass = false;
      detail << "[d=" << d << "] " << result.failures.size()
             << " run failures; ";
      continue;
    }
    std::map<std::string, std::vector<double>> by_problem;
    std::vector<double> all;
    for (const ssopt::RatioRow& row : result.ratios) {
      by_problem[row.problem].push_back(row.r);
      all.push_back(row.r);
    }
    const double overall = median(all);
    int positive = 0;
    for (auto& [problem, rs] : by_problem) {
      if (median(rs) > 0.0) ++positive;
    }
    const double fraction =
        static_cast<double>(positive) / static_cast<double>(by_problem.size());
    const bool dim_ok = overall > 0.0 && fraction >= 0.6;
    pass = pass && dim_ok;
    detail << "[d=" << d << "] median r " << fmt(overall) << " over "
           << all.size() << " cells, " << positive << "/" << by_problem.size()
           << " problem medians positive; ";
  }
  return {pass, detail.str()};
}

// AC-9: low-effective-dimension embeddings at D=100: the deterministic
// confidence-rule trust-region variant must match or beat the full-space
// variant at the final budget and from 10 budget units onward.
Outcome ac9() {
  const std::vector<std::string> ids = {
      "helical_valley@D=100,seed=1", "powell_singular@D=100,seed=2",
      "wood@D=100,seed=3", "trigonometric:10@D=100,seed=4",
      "broyden_tridiagonal:10@D=100,seed=5"};
  std::vector<ssopt::SolveTrace> traces;
  for (const std::string& id : ids) {
    for (const bool use_full : {false, true}) {
      Problem problem = ssopt::make_problem_from_id(id);
      ssopt::TrConfig config;
      config.variant =
          use_full ? ssopt::TrVariant::full_space : ssopt::TrVariant::ucb;
      config.budget = 50 * (100 + 2);
      config.solver_label = use_full ? "full" : "ucb";
      Rng rng(1);
      const RunHistory history =
          ssopt::run_ss_pounders(problem, config, rng);
      ssopt::SolveTrace trace;
      trace.solver = config.solver_label;
      trace.instance = id;
      trace.f0 = history.eval_curve.front().second;
      trace.curve = history.eval_curve;
      trace.total_evals = history.total_evals;
      traces.push_back(std::move(trace));
    }
  }
  const ssopt::DataProfile profile = ssopt::data_profile(traces, 0.1, 100);
  const auto pos = [&](const std::string& solver) {
    return static_cast<std::size_t>(
        std::find(profile.solvers.begin(), profile.solvers.end(), solver) -
        profile.solvers.begin());
  };
  const std::vector<double>& ucb = profile.fractions[pos("ucb")];
  const std::vector<double>& full = profile.fractions[pos("full")];
  const bool final_ok = ucb.back() >= full.back();
  long first_bad = -1;
  for (long b = 10; b <= profile.max_units; ++b) {
    if (ucb[static_cast<std::size_t>(b)] <
        full[static_cast<std::size_t>(b)]) {
      first_bad = b;
      break;
    }
  }
  std::ostringstream detail;
  detail << "final fractions ucb " << fmt(ucb.back()) << " vs full "
         << fmt(full.back()) << " at " << profile.max_units << " units";
  if (first_bad >= 0) detail << "; dominance lost at " << first_bad;
  return {final_ok && first_bad < 0, detail.str()};
}

// AC-10: hand-computed data-profile curves reproduced exactly, and
// monotonicity on real runs.
Outcome ac10() {
  using ssopt::SolveTrace;
  // Single instance solved exactly at one budget unit (d = 3, unit 5).
  {
    SolveTrace t;
    t.solver = "only";
    t.instance = "i";
    t.f0 = 10.0;
    t.curve = {{1, 10.0}, {5, 0.5}};
    const ssopt::DataProfile profile = ssopt::data_profile({t}, 0.5, 3);
    if (profile.max_units != 1 || profile.fractions[0][0] != 0.0 ||
        profile.fractions[0][1] != 1.0) {
      return {false, "unit-boundary case mismatch"};
    }
  }
  // Two solvers, two instances, hand-computed crossing (d = 2, unit 4).
  {
    const auto trace = [](const char* solver, const char* instance, double f0,
                          std::vector<std::pair<long, double>> curve) {
      SolveTrace t;
      t.solver = solver;
      t.instance = instance;
      t.f0 = f0;
      t.curve = std::move(curve);
      t.total_evals = t.curve.back().first;
      return t;
    };
    const std::vector<SolveTrace> traces = {
        trace("s1", "a", 100.0, {{1, 100.0}, {4, 10.0}, {8, 1.0}}),
        trace("s2", "a", 100.0, {{1, 100.0}, {2, 50.0}, {12, 0.0}}),
        trace("s1", "b", 20.0, {{1, 20.0}, {6, 18.0}}),
        trace("s2", "b", 20.0, {{1, 20.0}, {5, 2.0}})};
    const ssopt::DataProfile profile = ssopt::data_profile(traces, 0.1, 2);
    const std::vector<double> want_s1 = {0.0, 0.5, 0.5, 0.5};
    const std::vector<double> want_s2 = {0.0, 0.0, 0.5, 1.0};
    if (profile.max_units != 3 || profile.fractions[0] != want_s1 ||
        profile.fractions[1] != want_s2) {
      return {false, "hand-computed crossing mismatch"};
    }
  }
  // Real runs: profiles stay monotone within [0, 1].
  std::vector<SolveTrace> real;
  for (const char* name : {"sphere", "quad_cond10"}) {
    for (const bool ucb : {false, true}) {
      for (std::uint64_t seed : {1ULL, 2ULL}) {
        Problem problem = ssopt::make_problem(name, 6);
        GdConfig config;
        config.sketch_spec.p = 2;
        config.use_ucb = ucb;
        config.horizon = 30;
        Rng rng(seed);
        const RunHistory history =
            ssopt::run_subspace_gd(problem, config, rng);
        SolveTrace t;
        t.solver = ucb ? "ucb" : "random";
        t.instance = std::string(name) + "#" + std::to_string(seed);
        t.f0 = history.eval_curve.front().second;
        t.curve = history.eval_curve;
        t.total_evals = history.total_evals;
        real.push_back(std::move(t));
      }
    }
  }
  for (double tau : {0.1, 0.5}) {
    const ssopt::DataProfile profile = ssopt::data_profile(real, tau, 6);
    for (const std::vector<double>& curve : profile.fractions) {
      for (std::size_t b = 0; b < curve.size(); ++b) {
        if (curve[b] < 0.0 || curve[b] > 1.0) {
          return {false, "real-run profile leaves [0, 1]"};
        }
        if (b > 0 && curve[b] < curve[b - 1]) {
          return {false, "real-run profile decreases"};
        }
      }
    }
  }
  return {true, "synthetic curves exact, real-run profiles monotone"};
}

// AC-11: scaled Haar sketches satisfy S^T S = (d/p) I to 1e-10.
Outcome ac11() {
  double worst = 0.0;
  for (const auto& [d, p] : std::vector<std::pair<int, int>>{{10, 2},
                                                             {100, 10}}) {
    Rng rng(11);
    for (int draw = 0; draw < 100; ++draw) {
      const Matrix S = ssopt::haar_sketch(d, p, rng).entries;
      const Matrix gram = S.transpose() * S -
                          (static_cast<double>(d) / p) *
                              Matrix::Identity(p, p);
      worst = std::max(worst, gram.cwiseAbs().maxCoeff());
    }
  }
  std::ostringstream detail;
  detail << "200 draws, worst deviation " << fmt(worst);
  return {worst <= 1e-10, detail.str()};
}

struct Criterion {
  const char* id;
  double time_limit_s;
  std::function<Outcome()> fn;
};

}  // namespace

int main(int argc, char** argv) {
  const std::string filter = argc > 1 ? argv[1] : "";
  const std::vector<Criterion> criteria = {
      {"AC-1", 30.0, ac1},   {"AC-2", 10.0, ac2},   {"AC-3", 5.0, ac3},
      {"AC-4", 30.0, ac4},   {"AC-5", 30.0, ac5},   {"AC-6", 10.0, ac6},
      {"AC-7", 5.0, ac7},    {"AC-8", 900.0, ac8},  {"AC-9", 1200.0, ac9},
      {"AC-10", 1.0, ac10},  {"AC-11", 1.0, ac11},
  };
  bool all_pass = true;
  bool ran_any = false;
  for (const Criterion& criterion : criteria) {
    if (!filter.empty() && filter != criterion.id) continue;
    ran_any = true;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criterion.fn();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    const bool in_time = elapsed < criterion.time_limit_s;
    const bool pass = outcome.pass && in_time;
    all_pass = all_pass && pass;
    std::printf("%s %s (%.2f s%s): %s\n", criterion.id,
                pass ? "PASS" : "FAIL", elapsed,
                in_time ? "" : ", over time budget", outcome.detail.c_str());
    std::fflush(stdout);
  }
  if (!ran_any) {
    std::fprintf(stderr, "no criterion matches '%s'\n", filter.c_str());
    return 2;
  }
  return all_pass ? 0 : 1;
}
