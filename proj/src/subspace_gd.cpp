#include "ssopt/subspace_gd.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ssopt/bandit.hpp"

namespace ssopt {
namespace {

void check_config(const GdConfig& config) {
  if (!(config.beta > 0.0 && config.beta < 1.0)) {
    throw std::invalid_argument("GdConfig: beta must lie in (0,1)");
  }
  if (!(config.sigma > 0.0)) {
    throw std::invalid_argument("GdConfig: sigma must be positive");
  }
  if (config.horizon < 1) {
    throw std::invalid_argument("GdConfig: horizon must be >= 1");
  }
  if (config.max_backtracks < 1) {
    throw std::invalid_argument("GdConfig: max_backtracks must be >= 1");
  }
  if (!(config.mu >= 0.0 && config.mu <= 1.0)) {
    throw std::invalid_argument("GdConfig: mu must lie in [0,1]");
  }
}

std::string derive_label(const GdConfig& config) {
  if (!config.solver_label.empty()) return config.solver_label;
  std::ostringstream label;
  label << (config.use_ucb ? "gd-ucb:" : "gd-random:")
        << to_string(config.sketch_spec);
  return label.str();
}

}  // namespace

StepResult backtracking_step(Problem& problem, const Vector& x,
                             const Vector& direction, double sigma,
                             double beta, int cap, std::optional<double> fx,
                             double accept_tolerance) {
  if (!(sigma > 0.0)) {
    throw std::invalid_argument("backtracking_step: sigma must be positive");
  }
  if (!(beta > 0.0 && beta < 1.0)) {
    throw std::invalid_argument("backtracking_step: beta must lie in (0,1)");
  }
  if (cap < 1) {
    throw std::invalid_argument("backtracking_step: cap must be >= 1");
  }
  const double dir_sq = direction.squaredNorm();
  if (!(dir_sq > 0.0) || !direction.allFinite()) {
    throw std::invalid_argument("backtracking_step: direction must be nonzero");
  }

  long evals_used = 0;
  double f0 = 0.0;
  if (fx.has_value()) {
    f0 = *fx;
  } else {
    f0 = problem.evaluate(x);
    ++evals_used;
  }

  double alpha = 1.0;
  for (int j = 0; j <= cap; ++j) {
    const Vector trial = x - alpha * direction;
    const double f_trial = problem.evaluate(trial);
    ++evals_used;
    if (f_trial < f0 - sigma * alpha * dir_sq + accept_tolerance) {
      return {trial, f_trial, alpha, evals_used};
    }
    alpha *= beta;
  }
  throw StepFailure(evals_used,
                    "backtracking_step: no sufficient decrease within cap");
}

RunHistory run_subspace_gd(Problem& problem, const GdConfig& config,
                           Rng& rng) {
  check_config(config);
  const int d = problem.dim();
  const int p = config.sketch_spec.p;
  if (p > d) {
    throw std::invalid_argument("run_subspace_gd: sketch size exceeds dim");
  }

  RunHistory history;
  history.problem = problem.name();
  history.solver = derive_label(config);
  history.full_records = config.record_full;
  history.iterations.reserve(static_cast<std::size_t>(config.horizon));

  problem.reset_counters();
  problem.set_eval_observer(
      [&history](long count, double value) { history.observe_eval(count, value); });
  // The solver sees the objective only through evaluations and sketched
  // directional derivatives; a full gradient read anywhere below is a bug.
  GradientAccessLock oracle_guard(problem);

  const double lambda = config.lambda > 0.0 ? config.lambda : 1.0 / d;
  const int memory = config.memory >= 0 ? config.memory : d / std::max(p, 1);
  UcbState ucb;
  if (config.use_ucb) ucb = ucb_init(d, lambda, memory, config.mu);

  Vector x = problem.start_point();
  double fx = problem.evaluate(x);

  for (long k = 1; k <= config.horizon; ++k) {
    IterationRecord rec;
    rec.k = k;
    rec.f = fx;
    rec.bound = config.use_ucb ? ucb.U : 0.0;
    if (config.record_full) {
      rec.has_vectors = true;
      rec.x = x;
    }

    Matrix S;
    Vector responses;
    Vector pg;
    for (int attempt = 0;; ++attempt) {
      // Both variants consume one full sketch draw per iteration, keeping
      // their random streams aligned for head-to-head comparisons; the UCB
      // variant replaces the last column by the confidence-rule choice.
      Matrix S_draw = draw_sketch(config.sketch_spec, d, rng).entries;
      if (config.use_ucb) {
        S.resize(d, p);
        if (p > 1) S.leftCols(p - 1) = S_draw.leftCols(p - 1);
        S.col(p - 1) = ucb_select(ucb, ucb.U);
      } else {
        S = std::move(S_draw);
      }
      try {
        responses = problem.sketched_gradient(x, S);
        pg = responses.isZero(0.0)
                 ? Vector(Vector::Zero(d))
                 : projection_from_responses(S, responses);
        break;
      } catch (const RankDeficient&) {
        ++history.rank_regenerations;
        if (attempt >= 4) throw;
      }
    }

    const double pg_norm = pg.norm();
    if (pg_norm > 0.0) {
      StepResult step =
          backtracking_step(problem, x, pg, config.sigma, config.beta,
                            config.max_backtracks, fx,
                            config.accept_tolerance);
      x = std::move(step.x);
      fx = step.f;
      rec.alpha = step.alpha;
      rec.step_norm = step.alpha * pg_norm;
    }
    // pg = 0 means the gradient is orthogonal to this subspace (or zero);
    // the iterate stands and alpha is recorded as 0.

    if (config.use_ucb) {
      ucb_update(ucb, S, responses);
      update_gradient_bound(ucb, responses.norm(), d, p);
    }

    rec.evals = problem.eval_count();
    rec.dirderivs = problem.dirderiv_count();
    if (config.record_full) {
      rec.sketch = std::move(S);
      rec.responses = std::move(responses);
      rec.projected_gradient = std::move(pg);
    }
    history.iterations.push_back(std::move(rec));
  }

  history.final_x = x;
  history.final_f = fx;
  history.total_evals = problem.eval_count();
  history.total_dirderivs = problem.dirderiv_count();
  problem.set_eval_observer(nullptr);
  return history;
}

}  // namespace ssopt
