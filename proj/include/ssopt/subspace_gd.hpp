#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "ssopt/history.hpp"
#include "ssopt/problem.hpp"
#include "ssopt/sketch.hpp"
#include "ssopt/types.hpp"

namespace ssopt {

/// Raised when no backtracking trial satisfies the sufficient-decrease test
/// within the cap. Usually means the smoothness assumption is violated or
/// the cap is too small for the local Lipschitz constant.
class StepFailure : public std::runtime_error {
 public:
  StepFailure(long trials_used, const std::string& what)
      : std::runtime_error(what), trials(trials_used) {}
  long trials;
};

struct GdConfig {
  double beta = 0.5;        // backtracking factor
  double sigma = 1e-8;      // sufficient-decrease coefficient
  long horizon = 1000;      // iteration count K
  SketchSpec sketch_spec;   // per-iteration random subspace
  bool use_ucb = false;
  int max_backtracks = 60;  // alpha bottoms out near 1e-18 at beta = 0.5

  // Sliding-window estimator parameters; non-positive lambda means 1/d and
  // negative memory means d/p, the experiment defaults.
  double lambda = 0.0;
  int memory = -1;
  double mu = 0.8;

  // Replaces the strict acceptance test f+ < f - sigma*alpha*||d||^2 by a
  // comparison slackened by this amount; the theory-facing suites need the
  // non-strict variant on exact arithmetic edge cases.
  double accept_tolerance = 0.0;

  bool record_full = false;  // keep iterates/sketches in the history
  std::string solver_label;  // history label; derived from flags when empty
};

struct StepResult {
  Vector x;          // accepted iterate
  double f;          // objective there
  double alpha;      // accepted step size
  long evals_used;   // trials charged, plus one when fx was not supplied
};

/// Backtracking line search along -direction: alpha = beta^j for the
/// smallest j in {0..cap} with f(x - alpha*direction) < f(x) -
/// sigma*alpha*||direction||^2 (+ tolerance). Each trial costs one
/// evaluation; pass fx when f(x) is already known to avoid one more.
StepResult backtracking_step(Problem& problem, const Vector& x,
                             const Vector& direction, double sigma,
                             double beta, int cap,
                             std::optional<double> fx = std::nullopt,
                             double accept_tolerance = 0.0);

/// Iterative subspace descent: each iteration draws a fresh random sketch,
/// probes the directional-derivative oracle along its columns, steps along
/// the projected gradient, and (optionally) fuses in one direction chosen by
/// the sliding-window upper-confidence rule in place of the last random
/// column. The full gradient is never read. Counters on `problem` are reset
/// at entry.
RunHistory run_subspace_gd(Problem& problem, const GdConfig& config, Rng& rng);

}  // namespace ssopt
