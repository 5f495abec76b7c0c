#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ssopt/types.hpp"

namespace ssopt {

/// One solver iteration. Scalar fields are always filled; the vector payload
/// (iterate, sketch, responses, projected gradient) is stored only when the
/// run was asked to keep full records, since at large dimension it dwarfs
/// everything else.
struct IterationRecord {
  long k = 0;           // 1-based iteration index
  double f = 0.0;       // objective at the iterate this iteration started from
  double alpha = 0.0;   // accepted step size (0 when no step was taken)
  long evals = 0;       // cumulative objective evaluations after the iteration
  long dirderivs = 0;   // cumulative directional derivatives after the iteration
  double step_norm = 0.0;  // size of the projected step actually applied

  bool has_vectors = false;
  Vector x;                   // iterate at the start of the iteration
  Matrix sketch;              // effective subspace basis used
  Vector responses;           // directional derivatives along the basis
  Vector projected_gradient;  // gradient projected onto the subspace
  double bound = 0.0;         // gradient-norm bound in force this iteration
};

struct RunHistory {
  std::string problem;
  std::string solver;
  std::uint64_t seed = 0;
  bool full_records = false;
  std::vector<IterationRecord> iterations;
  Vector final_x;
  double final_f = 0.0;
  long total_evals = 0;
  long total_dirderivs = 0;
  long rank_regenerations = 0;  // sketches redrawn after a rank failure
  long model_failures = 0;      // interpolation models that needed rescue

  /// Monotone improvement curve: (cumulative evaluation count, best value
  /// seen so far). Appended only when the best value improves, so it stays
  /// small even for long runs.
  std::vector<std::pair<long, double>> eval_curve;

  /// Tracks the improvement curve; meant to be called from an evaluation
  /// observer for every objective evaluation in order.
  void observe_eval(long count, double value);

  /// Best value achieved within the first `budget` evaluations; falls back
  /// to `fallback` when nothing was evaluated yet.
  double best_within(long budget, double fallback) const;
};

/// One JSON object per iteration with keys k, f, alpha, dirderivs, evals.
void write_history_jsonl(const RunHistory& history, std::ostream& out);
void write_history_jsonl(const RunHistory& history, const std::string& path);

}  // namespace ssopt
