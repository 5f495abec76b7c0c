#pragma once

#include <string>
#include <vector>

#include "ssopt/history.hpp"
#include "ssopt/problem.hpp"
#include "ssopt/subspace_gd.hpp"
#include "ssopt/types.hpp"

namespace ssopt {

/// Diagnostic view of one iteration: the hidden true gradient next to what
/// the solver actually saw and estimated. Estimator fields are filled by
/// replaying the recorded observation stream through the window rule, which
/// reproduces the in-run state bit for bit.
struct RegretEntry {
  Vector grad;           // true gradient at the iterate
  Matrix sketch;         // effective basis used
  Vector responses;      // directional derivatives along the basis
  Vector ucb_direction;  // confidence-rule column; size 0 without one
  Vector estimate;       // window-regression gradient estimate in force
  Matrix C_inverse;      // design-matrix inverse in force
  double U = 0.0;        // gradient-norm bound in force
};

struct RegretTrace {
  std::vector<RegretEntry> entries;
  Vector final_grad;  // gradient at the final iterate
  int dim = 0;
  double lambda = 0.0;
  int memory = 0;
  bool exact_responses = true;   // false for model-based (derivative-free) runs
  bool has_estimator = false;    // estimator fields are populated
  bool unit_directions = true;   // every stored column has unit norm
};

/// Assembles a trace from a full-record run history, reading the true
/// gradient of each recorded iterate (diagnostic access only). When the run
/// used the confidence rule the estimator state is replayed as well.
RegretTrace build_regret_trace(const Problem& problem,
                               const RunHistory& history,
                               const GdConfig& config);

/// ||grad|| minus the norm of its projection onto span(S); 0 for grad = 0.
/// Always within [0, ||grad||]. Throws RankDeficient for dependent columns.
double instantaneous_regret(const Vector& grad, const Matrix& S);

/// Sum of instantaneous regrets over the trace.
double dynamic_regret(const RegretTrace& trace);

/// Total variation of the gradient sequence, including the step from the
/// last recorded iterate to the final one.
double total_variation(const RegretTrace& trace);

/// The closed-form regret ceiling: 2M sqrt(d(M+1)/lambda) V_K +
/// sqrt((8 lambda d sum(U_k^2)/M) log(1 + M/(lambda d))) sqrt(K).
double regret_bound(int d, double lambda, int M, double V_K,
                    const std::vector<double>& U_values, long K);

struct GradErrorCheck {
  long k = 0;
  std::string probe;  // "ucb", "estimate", "random"
  double lhs = 0.0;
  double rhs = 0.0;
};

struct GradErrorReport {
  std::vector<GradErrorCheck> checks;
  long violations = 0;
  double tolerance = 1e-8;
};

/// Verifies, for every iteration and a small probe set, that the estimator
/// error along a direction is within drift-plus-confidence:
/// |s^T(grad - g_k)| <= sqrt(d(M+1)/lambda) * (window gradient drift)
///                      + sqrt(lambda) ||grad|| ||s||_{C_k^{-1}}.
/// Requires a trace with exact responses and unit stored directions.
GradErrorReport check_gradient_error_bound(const RegretTrace& trace);

struct PotentialCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs
};

/// Accumulates ||s_j||^2 in the inverse of the sliding-window design matrix
/// (entry j-M-1 leaves when j-M-1 >= 1) and compares against the
/// (2kd/M) log(1 + M/(lambda d)) ceiling.
PotentialCheck check_potential_lemma(const std::vector<Vector>& directions,
                                     double lambda, int M, int d);

/// Both sides of the norm-gap versus inner-product-gap comparison for the
/// confidence column: recorded for diagnostics, deliberately not asserted.
struct FirstInequalityRecord {
  double norm_gap_sum = 0.0;   // dynamic regret
  double inner_gap_sum = 0.0;  // sum over k of (grad/||grad|| - s_k)^T grad
};
FirstInequalityRecord first_inequality_record(const RegretTrace& trace);

/// JSON report of per-check (k, probe, lhs, rhs, slack) plus the violation
/// count.
void write_bound_report(const GradErrorReport& report, std::ostream& out);

}  // namespace ssopt
