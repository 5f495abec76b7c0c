#pragma once

#include <deque>

#include "ssopt/types.hpp"

namespace ssopt {

/// One iteration's worth of observed directions and responses.
struct WindowEntry {
  Matrix directions;  // d x m, the sketch columns probed this iteration
  Vector responses;   // m, directional derivatives along those columns
};

/// Sliding-window ridge-regression state for direction selection. The design
/// matrix C accumulates outer products of every direction probed in the last
/// memory+1 iterations on top of a lambda ridge; its inverse is maintained
/// incrementally by rank-one up/downdates, with a dense rebuild fallback when
/// a downdate turns numerically unsafe (counted in dense_rebuilds).
struct UcbState {
  int dim = 0;
  double lambda = 1.0;
  int memory = 0;     // window covers memory+1 iterations
  double mu = 0.8;    // smoothing factor of the gradient-norm bound
  std::deque<WindowEntry> window;
  Matrix C_inverse;
  Vector b;           // sum of response-weighted directions in the window
  Vector g;           // C^{-1} b, the regularized gradient estimate
  double U = 0.0;     // smoothed gradient-norm upper bound
  bool bound_initialized = false;
  long dense_rebuilds = 0;

  // Knobs of the selection subproblem solver.
  int subproblem_iters = 200;
  double subproblem_step = 0.1;
};

UcbState ucb_init(int dim, double lambda, int memory, double mu);

/// Pushes one iteration of observations into the window, evicts anything
/// older than memory+1 iterations, and refreshes C_inverse, b and g.
void ucb_update(UcbState& state, const Matrix& directions,
                const Vector& responses);

/// Exponential moving average of (dim/p) * sketch_norm; the first call seeds
/// the average directly. Returns the new bound.
double update_gradient_bound(UcbState& state, double sketch_norm, int dim,
                             int p);

/// g^T s + sqrt(lambda) * U * ||s||_{C^{-1}}, the quantity ucb_select
/// maximizes over the unit sphere.
double ucb_objective(const UcbState& state, double U, const Vector& s);

/// Approximately maximizes ucb_objective over unit vectors: projected
/// gradient ascent from a fixed-seed start, then the best of that result,
/// g/||g||, a random probe set, and the (normalized) stored window
/// directions, with a short polish run when a candidate wins. Deterministic
/// for a given state. With U = 0 and g != 0 the exact answer g/||g|| is
/// returned directly.
Vector ucb_select(const UcbState& state, double U);

/// Scores each column (all must be unit) and returns the index of the best;
/// ties break toward the lowest index.
int ucb_select_from_columns(const UcbState& state, double U,
                            const Matrix& columns);

}  // namespace ssopt
