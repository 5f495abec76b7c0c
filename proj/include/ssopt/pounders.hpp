#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "ssopt/bandit.hpp"
#include "ssopt/history.hpp"
#include "ssopt/problem.hpp"
#include "ssopt/types.hpp"

namespace ssopt {

/// Evaluated points with their objective values, insertion ordered. The bank
/// never stores two copies of the same point: add() reports whether the pair
/// was actually kept.
class PointBank {
 public:
  /// Appends (point, value); returns false (and keeps nothing) when an
  /// existing point lies within 1e-14 of it.
  bool add(const Vector& point, double value);

  int size() const { return static_cast<int>(points_.size()); }
  const Vector& point(int i) const { return points_.at(i); }
  double value(int i) const { return values_.at(i); }

  /// Index of the first point within 1e-14 of p, or -1.
  int find(const Vector& p) const;

 private:
  std::vector<Vector> points_;
  std::vector<double> values_;
};

struct SubspaceSplit {
  Matrix S;       // d x m, orthonormal columns spanning accepted directions
  Matrix S_perp;  // d x (d-m), orthonormal basis of the complement
  Matrix Q;       // [S, S_perp], orthogonal
};

/// Greedy subspace identification from evaluation history: a bank point
/// contributes a direction iff it lies within c*delta of x and the residual
/// of its scaled displacement against the span built so far has norm at
/// least theta1. Insertion order; stops once the span fills the space.
SubspaceSplit identify_initial_subspace(const Vector& x, const PointBank& bank,
                                        double delta, double c, double theta1);

/// Confidence-rule pick restricted to the columns of S_perp. Thin wrapper
/// over ucb_select_from_columns; callers must skip it when S_perp is empty.
Vector select_geometry_direction(const UcbState& state, double U,
                                 const Matrix& S_perp);

/// Quadratic interpolation model on the affine subspace x + span(basis):
/// value(z) = constant + linear.z + z.quadratic.z / 2 for subspace
/// coordinates z.
struct SubspaceModel {
  Matrix basis;      // d x m, orthonormal
  Vector center;     // full-space incumbent the model is anchored at
  double constant = 0.0;
  Vector linear;     // m, equals the model gradient at z = 0
  Matrix quadratic;  // m x m, symmetric

  double value(const Vector& z) const;
};

/// Raised when an interpolation model cannot be built from the current bank
/// (too few usable points, degenerate geometry, or a fit that fails to
/// reproduce its own data). Callers recover by adding geometry points or
/// shrinking the radius.
struct ModelBuildFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Builds a minimum-Frobenius-norm quadratic through the incumbent and the
/// nearest bank points that lie on the affine subspace within 2*c*delta
/// (projected distance, newest-first on ties, capped at the quadratic
/// interpolation dimension). Throws ModelBuildFailure when fewer than
/// cols(S)+1 usable points exist or the fit degenerates.
SubspaceModel build_subspace_model(const PointBank& bank, const Vector& x,
                                   const Matrix& S, double delta, double c);

/// Minimizes the model over the ball ||z|| <= delta: exact eigenvalue-based
/// solve with a Cauchy-point fallback, so the returned point never predicts
/// less decrease than the Cauchy point.
Vector solve_trust_region_subproblem(const SubspaceModel& model, double delta);

enum class TrVariant { ucb, random_only, ucb_plus_random, full_space };

struct TrConfig {
  double eta1 = 0.1;    // acceptance threshold on rho
  double eta2 = 0.01;   // model-gradient threshold for radius growth
  double nu1 = 0.5;     // shrink factor
  double nu2 = 2.0;     // growth factor
  double delta0 = 0.0;     // <= 0: 0.1 * max(1, ||x0||_inf)
  double delta_max = 0.0;  // <= 0: 1e3 * delta0
  double c = 10.0;         // history-admission radius multiple, >= 1
  double theta1 = 1e-3;    // minimal fresh component, in (0, 1/c]
  int p_extra = -1;        // random directions per iteration; < 0: by variant
  TrVariant variant = TrVariant::ucb;
  long budget = 0;  // max objective evaluations, required

  // Confidence-estimator knobs (ucb and ucb_plus_random variants).
  double lambda = 0.0;  // <= 0: 1/d
  int memory = -1;      // < 0: d
  double mu = 0.8;

  bool record_full = false;
  std::string solver_label;  // empty: derived from the variant
};

const char* to_string(TrVariant variant);
TrVariant parse_tr_variant(const std::string& text);

/// Derivative-free subspace trust-region solver. Each iteration identifies a
/// subspace from the evaluation bank, augments it with a confidence-rule
/// and/or random direction (per variant), evaluates those geometry points,
/// fits a subspace quadratic, and takes a trust-region step. Never touches
/// the gradient oracle. Stops when the evaluation budget is exhausted.
RunHistory run_ss_pounders(Problem& problem, const TrConfig& config, Rng& rng);

}  // namespace ssopt
