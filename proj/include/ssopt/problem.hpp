#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ssopt/types.hpp"

namespace ssopt {

/// Thrown when the exact-gradient diagnostic is called while a solver holds
/// the oracle lock. Solver code paths only ever see function values and
/// sketched directional derivatives.
struct OracleViolation : std::logic_error {
  using std::logic_error::logic_error;
};

/// Rotation metadata attached to problems produced by
/// embed_low_effective_dim.
struct EmbeddingInfo {
  int base_dim = 0;
  Matrix rotation;  // D x D orthogonal
  std::uint64_t seed = 0;
};

/// A smooth objective with a hidden exact gradient. The gradient backs two
/// oracles: sketched_gradient simulates a forward-mode directional-derivative
/// oracle (charged per column), and gradient() is a diagnostics-only accessor
/// that is disabled while a GradientAccessLock is alive.
class Problem {
 public:
  using ObjectiveFn = std::function<double(const Vector&)>;
  using GradientFn = std::function<Vector(const Vector&)>;
  // Called after every evaluation with (eval_count, value); used by run
  // harnesses to record best-value-by-evaluation curves.
  using EvalObserver = std::function<void(long, double)>;

  Problem(std::string name, int dim, Vector x0, ObjectiveFn f, GradientFn g,
          std::optional<double> lipschitz = std::nullopt,
          std::optional<double> gradient_bound = std::nullopt);

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }
  const Vector& start_point() const { return x0_; }
  std::optional<double> lipschitz() const { return lipschitz_; }
  std::optional<double> gradient_bound() const { return gradient_bound_; }

  /// f(x). Charges one evaluation.
  double evaluate(const Vector& x);

  /// S^T grad f(x) for a d x p sketch S. Charges p directional derivatives.
  Vector sketched_gradient(const Vector& x, const Matrix& S);

  /// Exact gradient, diagnostics only. Throws OracleViolation while locked.
  Vector gradient(const Vector& x) const;

  long eval_count() const { return eval_count_; }
  long dirderiv_count() const { return dirderiv_count_; }
  void reset_counters();

  void set_eval_observer(EvalObserver obs) { observer_ = std::move(obs); }

  const std::optional<EmbeddingInfo>& embedding() const { return embedding_; }
  void set_embedding(EmbeddingInfo info) { embedding_ = std::move(info); }

 private:
  friend class GradientAccessLock;
  friend Problem embed_low_effective_dim(const Problem&, int, std::uint64_t);

  void check_point(const Vector& x) const;

  std::string name_;
  int dim_;
  Vector x0_;
  ObjectiveFn f_;
  GradientFn grad_;
  std::optional<double> lipschitz_;
  std::optional<double> gradient_bound_;
  std::optional<EmbeddingInfo> embedding_;
  long eval_count_ = 0;
  long dirderiv_count_ = 0;
  int gradient_locks_ = 0;
  EvalObserver observer_;
};

/// RAII oracle-capability lock. While at least one lock is alive on a
/// problem, Problem::gradient throws; sketched access stays available.
class GradientAccessLock {
 public:
  explicit GradientAccessLock(Problem& p) : p_(&p) { ++p_->gradient_locks_; }
  ~GradientAccessLock() { --p_->gradient_locks_; }
  GradientAccessLock(const GradientAccessLock&) = delete;
  GradientAccessLock& operator=(const GradientAccessLock&) = delete;

 private:
  Problem* p_;
};

/// Hides a low-dimensional objective inside ambient_dim coordinates through a
/// seeded random rotation Q: the result evaluates the base objective on the
/// first base-dim entries of Q x. Minimum value and Lipschitz constant carry
/// over; counters start fresh.
Problem embed_low_effective_dim(const Problem& base, int ambient_dim,
                                std::uint64_t seed);

/// Names accepted by make_problem.
std::vector<std::string> builtin_problem_names();

/// Instantiates a built-in by name. dim == 0 picks the problem's default
/// dimension; fixed-dimension problems reject any other value.
Problem make_problem(const std::string& name, int dim = 0);

/// Parses "name", "name:dim", or "name[:dim]@D=<D>,seed=<s>" ids.
Problem make_problem_from_id(const std::string& id);

}  // namespace ssopt
