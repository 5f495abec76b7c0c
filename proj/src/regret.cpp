#include "ssopt/regret.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <ostream>
#include <random>
#include <stdexcept>

#include "json.hpp"
#include "ssopt/bandit.hpp"
#include "ssopt/sketch.hpp"

namespace ssopt {

RegretTrace build_regret_trace(const Problem& problem,
                               const RunHistory& history,
                               const GdConfig& config) {
  if (!history.full_records) {
    throw std::invalid_argument(
        "build_regret_trace: history lacks full records");
  }
  const int d = problem.dim();
  RegretTrace trace;
  trace.dim = d;
  trace.lambda = config.lambda > 0.0 ? config.lambda : 1.0 / d;
  trace.memory = config.memory >= 0
                     ? config.memory
                     : d / std::max(config.sketch_spec.p, 1);
  trace.has_estimator = config.use_ucb;
  trace.entries.reserve(history.iterations.size());

  UcbState replay;
  if (config.use_ucb) {
    replay = ucb_init(d, trace.lambda, trace.memory, config.mu);
  }

  for (const IterationRecord& rec : history.iterations) {
    if (!rec.has_vectors) {
      throw std::invalid_argument(
          "build_regret_trace: iteration lacks vector payload");
    }
    RegretEntry entry;
    entry.grad = problem.gradient(rec.x);
    entry.sketch = rec.sketch;
    entry.responses = rec.responses;
    if (config.use_ucb) {
      // State in force when this iteration selected its direction.
      entry.estimate = replay.g;
      entry.C_inverse = replay.C_inverse;
      entry.U = replay.U;
      entry.ucb_direction = rec.sketch.col(rec.sketch.cols() - 1);
      ucb_update(replay, rec.sketch, rec.responses);
      update_gradient_bound(replay, rec.responses.norm(), d,
                            config.sketch_spec.p);
    }
    for (int j = 0; j < entry.sketch.cols(); ++j) {
      if (std::abs(entry.sketch.col(j).norm() - 1.0) > 1e-10) {
        trace.unit_directions = false;
      }
    }
    trace.entries.push_back(std::move(entry));
  }
  trace.final_grad = problem.gradient(history.final_x);
  return trace;
}

double instantaneous_regret(const Vector& grad, const Matrix& S) {
  const double grad_norm = grad.norm();
  if (grad_norm == 0.0) return 0.0;
  const Vector projected = projection_apply(S, grad);
  const double captured = std::sqrt(std::max(projected.dot(grad), 0.0));
  const double regret = grad_norm - captured;
  return std::min(std::max(regret, 0.0), grad_norm);
}

double dynamic_regret(const RegretTrace& trace) {
  if (trace.entries.empty()) {
    throw std::invalid_argument("dynamic_regret: empty trace");
  }
  double total = 0.0;
  for (const RegretEntry& entry : trace.entries) {
    total += instantaneous_regret(entry.grad, entry.sketch);
  }
  return total;
}

double total_variation(const RegretTrace& trace) {
  double total = 0.0;
  for (std::size_t i = 1; i < trace.entries.size(); ++i) {
    total += (trace.entries[i].grad - trace.entries[i - 1].grad).norm();
  }
  if (!trace.entries.empty() && trace.final_grad.size() > 0) {
    total += (trace.final_grad - trace.entries.back().grad).norm();
  }
  return total;
}

double regret_bound(int d, double lambda, int M, double V_K,
                    const std::vector<double>& U_values, long K) {
  if (M < 1) {
    throw std::invalid_argument("regret_bound: memory must be >= 1");
  }
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("regret_bound: lambda must be positive");
  }
  double U_square_sum = 0.0;
  for (double u : U_values) U_square_sum += u * u;
  const double drift_term =
      2.0 * M * std::sqrt(d * (M + 1.0) / lambda) * V_K;
  const double confidence_term =
      std::sqrt((8.0 * lambda * d * U_square_sum / M) *
                std::log1p(M / (lambda * d))) *
      std::sqrt(static_cast<double>(K));
  return drift_term + confidence_term;
}

GradErrorReport check_gradient_error_bound(const RegretTrace& trace) {
  if (!trace.exact_responses) {
    throw std::invalid_argument(
        "check_gradient_error_bound: trace has model-based responses");
  }
  if (!trace.has_estimator) {
    throw std::invalid_argument(
        "check_gradient_error_bound: trace has no estimator state");
  }
  if (!trace.unit_directions) {
    throw std::invalid_argument(
        "check_gradient_error_bound: stored directions are not unit vectors");
  }
  GradErrorReport report;
  const double root_lambda = std::sqrt(trace.lambda);
  const double drift_coefficient =
      std::sqrt(trace.dim * (trace.memory + 1.0) / trace.lambda);
  Rng rng(0xb0d5ULL);
  std::normal_distribution<double> normal(0.0, 1.0);

  for (std::size_t i = 0; i < trace.entries.size(); ++i) {
    const long k = static_cast<long>(i) + 1;
    const RegretEntry& entry = trace.entries[i];

    // Gradient drift over the window that produced C_k.
    double drift = 0.0;
    const long low = std::max(1L, k - trace.memory - 1);
    for (long j = low; j <= k - 1; ++j) {
      drift += (trace.entries[j].grad - trace.entries[j - 1].grad).norm();
    }

    auto probe = [&](const Vector& s, const char* name) {
      const double lhs = std::abs(s.dot(entry.grad - entry.estimate));
      const double quad = std::max(s.dot(entry.C_inverse * s), 0.0);
      const double rhs = drift_coefficient * drift +
                         root_lambda * entry.grad.norm() * std::sqrt(quad);
      report.checks.push_back({k, name, lhs, rhs});
      if (lhs > rhs + report.tolerance) ++report.violations;
    };

    if (entry.ucb_direction.size() > 0) probe(entry.ucb_direction, "ucb");
    const double estimate_norm = entry.estimate.norm();
    if (estimate_norm > 0.0) {
      probe(entry.estimate / estimate_norm, "estimate");
    }
    Vector random_dir(trace.dim);
    do {
      for (int j = 0; j < trace.dim; ++j) random_dir(j) = normal(rng);
    } while (random_dir.norm() == 0.0);
    random_dir /= random_dir.norm();
    probe(random_dir, "random");
  }
  return report;
}

PotentialCheck check_potential_lemma(const std::vector<Vector>& directions,
                                     double lambda, int M, int d) {
  if (M < 1) {
    throw std::invalid_argument("check_potential_lemma: memory must be >= 1");
  }
  if (!(lambda > 0.0)) {
    throw std::invalid_argument(
        "check_potential_lemma: lambda must be positive");
  }
  Matrix C = lambda * Matrix::Identity(d, d);
  PotentialCheck result;
  for (std::size_t j = 0; j < directions.size(); ++j) {
    const Vector& s = directions[j];
    if (s.size() != d) {
      throw std::invalid_argument("check_potential_lemma: dimension mismatch");
    }
    if (std::abs(s.norm() - 1.0) > 1e-10) {
      throw std::invalid_argument(
          "check_potential_lemma: directions must be unit vectors");
    }
    result.lhs += s.dot(C.ldlt().solve(s));
    C.noalias() += s * s.transpose();
    // The window holds M+1 entries: the (j-M-1)-th vector in 1-based terms
    // leaves only once it exists.
    const long leaving = static_cast<long>(j + 1) - M - 1;
    if (leaving >= 1) {
      const Vector& old = directions[leaving - 1];
      C.noalias() -= old * old.transpose();
    }
  }
  const double k = static_cast<double>(directions.size());
  result.rhs = (2.0 * k * d / M) * std::log1p(M / (lambda * d));
  result.slack = result.rhs - result.lhs;
  return result;
}

FirstInequalityRecord first_inequality_record(const RegretTrace& trace) {
  FirstInequalityRecord record;
  record.norm_gap_sum = dynamic_regret(trace);
  for (const RegretEntry& entry : trace.entries) {
    if (entry.ucb_direction.size() == 0) continue;
    const double grad_norm = entry.grad.norm();
    if (grad_norm == 0.0) continue;
    const Vector best = entry.grad / grad_norm;
    record.inner_gap_sum += (best - entry.ucb_direction).dot(entry.grad);
  }
  return record;
}

void write_bound_report(const GradErrorReport& report, std::ostream& out) {
  nlohmann::ordered_json doc;
  doc["violations"] = report.violations;
  doc["tolerance"] = report.tolerance;
  doc["checks"] = nlohmann::ordered_json::array();
  for (const GradErrorCheck& check : report.checks) {
    nlohmann::ordered_json item;
    item["k"] = check.k;
    item["probe"] = check.probe;
    item["lhs"] = check.lhs;
    item["rhs"] = check.rhs;
    item["slack"] = check.rhs - check.lhs;
    doc["checks"].push_back(std::move(item));
  }
  out << doc.dump(2) << "\n";
}

}  // namespace ssopt
