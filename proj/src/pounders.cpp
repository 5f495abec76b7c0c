#include "ssopt/pounders.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "ssopt/sketch.hpp"

namespace ssopt {

namespace {

constexpr double kDuplicateTol = 1e-14;

// Residual of v against the orthonormal columns of S, with one
// re-orthogonalization pass so nearly parallel inputs don't leak spurious
// components back in.
Vector orthogonal_residual(const Matrix& S, const Vector& v) {
  if (S.cols() == 0) return v;
  Vector r = v - S * (S.transpose() * v);
  r -= S * (S.transpose() * r);
  return r;
}

}  // namespace

bool PointBank::add(const Vector& point, double value) {
  if (find(point) >= 0) return false;
  points_.push_back(point);
  values_.push_back(value);
  return true;
}

int PointBank::find(const Vector& p) const {
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (points_[i].size() == p.size() &&
        (points_[i] - p).norm() <= kDuplicateTol) {
      return static_cast<int>(i);
    }
  }
  return -1;
}

SubspaceSplit identify_initial_subspace(const Vector& x, const PointBank& bank,
                                        double delta, double c,
                                        double theta1) {
  if (!(delta > 0.0)) {
    throw std::invalid_argument("identify_initial_subspace: delta must be > 0");
  }
  if (!(c >= 1.0) || !(theta1 > 0.0 && theta1 <= 1.0 / c)) {
    throw std::invalid_argument(
        "identify_initial_subspace: need c >= 1 and theta1 in (0, 1/c]");
  }
  const int d = static_cast<int>(x.size());
  const double ball = c * delta;

  Matrix S(d, 0);
  for (int i = 0; i < bank.size() && S.cols() < d; ++i) {
    const Vector v = bank.point(i) - x;
    if (v.norm() > ball) continue;
    const Vector r = orthogonal_residual(S, v);
    if (r.norm() / ball < theta1) continue;
    S.conservativeResize(Eigen::NoChange, S.cols() + 1);
    S.col(S.cols() - 1) = r / r.norm();
  }

  SubspaceSplit split;
  const int m = static_cast<int>(S.cols());
  if (m == 0) {
    split.S_perp = Matrix::Identity(d, d);
  } else if (m == d) {
    split.S_perp = Matrix(d, 0);
  } else {
    // The trailing columns of a full QR of S span the orthogonal complement.
    Eigen::HouseholderQR<Matrix> qr(S);
    const Matrix full_q = qr.householderQ() * Matrix::Identity(d, d);
    split.S_perp = full_q.rightCols(d - m);
  }
  split.Q.resize(d, d);
  if (m > 0) split.Q.leftCols(m) = S;
  if (m < d) split.Q.rightCols(d - m) = split.S_perp;
  split.S = std::move(S);
  return split;
}

Vector select_geometry_direction(const UcbState& state, double U,
                                 const Matrix& S_perp) {
  if (S_perp.cols() == 0) {
    throw std::invalid_argument("select_geometry_direction: empty complement");
  }
  return S_perp.col(ucb_select_from_columns(state, U, S_perp));
}

double SubspaceModel::value(const Vector& z) const {
  if (z.size() != linear.size()) {
    throw std::invalid_argument("SubspaceModel::value: dimension mismatch");
  }
  return constant + linear.dot(z) + 0.5 * z.dot(quadratic * z);
}

SubspaceModel build_subspace_model(const PointBank& bank, const Vector& x,
                                   const Matrix& S, double delta, double c) {
  const int d = static_cast<int>(x.size());
  const int m = static_cast<int>(S.cols());
  if (S.rows() != d || m < 1) {
    throw std::invalid_argument("build_subspace_model: bad basis");
  }
  if (!(delta > 0.0) || !(c >= 1.0)) {
    throw std::invalid_argument("build_subspace_model: need delta > 0, c >= 1");
  }
  const int center = bank.find(x);
  if (center < 0) {
    throw ModelBuildFailure("model: incumbent is missing from the bank");
  }
  const double f0 = bank.value(center);

  // Candidates must lie on the affine subspace (otherwise their value says
  // nothing about the restriction being modeled) and within twice the
  // history-admission ball in projected distance.
  struct Candidate {
    int index;
    double dist;
    Vector z;  // projected displacement, scaled by 1/delta
  };
  std::vector<Candidate> candidates;
  const double reach = 2.0 * c * delta;
  for (int i = 0; i < bank.size(); ++i) {
    if (i == center) continue;
    const Vector v = bank.point(i) - x;
    const double vnorm = v.norm();
    if (vnorm <= kDuplicateTol) continue;
    if (orthogonal_residual(S, v).norm() > 1e-7 * vnorm) continue;
    Vector z = S.transpose() * v;
    const double dist = z.norm();
    if (dist > reach) continue;
    candidates.push_back({i, dist, z / delta});
  }
  if (static_cast<int>(candidates.size()) < m) {
    throw ModelBuildFailure("model: not enough usable points near the center");
  }

  // Nearest first; newer points win ties, so stale history is the first to
  // be discarded when the interpolation set overflows.
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) {
                     if (a.dist != b.dist) return a.dist < b.dist;
                     return a.index > b.index;
                   });
  const int full_quad = (m + 1) * (m + 2) / 2 - 1;
  // Past m = 20 the full quadratic set makes each fit cubically expensive;
  // 2m+1 points (a classic model-based-DFO default) keep the fit linear in
  // budget while still identifying curvature along the important directions.
  const int cap = m <= 20 ? full_quad : std::min(full_quad, 2 * m + 1);

  // The interpolation system is singular whenever the chosen displacements
  // fail to span the subspace or repeat second-moment information (three
  // iterates on one line through the center already do it), so points are
  // admitted greedily only while they add rank.
  std::vector<int> chosen;
  std::vector<char> used(candidates.size(), 0);
  Matrix zbasis(m, 0);
  for (std::size_t i = 0;
       i < candidates.size() && static_cast<int>(zbasis.cols()) < m; ++i) {
    const Vector& zi = candidates[i].z;
    Vector rz = zi;
    if (zbasis.cols() > 0) {
      rz -= zbasis * (zbasis.transpose() * zi);
      rz -= zbasis * (zbasis.transpose() * rz);
    }
    if (rz.norm() < 1e-6 * zi.norm()) continue;
    zbasis.conservativeResize(Eigen::NoChange, zbasis.cols() + 1);
    zbasis.col(zbasis.cols() - 1) = rz / rz.norm();
    chosen.push_back(static_cast<int>(i));
    used[i] = 1;
  }
  if (static_cast<int>(zbasis.cols()) < m) {
    throw ModelBuildFailure("model: directions do not span the subspace");
  }
  if (m <= 20) {
    // Curvature fill: a point contributes iff (z, z z^T) extends the span
    // of the moments already held. Scan stops early once the set is full or
    // rejections pile up, keeping the cost bounded on dense banks.
    const int phidim = m + m * m;
    Matrix phibasis(phidim, 0);
    const auto make_phi = [m, phidim](const Vector& z) {
      Vector phi(phidim);
      phi.head(m) = z;
      const Matrix outer = z * z.transpose() * 0.5;
      phi.tail(m * m) =
          Eigen::Map<const Vector>(outer.data(), static_cast<long>(m) * m);
      return phi;
    };
    const auto admit = [&](const Vector& phi) {
      Vector r = phi;
      if (phibasis.cols() > 0) {
        r -= phibasis * (phibasis.transpose() * phi);
        r -= phibasis * (phibasis.transpose() * r);
      }
      if (r.norm() < 1e-8 * phi.norm()) return false;
      phibasis.conservativeResize(Eigen::NoChange, phibasis.cols() + 1);
      phibasis.col(phibasis.cols() - 1) = r / r.norm();
      return true;
    };
    for (int idx : chosen) admit(make_phi(candidates[idx].z));
    int scanned = 0;
    for (std::size_t i = 0; i < candidates.size() &&
                            static_cast<int>(chosen.size()) < cap &&
                            scanned < cap + 256;
         ++i) {
      if (used[i]) continue;
      ++scanned;
      if (!admit(make_phi(candidates[i].z))) continue;
      chosen.push_back(static_cast<int>(i));
      used[i] = 1;
    }
  } else {
    // Large subspaces: moment bookkeeping is too dear, so fill with the
    // nearest distinct projections and let the fit validation below catch
    // the rare degenerate draw.
    for (std::size_t i = 0; i < candidates.size() &&
                            static_cast<int>(chosen.size()) < cap;
         ++i) {
      if (used[i]) continue;
      bool duplicate = false;
      for (int idx : chosen) {
        if ((candidates[i].z - candidates[idx].z).norm() <= 1e-9) {
          duplicate = true;
          break;
        }
      }
      if (duplicate) continue;
      chosen.push_back(static_cast<int>(i));
      used[i] = 1;
    }
  }
  std::vector<Candidate> selected;
  selected.reserve(chosen.size());
  for (int idx : chosen) selected.push_back(std::move(candidates[idx]));
  candidates = std::move(selected);
  const int n = static_cast<int>(candidates.size());

  // Minimum-Frobenius-norm fit in displacement coordinates scaled by delta:
  // H = sum_i mu_i z_i z_i^T with the standard KKT system
  //   [ A  P ] [mu]   [f_i - f0]      A_ij = (z_i . z_j)^2 / 2,
  //   [ P' 0 ] [ g] = [  0     ],     P row i = z_i'.
  Matrix kkt = Matrix::Zero(n + m, n + m);
  Vector rhs = Vector::Zero(n + m);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      const double t = candidates[i].z.dot(candidates[j].z);
      kkt(i, j) = kkt(j, i) = 0.5 * t * t;
    }
    kkt.block(i, n, 1, m) = candidates[i].z.transpose();
    kkt.block(n, i, m, 1) = candidates[i].z;
    rhs(i) = bank.value(candidates[i].index) - f0;
  }
  // Rank-tolerant solve: a consistent-but-singular system (redundant moment
  // rows can slip past the selection) still yields the unique minimum-norm
  // model, and the reproduction check below is the real acceptance test.
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(kkt);
  const Vector sol = cod.solve(rhs);

  SubspaceModel model;
  model.basis = S;
  model.center = x;
  model.constant = f0;
  model.linear = sol.segment(n, m) / delta;
  Matrix hess = Matrix::Zero(m, m);
  for (int i = 0; i < n; ++i) {
    hess += sol(i) * candidates[i].z * candidates[i].z.transpose();
  }
  model.quadratic = hess / (delta * delta);

  for (int i = 0; i < n; ++i) {
    const double fi = bank.value(candidates[i].index);
    const double fitted = model.value(candidates[i].z * delta);
    if (!(std::abs(fitted - fi) <= 1e-8 * std::max(1.0, std::abs(fi)))) {
      throw ModelBuildFailure("model: fit fails to reproduce its data");
    }
  }
  return model;
}

namespace {

// Cauchy point of g + H over the unit ball, in eigen or plain coordinates.
Vector cauchy_point(const Vector& g, const Matrix& H) {
  const double gnorm = g.norm();
  if (gnorm == 0.0) return Vector::Zero(g.size());
  const double curvature = g.dot(H * g);
  double t = 1.0 / gnorm;
  if (curvature > 0.0) t = std::min(t, gnorm * gnorm / curvature);
  return -t * g;
}

double model_value(const Vector& g, const Matrix& H, const Vector& z) {
  return g.dot(z) + 0.5 * z.dot(H * z);
}

}  // namespace

Vector solve_trust_region_subproblem(const SubspaceModel& model,
                                     double delta) {
  if (!(delta > 0.0)) {
    throw std::invalid_argument(
        "solve_trust_region_subproblem: delta must be > 0");
  }
  const int m = static_cast<int>(model.linear.size());
  // Work over the unit ball: z = delta * w, so g_hat = delta * g and
  // H_hat = delta^2 * H keep the numbers O(1) even for tiny radii.
  const Vector g = delta * model.linear;
  const Matrix H = 0.5 * delta * delta *
                   (model.quadratic + model.quadratic.transpose());
  const Vector w_cauchy = cauchy_point(g, H);

  Eigen::SelfAdjointEigenSolver<Matrix> eig(H);
  Vector w = w_cauchy;
  if (eig.info() == Eigen::Success) {
    const Vector& evals = eig.eigenvalues();
    const Matrix& V = eig.eigenvectors();
    const Vector ge = V.transpose() * g;
    const double lambda_min = evals(0);

    const auto norm_at = [&](double sigma) {
      double sq = 0.0;
      for (int i = 0; i < m; ++i) {
        const double denom = evals(i) + sigma;
        if (denom <= 0.0) return std::numeric_limits<double>::infinity();
        sq += ge(i) * ge(i) / (denom * denom);
      }
      return std::sqrt(sq);
    };

    Vector we(m);
    bool solved = false;
    if (lambda_min > 0.0 && norm_at(0.0) <= 1.0) {
      // Interior Newton point.
      for (int i = 0; i < m; ++i) we(i) = -ge(i) / evals(i);
      solved = true;
    } else {
      const double sigma_floor = std::max(0.0, -lambda_min);
      // Gradient components in the bottom eigenspace decide between the
      // boundary secular equation and the hard case.
      const double eig_scale =
          std::max(std::abs(evals(0)), std::abs(evals(m - 1)));
      double edge_norm_sq = 0.0;
      double bottom_g_sq = 0.0;
      for (int i = 0; i < m; ++i) {
        const double gap = evals(i) - lambda_min;
        if (gap > 1e-12 * std::max(1.0, eig_scale)) {
          const double denom = evals(i) + sigma_floor;
          edge_norm_sq += ge(i) * ge(i) / (denom * denom);
        } else {
          bottom_g_sq += ge(i) * ge(i);
        }
      }
      const bool hard_case =
          sigma_floor > 0.0 &&
          bottom_g_sq <= 1e-24 * std::max(1.0, g.squaredNorm()) &&
          edge_norm_sq <= 1.0;
      if (hard_case) {
        // Hard case: fill the remaining length along the bottom eigenvector.
        for (int i = 0; i < m; ++i) {
          const double gap = evals(i) - lambda_min;
          we(i) = gap > 1e-12 * std::max(1.0, eig_scale)
                      ? -ge(i) / (evals(i) + sigma_floor)
                      : 0.0;
        }
        const double tau = std::sqrt(std::max(0.0, 1.0 - edge_norm_sq));
        we(0) += ge(0) <= 0.0 ? tau : -tau;
        solved = true;
      } else {
        // Boundary solution: bisect the secular equation ||w(sigma)|| = 1 on
        // (sigma_floor, hi]; the norm is strictly decreasing there.
        double lo = sigma_floor;
        double hi = std::max(1.0, sigma_floor) + g.norm() + eig_scale;
        while (norm_at(hi) > 1.0) hi *= 2.0;
        for (int it = 0; it < 200; ++it) {
          const double mid = 0.5 * (lo + hi);
          if (norm_at(mid) > 1.0) {
            lo = mid;
          } else {
            hi = mid;
          }
        }
        const double sigma = hi;
        if (std::isfinite(norm_at(sigma))) {
          for (int i = 0; i < m; ++i) we(i) = -ge(i) / (evals(i) + sigma);
          solved = true;
        }
      }
    }

    if (solved) {
      Vector candidate = V * we;
      if (candidate.norm() > 1.0) candidate /= candidate.norm();
      if (candidate.allFinite() &&
          model_value(g, H, candidate) <= model_value(g, H, w_cauchy)) {
        w = std::move(candidate);
      }
    }
  }
  return delta * w;
}

const char* to_string(TrVariant variant) {
  switch (variant) {
    case TrVariant::ucb:
      return "ucb";
    case TrVariant::random_only:
      return "random";
    case TrVariant::ucb_plus_random:
      return "ucb+random";
    case TrVariant::full_space:
      return "full";
  }
  return "?";
}

TrVariant parse_tr_variant(const std::string& text) {
  if (text == "ucb") return TrVariant::ucb;
  if (text == "random") return TrVariant::random_only;
  if (text == "ucb+random") return TrVariant::ucb_plus_random;
  if (text == "full") return TrVariant::full_space;
  throw std::invalid_argument("unknown trust-region variant: " + text);
}

namespace {

struct ResolvedTr {
  TrConfig cfg;
  double delta0;
  double delta_max;
  int p_extra;
  bool uses_ucb;
};

ResolvedTr resolve_config(const TrConfig& config, const Problem& problem) {
  const int d = problem.dim();
  if (!(config.nu1 > 0.0 && config.nu1 < 1.0 && config.nu2 > 1.0)) {
    throw std::invalid_argument("TrConfig: need 0 < nu1 < 1 < nu2");
  }
  if (!(config.eta1 > 0.0) || !(config.eta2 > 0.0)) {
    throw std::invalid_argument("TrConfig: eta1 and eta2 must be positive");
  }
  if (!(config.c >= 1.0) ||
      !(config.theta1 > 0.0 && config.theta1 <= 1.0 / config.c)) {
    throw std::invalid_argument(
        "TrConfig: need c >= 1 and theta1 in (0, 1/c]");
  }
  if (!(config.mu > 0.0 && config.mu < 1.0)) {
    throw std::invalid_argument("TrConfig: mu must lie in (0,1)");
  }
  const long min_budget = config.variant == TrVariant::full_space
                              ? static_cast<long>(d) + 2
                              : 3;
  if (config.budget < min_budget) {
    throw std::invalid_argument("TrConfig: budget too small for the variant");
  }

  ResolvedTr r{config, config.delta0, config.delta_max, config.p_extra,
               config.variant == TrVariant::ucb ||
                   config.variant == TrVariant::ucb_plus_random};
  if (r.delta0 <= 0.0) {
    const double scale = problem.start_point().lpNorm<Eigen::Infinity>();
    r.delta0 = 0.1 * std::max(1.0, scale);
  }
  if (r.delta_max <= 0.0) r.delta_max = 1e3 * r.delta0;
  if (!(r.delta0 <= r.delta_max)) {
    throw std::invalid_argument("TrConfig: delta0 must not exceed delta_max");
  }
  if (r.p_extra < 0) {
    r.p_extra = config.variant == TrVariant::random_only ||
                        config.variant == TrVariant::ucb_plus_random
                    ? 1
                    : 0;
  }
  return r;
}

std::string derive_tr_label(const TrConfig& config) {
  if (!config.solver_label.empty()) return config.solver_label;
  std::ostringstream label;
  label << "ss-pounders:" << to_string(config.variant);
  return label.str();
}

}  // namespace

RunHistory run_ss_pounders(Problem& problem, const TrConfig& config,
                           Rng& rng) {
  const ResolvedTr r = resolve_config(config, problem);
  const int d = problem.dim();
  const double lambda = config.lambda > 0.0 ? config.lambda : 1.0 / d;
  const int memory = config.memory >= 0 ? config.memory : d;

  RunHistory history;
  history.problem = problem.name();
  history.solver = derive_tr_label(config);
  history.full_records = config.record_full;

  problem.reset_counters();
  problem.set_eval_observer(
      [&history](long count, double value) { history.observe_eval(count, value); });
  // Derivative-free means derivative-free: any gradient read below is a bug.
  GradientAccessLock oracle_guard(problem);

  UcbState ucb;
  if (r.uses_ucb) ucb = ucb_init(d, lambda, memory, config.mu);

  Vector x = problem.start_point();
  double fx = problem.evaluate(x);
  PointBank bank;
  bank.add(x, fx);

  double delta = r.delta0;
  const double delta_floor = 1e-16 * r.delta0;
  const auto budget_left = [&]() { return problem.eval_count() < config.budget; };

  long k = 0;
  bool retried_model = false;
  while (budget_left() && delta > delta_floor) {
    ++k;
    IterationRecord rec;
    rec.k = k;
    rec.f = fx;
    rec.alpha = delta;
    rec.bound = r.uses_ucb ? ucb.U : 0.0;
    if (config.record_full) {
      rec.has_vectors = true;
      rec.x = x;
    }
    retried_model = false;

    const SubspaceSplit split =
        identify_initial_subspace(x, bank, delta, r.cfg.c, r.cfg.theta1);

    Matrix S_model;
    std::vector<int> geometry_cols;  // columns of S_model still to evaluate
    if (config.variant == TrVariant::full_space) {
      // Classic behavior: model the full space and restore poisedness by
      // evaluating every missing complement direction.
      S_model = Matrix::Identity(d, d);
      for (int j = 0; j < split.S_perp.cols() && budget_left(); ++j) {
        const Vector y = x + delta * split.S_perp.col(j);
        bank.add(y, problem.evaluate(y));
      }
    } else {
      S_model = split.S;
      if (r.uses_ucb && split.S_perp.cols() > 0) {
        const Vector s = select_geometry_direction(ucb, ucb.U, split.S_perp);
        S_model.conservativeResize(d, S_model.cols() + 1);
        S_model.col(S_model.cols() - 1) = s;
        geometry_cols.push_back(static_cast<int>(S_model.cols()) - 1);
      }
      const int room = d - static_cast<int>(S_model.cols());
      const int p_eff = std::min(r.p_extra, room);
      if (p_eff > 0) {
        const Matrix extra = orthogonal_augment(S_model, p_eff, rng);
        const int base = static_cast<int>(S_model.cols());
        S_model.conservativeResize(d, base + p_eff);
        S_model.rightCols(p_eff) = extra;
        for (int j = 0; j < p_eff; ++j) geometry_cols.push_back(base + j);
      }
      for (int col : geometry_cols) {
        if (!budget_left()) break;
        const Vector y = x + delta * S_model.col(col);
        bank.add(y, problem.evaluate(y));
      }
    }

    if (S_model.cols() == 0) {
      // No history directions and nothing augmented; treat like a failed
      // model and look again from closer range.
      ++history.model_failures;
      delta *= r.cfg.nu1;
      rec.evals = problem.eval_count();
      history.iterations.push_back(std::move(rec));
      continue;
    }

    SubspaceModel model;
    bool have_model = false;
    while (!have_model) {
      try {
        model = build_subspace_model(bank, x, S_model, delta, r.cfg.c);
        have_model = true;
      } catch (const ModelBuildFailure&) {
        ++history.model_failures;
        if (!retried_model && budget_left()) {
          // Emergency geometry: probe the model coordinate that the current
          // interpolation set represents worst, then retry once.
          retried_model = true;
          const int m = static_cast<int>(S_model.cols());
          Vector coverage = Vector::Zero(m);
          for (int i = 0; i < bank.size(); ++i) {
            const Vector v = bank.point(i) - x;
            if (v.norm() > 2.0 * r.cfg.c * delta) continue;
            coverage =
                coverage.cwiseMax((S_model.transpose() * v).cwiseAbs());
          }
          int worst = 0;
          coverage.minCoeff(&worst);
          const Vector y = x + delta * S_model.col(worst);
          bank.add(y, problem.evaluate(y));
        } else {
          break;
        }
      }
    }
    if (!have_model) {
      delta *= r.cfg.nu1;
      rec.evals = problem.eval_count();
      history.iterations.push_back(std::move(rec));
      continue;
    }

    const Vector z = solve_trust_region_subproblem(model, delta);
    const double predicted = model.value(Vector::Zero(z.size())) - model.value(z);
    if (!(predicted > 1e-15 * std::max(1.0, std::abs(fx)))) {
      // Stationary or degenerate model: no point spending an evaluation.
      delta *= r.cfg.nu1;
      rec.evals = problem.eval_count();
      history.iterations.push_back(std::move(rec));
      continue;
    }
    if (!budget_left()) {
      rec.evals = problem.eval_count();
      history.iterations.push_back(std::move(rec));
      break;
    }

    const Vector trial = x + S_model * z;
    const double f_trial = problem.evaluate(trial);
    bank.add(trial, f_trial);
    const double rho = (fx - f_trial) / predicted;
    const bool accepted = rho >= r.cfg.eta1;
    const Vector model_grad = model.linear;

    if (accepted) {
      x = trial;
      fx = f_trial;
      rec.step_norm = (S_model * z).norm();
      if (model_grad.norm() >= r.cfg.eta2 * delta) {
        delta = std::min(r.cfg.nu2 * delta, r.delta_max);
      } else {
        delta *= r.cfg.nu1;
      }
    } else {
      delta *= r.cfg.nu1;
    }

    if (r.uses_ucb) {
      ucb_update(ucb, S_model, model_grad);
      update_gradient_bound(ucb, model_grad.norm(), d,
                            static_cast<int>(S_model.cols()));
    }

    rec.evals = problem.eval_count();
    rec.dirderivs = problem.dirderiv_count();
    if (config.record_full) {
      rec.sketch = std::move(S_model);
      rec.responses = model_grad;
      rec.projected_gradient = rec.sketch * model_grad;
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
