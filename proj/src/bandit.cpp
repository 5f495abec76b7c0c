#include "ssopt/bandit.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace ssopt {
namespace {

// Below this, 1 - s^T C^{-1} s is too close to singular for a safe downdate.
constexpr double kDowndateTol = 1e-14;

// Largest dimension where the subproblem runs an ascent from every warm
// candidate (plus the dense top eigenvector). Past this, each start costs a
// d*d sweep per iteration and the single random-start ascent takes over.
constexpr int kMultiStartDim = 64;

void check_observation(const UcbState& state, const Matrix& directions,
                       const Vector& responses) {
  if (directions.rows() != state.dim) {
    throw std::invalid_argument("ucb_update: direction rows != dim");
  }
  if (directions.cols() != responses.size()) {
    throw std::invalid_argument("ucb_update: responses do not match columns");
  }
  if (!directions.allFinite() || !responses.allFinite()) {
    throw std::invalid_argument("ucb_update: non-finite observation");
  }
}

// C^{-1} <- inverse of (C + s s^T), Sherman-Morrison. Only the lower
// triangle is touched; the caller mirrors it once after the batch, which
// both halves the memory traffic and keeps the inverse exactly symmetric.
void rank_one_add(Matrix& C_inverse, const Vector& s) {
  Vector w = C_inverse.selfadjointView<Eigen::Lower>() * s;
  const double denom = 1.0 + s.dot(w);
  C_inverse.selfadjointView<Eigen::Lower>().rankUpdate(w, -1.0 / denom);
}

// C^{-1} <- inverse of (C - s s^T). False when the denominator is too small
// to trust, in which case the caller must rebuild densely.
bool rank_one_remove(Matrix& C_inverse, const Vector& s) {
  Vector w = C_inverse.selfadjointView<Eigen::Lower>() * s;
  const double denom = 1.0 - s.dot(w);
  if (denom <= kDowndateTol) return false;
  C_inverse.selfadjointView<Eigen::Lower>().rankUpdate(w, 1.0 / denom);
  return true;
}

void rebuild_dense(UcbState& state) {
  Matrix C = state.lambda * Matrix::Identity(state.dim, state.dim);
  for (const WindowEntry& entry : state.window) {
    C.noalias() += entry.directions * entry.directions.transpose();
  }
  state.C_inverse =
      C.llt().solve(Matrix::Identity(state.dim, state.dim));
  ++state.dense_rebuilds;
}

}  // namespace

UcbState ucb_init(int dim, double lambda, int memory, double mu) {
  if (dim < 1) throw std::invalid_argument("ucb_init: dim must be >= 1");
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("ucb_init: lambda must be positive");
  }
  if (memory < 0) throw std::invalid_argument("ucb_init: memory must be >= 0");
  if (!(mu >= 0.0 && mu <= 1.0)) {
    throw std::invalid_argument("ucb_init: mu must lie in [0, 1]");
  }
  UcbState state;
  state.dim = dim;
  state.lambda = lambda;
  state.memory = memory;
  state.mu = mu;
  state.C_inverse = Matrix::Identity(dim, dim) / lambda;
  state.b = Vector::Zero(dim);
  state.g = Vector::Zero(dim);
  return state;
}

void ucb_update(UcbState& state, const Matrix& directions,
                const Vector& responses) {
  check_observation(state, directions, responses);

  state.window.push_back({directions, responses});
  std::deque<WindowEntry> evicted;
  while (state.window.size() > static_cast<std::size_t>(state.memory) + 1) {
    evicted.push_back(std::move(state.window.front()));
    state.window.pop_front();
  }

  for (int i = 0; i < directions.cols(); ++i) {
    state.b.noalias() += responses(i) * directions.col(i);
    rank_one_add(state.C_inverse, directions.col(i));
  }
  bool ok = true;
  for (const WindowEntry& entry : evicted) {
    for (int i = 0; i < entry.directions.cols(); ++i) {
      state.b.noalias() -= entry.responses(i) * entry.directions.col(i);
      if (ok) ok = rank_one_remove(state.C_inverse, entry.directions.col(i));
    }
  }
  if (!ok) {
    rebuild_dense(state);
  } else {
    // The updates above only wrote the lower triangle; mirror it so every
    // reader sees a full, exactly symmetric inverse.
    state.C_inverse.triangularView<Eigen::StrictlyUpper>() =
        state.C_inverse.triangularView<Eigen::StrictlyLower>().transpose();
  }

  state.g.noalias() = state.C_inverse.selfadjointView<Eigen::Lower>() * state.b;
}

double update_gradient_bound(UcbState& state, double sketch_norm, int dim,
                             int p) {
  if (dim != state.dim) {
    throw std::invalid_argument("update_gradient_bound: dim mismatch");
  }
  if (p < 1) throw std::invalid_argument("update_gradient_bound: p must be >= 1");
  if (!(sketch_norm >= 0.0) || !std::isfinite(sketch_norm)) {
    throw std::invalid_argument("update_gradient_bound: bad sketch_norm");
  }
  const double scaled = (static_cast<double>(dim) / p) * sketch_norm;
  if (!state.bound_initialized) {
    state.U = scaled;
    state.bound_initialized = true;
  } else {
    state.U = state.mu * state.U + (1.0 - state.mu) * scaled;
  }
  return state.U;
}

double ucb_objective(const UcbState& state, double U, const Vector& s) {
  if (s.size() != state.dim) {
    throw std::invalid_argument("ucb_objective: dimension mismatch");
  }
  const Vector Cs = state.C_inverse.selfadjointView<Eigen::Lower>() * s;
  const double quad = std::max(s.dot(Cs), 0.0);
  return state.g.dot(s) + std::sqrt(state.lambda) * U * std::sqrt(quad);
}

namespace {

// Ascent on the sphere: move along the Euclidean gradient, renormalize.
Vector sphere_ascent(const UcbState& state, double U, Vector s,
                     int max_iters) {
  const double root_lambda = std::sqrt(state.lambda);
  const double step = state.subproblem_step;
  double prev_score = -std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < max_iters; ++iter) {
    Vector w = state.C_inverse.selfadjointView<Eigen::Lower>() * s;
    const double quad = std::max(s.dot(w), 0.0);
    const double score = state.g.dot(s) + root_lambda * U * std::sqrt(quad);
    Vector grad = state.g;
    if (quad > 0.0 && U > 0.0) {
      grad += (root_lambda * U / std::sqrt(quad)) * w;
    }
    Vector next = s + step * grad;
    const double norm = next.norm();
    if (norm < 1e-300) {
      next = Vector::Unit(state.dim, 0);
    } else {
      next /= norm;
    }
    const double moved = (next - s).norm();
    s = next;
    if (moved < 1e-8) break;
    // Objective plateaus long before the iterate settles on flat ridges;
    // each sweep here streams the whole d*d inverse, so bail early.
    if (score <= prev_score + 1e-11 * (std::abs(score) + 1e-30)) break;
    prev_score = score;
  }
  const double norm = s.norm();
  return norm > 0.0 ? Vector(s / norm) : Vector(Vector::Unit(state.dim, 0));
}

}  // namespace

Vector ucb_select(const UcbState& state, double U) {
  if (!(U >= 0.0) || !std::isfinite(U)) {
    throw std::invalid_argument("ucb_select: U must be finite and >= 0");
  }
  const int d = state.dim;
  const double g_norm = state.g.norm();
  if (U == 0.0 && g_norm > 0.0) return state.g / g_norm;

  // Fixed seed keeps selection a deterministic function of the state.
  Rng rng(0x5e1ec70225ULL);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto random_unit = [&](double norm) {
    Vector v(d);
    do {
      for (int i = 0; i < d; ++i) v(i) = normal(rng);
    } while (v.norm() == 0.0);
    return Vector(v * (norm / v.norm()));
  };

  Vector best = sphere_ascent(state, U, random_unit(0.01),
                              state.subproblem_iters);
  double best_score = ucb_objective(state, U, best);
  bool best_ascended = true;
  auto consider = [&](const Vector& s, bool ascended) {
    const double score = ucb_objective(state, U, s);
    if (score > best_score) {
      best = s;
      best_score = score;
      best_ascended = ascended;
    }
  };

  if (g_norm > 0.0) consider(state.g / g_norm, false);
  Vector top_probe;
  double top_probe_score = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 8; ++i) {
    const Vector probe = random_unit(1.0);
    const double score = ucb_objective(state, U, probe);
    if (score > top_probe_score) {
      top_probe_score = score;
      top_probe = probe;
    }
    if (score > best_score) {
      best = probe;
      best_score = score;
      best_ascended = false;
    }
  }

  // Stored directions are pre-screened by an upper bound that needs no
  // solve: any window column s with norm n satisfies
  // (s/n)^T C^{-1} (s/n) <= 1/(lambda + n^2), because C >= lambda I + s s^T.
  // Survivors are scored in one block product; a column skipped by the
  // running-best screen could never win anyway (score <= ceiling <= best),
  // so the batch returns the same argmax as a sequential scan.
  const double root_lambda = std::sqrt(state.lambda);
  std::vector<Vector> survivors;
  for (const WindowEntry& entry : state.window) {
    for (int i = 0; i < entry.directions.cols(); ++i) {
      const double n = entry.directions.col(i).norm();
      if (n == 0.0) continue;
      const double ceiling = state.g.dot(entry.directions.col(i)) / n +
                             root_lambda * U / std::sqrt(state.lambda + n * n);
      if (ceiling <= best_score - 1e-15) continue;
      survivors.push_back(entry.directions.col(i) / n);
    }
  }
  Vector top_window;
  double top_window_score = -std::numeric_limits<double>::infinity();
  if (!survivors.empty()) {
    Matrix W(d, static_cast<int>(survivors.size()));
    for (int i = 0; i < W.cols(); ++i) W.col(i) = survivors[i];
    const Matrix G = state.C_inverse.selfadjointView<Eigen::Lower>() * W;
    for (int i = 0; i < W.cols(); ++i) {
      const double quad = std::max(W.col(i).dot(G.col(i)), 0.0);
      const double score =
          state.g.dot(W.col(i)) + root_lambda * U * std::sqrt(quad);
      if (score > top_window_score) {
        top_window_score = score;
        top_window = W.col(i);
      }
      if (score > best_score) {
        best = W.col(i);
        best_score = score;
        best_ascended = false;
      }
    }
  }

  if (d <= kMultiStartDim) {
    // Each extra start is nearly free at this size, and the score surface
    // can hold separate basins around the estimate direction and the widest
    // ellipse axis. Ascend from every warm candidate plus both signs of the
    // top eigenvector so a mid-slope scorer cannot shadow the global basin.
    Eigen::SelfAdjointEigenSolver<Matrix> eig(state.C_inverse);
    const Vector ridge = eig.eigenvectors().col(d - 1);
    std::vector<Vector> starts;
    if (g_norm > 0.0) starts.push_back(state.g / g_norm);
    if (top_probe.size() > 0) starts.push_back(top_probe);
    if (top_window.size() > 0) starts.push_back(top_window);
    starts.push_back(ridge);
    starts.push_back(-ridge);
    // Stationarity pins the maximizer to (nu I - c^2 B)^{-1} g with
    // B = C^{-1}, c = sqrt(lambda) U, and nu the unique root of
    // c^2 sum_i gt_i^2 eig_i / (nu - c^2 eig_i)^2 = 1 above c^2 eig_max
    // (gt = V^T g). The root is a scalar bisection in the eigenbasis; the
    // zero-overlap hard case is skipped because the ridge starts cover it.
    if (g_norm > 0.0 && U > 0.0) {
      const double c2 = state.lambda * U * U;
      const Vector eigs = eig.eigenvalues().cwiseMax(0.0);
      const Vector gt = eig.eigenvectors().transpose() * state.g;
      const double top = c2 * eigs(d - 1);
      auto phi2 = [&](double nu) {
        double acc = 0.0;
        for (int i = 0; i < d; ++i) {
          const double den = nu - c2 * eigs(i);
          acc += gt(i) * gt(i) * eigs(i) / (den * den);
        }
        return c2 * acc;
      };
      double lo = top + 1e-14 * (top + 1.0);
      double hi = top + std::sqrt(c2 * eigs(d - 1)) * g_norm + 1.0;
      if (phi2(lo) > 1.0) {
        for (int iter = 0; iter < 200; ++iter) {
          const double mid = 0.5 * (lo + hi);
          (phi2(mid) > 1.0 ? lo : hi) = mid;
        }
        const double nu = 0.5 * (lo + hi);
        Vector st(d);
        for (int i = 0; i < d; ++i) st(i) = gt(i) / (nu - c2 * eigs(i));
        const Vector kkt = eig.eigenvectors() * st;
        const double kkt_norm = kkt.norm();
        if (kkt_norm > 0.0 && kkt.allFinite()) starts.push_back(kkt / kkt_norm);
      }
    }
    for (const Vector& start : starts) {
      consider(sphere_ascent(state, U, start, state.subproblem_iters), true);
    }
  } else if (!best_ascended) {
    // One sweep of the ascent loop streams the whole d*d inverse, so large
    // problems only polish the winning candidate instead of multi-starting.
    consider(sphere_ascent(state, U, best, 50), true);
  }
  return best;
}

int ucb_select_from_columns(const UcbState& state, double U,
                            const Matrix& columns) {
  if (columns.cols() < 1) {
    throw std::invalid_argument("ucb_select_from_columns: no columns");
  }
  if (columns.rows() != state.dim) {
    throw std::invalid_argument("ucb_select_from_columns: dimension mismatch");
  }
  int best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < columns.cols(); ++i) {
    if (std::abs(columns.col(i).norm() - 1.0) > 1e-8) {
      throw std::invalid_argument(
          "ucb_select_from_columns: columns must be unit vectors");
    }
    const double score = ucb_objective(state, U, columns.col(i));
    if (score > best_score) {
      best = i;
      best_score = score;
    }
  }
  return best;
}

}  // namespace ssopt
