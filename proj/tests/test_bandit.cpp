#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "doctest.h"
#include "ssopt/bandit.hpp"

using ssopt::Matrix;
using ssopt::Rng;
using ssopt::UcbState;
using ssopt::Vector;

namespace {

// Oracle: form C = lambda I + sum of outer products explicitly and invert it
// through a full eigendecomposition, sidestepping the incremental path.
Matrix dense_C(const UcbState& state) {
  Matrix C = state.lambda * Matrix::Identity(state.dim, state.dim);
  for (const auto& entry : state.window) {
    C += entry.directions * entry.directions.transpose();
  }
  return C;
}

Matrix dense_inverse(const Matrix& C) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(C);
  return es.eigenvectors() *
         es.eigenvalues().cwiseInverse().asDiagonal() *
         es.eigenvectors().transpose();
}

double oracle_objective(const UcbState& state, double U, const Vector& s) {
  const Matrix Cinv = dense_inverse(dense_C(state));
  const Vector g = Cinv * state.b;
  return g.dot(s) + std::sqrt(state.lambda) * U * std::sqrt(s.dot(Cinv * s));
}

Matrix random_directions(int d, int m, Rng& rng, double scale) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix D(d, m);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < d; ++i) D(i, j) = scale * normal(rng);
  }
  return D;
}

}  // namespace

TEST_CASE("ucb_init sets the ridge-only state") {
  const auto state = ssopt::ucb_init(6, 0.25, 4, 0.8);
  CHECK(state.dim == 6);
  CHECK(state.window.empty());
  CHECK(state.b.norm() == 0.0);
  CHECK(state.g.norm() == 0.0);
  CHECK(state.U == 0.0);
  CHECK_FALSE(state.bound_initialized);
  CHECK(state.dense_rebuilds == 0);
  const Matrix expect = Matrix::Identity(6, 6) / 0.25;
  CHECK((state.C_inverse - expect).cwiseAbs().maxCoeff() == doctest::Approx(0.0));

  CHECK_THROWS_AS(ssopt::ucb_init(0, 1.0, 1, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(ssopt::ucb_init(3, 0.0, 1, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(ssopt::ucb_init(3, 1.0, -1, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(ssopt::ucb_init(3, 1.0, 1, 1.5), std::invalid_argument);
}

TEST_CASE("incremental inverse tracks the dense oracle over long runs") {
  const int d = 20;
  Rng rng(11);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<int> cols(1, 3);
  auto state = ssopt::ucb_init(d, 1.0 / d, 10, 0.8);

  for (int step = 0; step < 100; ++step) {
    const int m = cols(rng);
    // Column scales typical of sketch output, with some normalized ones.
    Matrix D = random_directions(d, m, rng, 1.0);
    if (step % 4 == 0) D.col(0) /= std::max(D.col(0).norm(), 1e-12);
    Vector r(m);
    for (int j = 0; j < m; ++j) r(j) = normal(rng);
    ssopt::ucb_update(state, D, r);

    CHECK(state.window.size() <= 11);
    const Matrix Cinv_oracle = dense_inverse(dense_C(state));
    CHECK((state.C_inverse - Cinv_oracle).cwiseAbs().maxCoeff() < 1e-8);
    const Vector g_oracle = dense_C(state).ldlt().solve(state.b);
    CHECK((state.g - g_oracle).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("incremental inverse survives badly scaled columns") {
  const int d = 12;
  Rng rng(29);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto state = ssopt::ucb_init(d, 1.0 / d, 6, 0.8);
  for (int step = 0; step < 80; ++step) {
    Matrix D = random_directions(d, 2, rng, step % 3 == 0 ? 10.0 : 1.0);
    Vector r(2);
    r << normal(rng), normal(rng);
    ssopt::ucb_update(state, D, r);
  }
  const Matrix Cinv_oracle = dense_inverse(dense_C(state));
  CHECK((state.C_inverse - Cinv_oracle).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("window keeps exactly memory+1 iterations") {
  const int d = 5;
  auto state = ssopt::ucb_init(d, 0.5, 0, 0.8);
  Rng rng(3);
  Matrix first = random_directions(d, 2, rng, 1.0);
  Vector r1 = Vector::Ones(2);
  ssopt::ucb_update(state, first, r1);
  CHECK(state.window.size() == 1);

  Matrix second = random_directions(d, 1, rng, 1.0);
  Vector r2(1);
  r2 << -2.0;
  ssopt::ucb_update(state, second, r2);
  CHECK(state.window.size() == 1);

  // With memory 0 only the newest iteration may contribute.
  const Matrix expect_C =
      0.5 * Matrix::Identity(d, d) + second * second.transpose();
  const Matrix residual =
      state.C_inverse * expect_C - Matrix::Identity(d, d);
  CHECK(residual.cwiseAbs().maxCoeff() < 1e-10);
  CHECK((state.b + 2.0 * second.col(0)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("unsafe downdate falls back to a counted dense rebuild") {
  const int d = 4;
  auto state = ssopt::ucb_init(d, 0.5, 0, 0.8);
  Matrix D1 = Matrix::Zero(d, 1);
  D1(0, 0) = 1.0;
  Vector r1(1);
  r1 << 1.0;
  ssopt::ucb_update(state, D1, r1);
  CHECK(state.dense_rebuilds == 0);

  // Corrupt the cached inverse so that removing the stored e0 column sees
  // denominator 1 - e0^T C^{-1} e0 = 0, below the safety floor. The rebuild
  // must then restore consistency from the window alone.
  state.C_inverse = Matrix::Identity(d, d);

  Matrix D2 = Matrix::Zero(d, 1);
  D2(1, 0) = 2.0;
  Vector r2(1);
  r2 << 0.5;
  ssopt::ucb_update(state, D2, r2);
  CHECK(state.dense_rebuilds == 1);

  const Matrix Cinv_oracle = dense_inverse(dense_C(state));
  CHECK((state.C_inverse - Cinv_oracle).cwiseAbs().maxCoeff() < 1e-12);
  const Vector g_oracle = Cinv_oracle * state.b;
  CHECK((state.g - g_oracle).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("observation validation") {
  auto state = ssopt::ucb_init(3, 1.0, 2, 0.8);
  Matrix D = Matrix::Identity(3, 2);
  Vector r = Vector::Ones(2);
  CHECK_NOTHROW(ssopt::ucb_update(state, D, r));

  Matrix wrong_rows = Matrix::Identity(4, 2);
  CHECK_THROWS_AS(ssopt::ucb_update(state, wrong_rows, r),
                  std::invalid_argument);
  Vector short_r = Vector::Ones(1);
  CHECK_THROWS_AS(ssopt::ucb_update(state, D, short_r),
                  std::invalid_argument);
  Vector bad_r(2);
  bad_r << 1.0, std::nan("");
  CHECK_THROWS_AS(ssopt::ucb_update(state, D, bad_r), std::invalid_argument);
}

TEST_CASE("gradient bound: direct seed then exponential smoothing") {
  auto state = ssopt::ucb_init(10, 0.1, 3, 0.8);
  const double first = ssopt::update_gradient_bound(state, 3.0, 10, 2);
  CHECK(first == doctest::Approx(15.0));
  CHECK(state.bound_initialized);
  const double second = ssopt::update_gradient_bound(state, 2.0, 10, 2);
  CHECK(second == doctest::Approx(0.8 * 15.0 + 0.2 * 10.0));

  CHECK_THROWS_AS(ssopt::update_gradient_bound(state, 1.0, 9, 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(ssopt::update_gradient_bound(state, 1.0, 10, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(ssopt::update_gradient_bound(state, -1.0, 10, 2),
                  std::invalid_argument);
}

TEST_CASE("ucb_select: zero bound reduces to the normalized estimate") {
  const int d = 7;
  auto state = ssopt::ucb_init(d, 0.5, 3, 0.8);
  Rng rng(21);
  for (int step = 0; step < 5; ++step) {
    Matrix D = random_directions(d, 2, rng, 1.0);
    Vector r(2);
    r << 1.0, -0.5;
    ssopt::ucb_update(state, D, r);
  }
  REQUIRE(state.g.norm() > 0.0);
  const Vector s = ssopt::ucb_select(state, 0.0);
  CHECK((s - state.g / state.g.norm()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("ucb_select: zero estimate scores exactly U on a fresh state") {
  auto state = ssopt::ucb_init(5, 2.0, 3, 0.8);
  // C = lambda I, g = 0: every unit vector attains objective value U.
  const Vector s = ssopt::ucb_select(state, 4.0);
  CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ssopt::ucb_objective(state, 4.0, s) ==
        doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("ucb_select dominates the natural candidates") {
  Rng rng(77);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int rep = 0; rep < 12; ++rep) {
    const int d = 3 + rep % 5;
    auto state = ssopt::ucb_init(d, 1.0 / d, 4, 0.8);
    for (int step = 0; step < 6; ++step) {
      const int m = 1 + step % 2;
      Matrix D = random_directions(d, m, rng, 1.0);
      Vector r(m);
      for (int j = 0; j < m; ++j) r(j) = normal(rng);
      ssopt::ucb_update(state, D, r);
    }
    const double U = std::abs(normal(rng)) + 0.1;
    const Vector s = ssopt::ucb_select(state, U);
    CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-10));
    const double chosen = ssopt::ucb_objective(state, U, s);
    if (state.g.norm() > 0.0) {
      const double via_g =
          ssopt::ucb_objective(state, U, state.g / state.g.norm());
      CHECK(chosen >= via_g - 1e-9);
    }
    for (const auto& entry : state.window) {
      for (int i = 0; i < entry.directions.cols(); ++i) {
        const Vector col = entry.directions.col(i);
        if (col.norm() == 0.0) continue;
        const double via_col =
            ssopt::ucb_objective(state, U, col / col.norm());
        CHECK(chosen >= via_col - 1e-9);
      }
    }
  }
}

TEST_CASE("ucb_select matches an exhaustive angular sweep in the plane") {
  Rng rng(5150);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.2, 3.0);
  for (int rep = 0; rep < 20; ++rep) {
    auto state = ssopt::ucb_init(2, unif(rng), 3, 0.8);
    for (int step = 0; step < 4; ++step) {
      Matrix D = random_directions(2, 1, rng, unif(rng));
      Vector r(1);
      r << normal(rng);
      ssopt::ucb_update(state, D, r);
    }
    const double U = unif(rng);
    const Vector s = ssopt::ucb_select(state, U);
    const double chosen = oracle_objective(state, U, s);

    double best = -1e300;
    const int grid = 100000;
    for (int i = 0; i < grid; ++i) {
      const double theta = 2.0 * M_PI * i / grid;
      Vector cand(2);
      cand << std::cos(theta), std::sin(theta);
      best = std::max(best, oracle_objective(state, U, cand));
    }
    const double scale = std::max(std::abs(best), 1.0);
    CHECK(chosen >= best - 1e-3 * scale);
  }
}

TEST_CASE("ucb_select is deterministic for a fixed state") {
  auto state = ssopt::ucb_init(6, 0.3, 2, 0.8);
  Rng rng(9);
  for (int step = 0; step < 3; ++step) {
    Matrix D = random_directions(6, 2, rng, 1.0);
    Vector r(2);
    r << 0.4, -1.1;
    ssopt::ucb_update(state, D, r);
  }
  const Vector a = ssopt::ucb_select(state, 1.7);
  const Vector b = ssopt::ucb_select(state, 1.7);
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("ucb_select_from_columns picks the argmax, low index on ties") {
  const int d = 4;
  auto state = ssopt::ucb_init(d, 1.0, 2, 0.8);
  Matrix D(d, 1);
  D.col(0) = Vector::Unit(d, 0);
  Vector r(1);
  r << 2.0;
  ssopt::ucb_update(state, D, r);

  Matrix cols = Matrix::Identity(d, d);
  // g points along e0, so column 0 must win.
  CHECK(ssopt::ucb_select_from_columns(state, 0.5, cols) == 0);

  // Symmetric state: all scores equal, lowest index wins.
  auto fresh = ssopt::ucb_init(d, 1.0, 2, 0.8);
  CHECK(ssopt::ucb_select_from_columns(fresh, 1.0, cols) == 0);

  Matrix non_unit = cols;
  non_unit.col(1) *= 2.0;
  CHECK_THROWS_AS(ssopt::ucb_select_from_columns(state, 0.5, non_unit),
                  std::invalid_argument);
  Matrix empty(d, 0);
  CHECK_THROWS_AS(ssopt::ucb_select_from_columns(state, 0.5, empty),
                  std::invalid_argument);
  CHECK_THROWS_AS(ssopt::ucb_select(state, -1.0), std::invalid_argument);
}
