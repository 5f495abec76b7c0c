#include "ssopt/sketch.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace ssopt {

namespace {

constexpr double kRankTol = 1e-12;
constexpr int kMaxRedraws = 100;

double smallest_singular_value(const Matrix& S) {
  if (S.cols() <= 64) {
    Eigen::JacobiSVD<Matrix> svd(S);
    return svd.singularValues().minCoeff();
  }
  Eigen::BDCSVD<Matrix> svd(S);
  return svd.singularValues().minCoeff();
}

void check_dims(int d, int p) {
  if (d < 1) throw std::invalid_argument("sketch dimension must be >= 1");
  if (p < 1 || p > d)
    throw std::invalid_argument("sketch width must satisfy 1 <= p <= d");
}

Matrix gaussian_matrix(int rows, int cols, double sd, Rng& rng) {
  std::normal_distribution<double> n(0.0, sd);
  Matrix A(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) A(i, j) = n(rng);
  return A;
}

}  // namespace

Matrix haar_orthogonal(int n, int p, Rng& rng) {
  check_dims(n, p);
  Matrix G = gaussian_matrix(n, p, 1.0, rng);
  Eigen::HouseholderQR<Matrix> qr(G);
  Matrix Q = qr.householderQ() * Matrix::Identity(n, p);
  // Fix the sign ambiguity so the distribution is exactly Haar.
  const Vector rdiag = qr.matrixQR().diagonal().head(p);
  for (int j = 0; j < p; ++j)
    if (rdiag(j) < 0.0) Q.col(j) = -Q.col(j);
  return Q;
}

SketchMatrix gaussian_sketch(int d, int p, Rng& rng) {
  check_dims(d, p);
  const double sd = 1.0 / std::sqrt(double(p));
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    Matrix S = gaussian_matrix(d, p, sd, rng);
    if (smallest_singular_value(S) > kRankTol)
      return SketchMatrix{std::move(S), SketchKind::gaussian, 0};
  }
  throw std::runtime_error("gaussian_sketch: could not draw a full-rank sketch");
}

SketchMatrix hashing_sketch(int d, int p, int h, Rng& rng) {
  check_dims(d, p);
  if (h < 1 || h > d)
    throw std::invalid_argument("hashing weight must satisfy 1 <= h <= d");
  const double val = 1.0 / std::sqrt(double(h));
  std::vector<int> rows(d);
  std::iota(rows.begin(), rows.end(), 0);
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    Matrix S = Matrix::Zero(d, p);
    for (int j = 0; j < p; ++j) {
      // Partial Fisher-Yates: the first h entries become the support.
      for (int i = 0; i < h; ++i) {
        std::uniform_int_distribution<int> pick(i, d - 1);
        std::swap(rows[i], rows[pick(rng)]);
      }
      std::bernoulli_distribution sign(0.5);
      for (int i = 0; i < h; ++i) S(rows[i], j) = sign(rng) ? val : -val;
    }
    if (smallest_singular_value(S) > kRankTol)
      return SketchMatrix{std::move(S), SketchKind::hashing, h};
  }
  throw std::runtime_error("hashing_sketch: could not draw a full-rank sketch");
}

SketchMatrix haar_sketch(int d, int p, Rng& rng) {
  check_dims(d, p);
  Matrix S = std::sqrt(double(d) / double(p)) * haar_orthogonal(d, p, rng);
  return SketchMatrix{std::move(S), SketchKind::haar, 0};
}

Matrix orthogonal_augment(const Matrix& S, int p, Rng& rng) {
  const int d = int(S.rows());
  const int m = int(S.cols());
  if (d < 1) throw std::invalid_argument("orthogonal_augment: empty basis");
  if (p < 1 || p > d - m)
    throw std::invalid_argument(
        "orthogonal_augment: need 1 <= p <= d - cols(S)");
  Matrix A = gaussian_matrix(d, p, 1.0, rng);
  if (m > 0) A -= S * (S.transpose() * A);
  Eigen::HouseholderQR<Matrix> qr(A);
  return qr.householderQ() * Matrix::Identity(d, p);
}

namespace {

// Solves (S^T S) y = S^T v with the shared Cholesky-plus-jitter policy.
// A zero Cholesky pivot can round to a tiny positive value and "succeed",
// so the factorization is trusted only when its pivots are comfortably
// positive; the spectrum then separates genuine rank deficiency from mere
// bad scaling.
Eigen::ColPivHouseholderQR<Matrix> rank_checked_qr(const Matrix& S) {
  Eigen::ColPivHouseholderQR<Matrix> qr(S);
  // Pivot ratio below 1e-7 (condition number beyond ~1e7) counts as rank
  // deficient, the point where even a factored solve stops being reliable.
  qr.setThreshold(1e-7);
  if (qr.rank() < S.cols())
    throw RankDeficient("sketch has numerically dependent columns");
  return qr;
}

Matrix thin_q(const Eigen::ColPivHouseholderQR<Matrix>& qr, int d, int p) {
  return qr.householderQ() * Matrix::Identity(d, p);
}

}  // namespace

Vector projection_apply(const Matrix& S, const Vector& v) {
  if (S.rows() != v.size())
    throw std::invalid_argument("projection_apply: size mismatch");
  if (S.cols() < 1)
    throw std::invalid_argument("projection_apply: empty sketch");
  // Q Q^T v with orthonormal Q never inflates v, no matter how badly the
  // sketch itself is conditioned.
  const auto qr = rank_checked_qr(S);
  const Matrix Q = thin_q(qr, static_cast<int>(S.rows()),
                          static_cast<int>(S.cols()));
  return Q * (Q.transpose() * v);
}

Vector projection_from_responses(const Matrix& S, const Vector& responses) {
  if (S.cols() != responses.size()) {
    throw std::invalid_argument("projection_from_responses: size mismatch");
  }
  if (S.cols() == 0) {
    throw std::invalid_argument("projection_from_responses: empty sketch");
  }
  // With S Pi = Q R, the normal-equations solution S (S^T S)^{-1} r equals
  // Q R^{-T} Pi^T r; one triangular solve instead of a squared-condition
  // Gram factorization.
  const auto qr = rank_checked_qr(S);
  const int p = static_cast<int>(S.cols());
  const Vector permuted = qr.colsPermutation().transpose() * responses;
  const Matrix R = qr.matrixR().topLeftCorner(p, p);
  const Vector z =
      R.transpose().triangularView<Eigen::Lower>().solve(permuted);
  return thin_q(qr, static_cast<int>(S.rows()), p) * z;
}

double alignment_ratio(const Matrix& S, const Vector& g) {
  const double gg = g.squaredNorm();
  if (gg == 0.0)
    throw std::invalid_argument("alignment_ratio: zero gradient");
  const Vector pg = projection_apply(S, g);
  return g.dot(pg) / gg;
}

SketchSpec parse_sketch_spec(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("bad sketch spec: " + text);
  const std::string kind = text.substr(0, colon);
  SketchSpec spec;
  if (kind == "gaussian")
    spec.kind = SketchKind::gaussian;
  else if (kind == "hashing")
    spec.kind = SketchKind::hashing;
  else if (kind == "haar")
    spec.kind = SketchKind::haar;
  else
    throw std::invalid_argument("unknown sketch kind: " + kind);

  std::string rest = text.substr(colon + 1);
  bool saw_p = false;
  while (!rest.empty()) {
    std::string field = rest;
    if (auto comma = rest.find(','); comma != std::string::npos) {
      field = rest.substr(0, comma);
      rest = rest.substr(comma + 1);
    } else {
      rest.clear();
    }
    if (field.rfind("p=", 0) == 0) {
      spec.p = std::stoi(field.substr(2));
      saw_p = true;
    } else if (field.rfind("h=", 0) == 0 && spec.kind == SketchKind::hashing) {
      spec.h = std::stoi(field.substr(2));
    } else {
      throw std::invalid_argument("bad sketch spec field: " + field);
    }
  }
  if (!saw_p) throw std::invalid_argument("sketch spec must set p: " + text);
  return spec;
}

std::string to_string(const SketchSpec& spec) {
  switch (spec.kind) {
    case SketchKind::gaussian:
      return "gaussian:p=" + std::to_string(spec.p);
    case SketchKind::hashing:
      return "hashing:p=" + std::to_string(spec.p) +
             ",h=" + std::to_string(spec.h);
    case SketchKind::haar:
      return "haar:p=" + std::to_string(spec.p);
  }
  return {};
}

SketchMatrix draw_sketch(const SketchSpec& spec, int d, Rng& rng) {
  switch (spec.kind) {
    case SketchKind::gaussian:
      return gaussian_sketch(d, spec.p, rng);
    case SketchKind::hashing:
      return hashing_sketch(d, spec.p, spec.h, rng);
    case SketchKind::haar:
      return haar_sketch(d, spec.p, rng);
  }
  throw std::logic_error("unreachable sketch kind");
}

}  // namespace ssopt
