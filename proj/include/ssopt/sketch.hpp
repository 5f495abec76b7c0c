#pragma once

#include <stdexcept>
#include <string>

#include "ssopt/types.hpp"

namespace ssopt {

/// Thrown when an operation requires a full-column-rank sketch but the
/// supplied matrix is numerically rank deficient.
struct RankDeficient : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class SketchKind { gaussian, hashing, haar };

struct SketchMatrix {
  Matrix entries;  // d x p
  SketchKind kind = SketchKind::gaussian;
  int hash_weight = 0;  // nonzeros per column, hashing only

  Eigen::Index rows() const { return entries.rows(); }
  Eigen::Index cols() const { return entries.cols(); }
};

/// First p columns of a Haar-distributed n x n orthogonal matrix (QR of a
/// standard Gaussian matrix, R-diagonal sign correction).
Matrix haar_orthogonal(int n, int p, Rng& rng);

/// Dense sketch with i.i.d. N(0, 1/p) entries. Redrawn until numerically
/// full column rank.
SketchMatrix gaussian_sketch(int d, int p, Rng& rng);

/// Sparse sketch: each column has exactly h nonzero rows (chosen without
/// replacement) with values +-1/sqrt(h). Redrawn until full column rank.
SketchMatrix hashing_sketch(int d, int p, int h, Rng& rng);

/// sqrt(d/p) times the first p columns of a Haar orthogonal matrix, so that
/// S^T S = (d/p) I holds exactly.
SketchMatrix haar_sketch(int d, int p, Rng& rng);

/// Appends p fresh orthonormal columns orthogonal to span(S): project a
/// Gaussian block off S, then orthonormalize. S must have orthonormal
/// columns (it may have zero of them); requires p <= d - cols(S).
Matrix orthogonal_augment(const Matrix& S, int p, Rng& rng);

/// v mapped onto span(S): S (S^T S)^{-1} S^T v, solved by Cholesky with a
/// one-shot 1e-12 jitter retry. Throws RankDeficient when S has dependent
/// columns.
Vector projection_apply(const Matrix& S, const Vector& v);

/// Same projection given S^T v directly, so the full vector v is never
/// needed: S (S^T S)^{-1} responses.
Vector projection_from_responses(const Matrix& S, const Vector& responses);

/// g^T P g / ||g||^2 for the span projector P; 0 when g is orthogonal to the
/// span, 1 when g lies inside. Errors on g = 0.
double alignment_ratio(const Matrix& S, const Vector& g);

struct SketchSpec {
  SketchKind kind = SketchKind::gaussian;
  int p = 1;
  int h = 1;  // hashing only
};

/// Parses "gaussian:p=4", "hashing:p=4,h=2", "haar:p=4".
SketchSpec parse_sketch_spec(const std::string& text);
std::string to_string(const SketchSpec& spec);

SketchMatrix draw_sketch(const SketchSpec& spec, int d, Rng& rng);

}  // namespace ssopt
