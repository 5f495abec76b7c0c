#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <random>

namespace ssopt {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Rng = std::mt19937_64;

// Mixes a role tag into a base seed so that independent random streams
// (sketch draws, solver internals, embeddings) never alias each other.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t role) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ull * (role + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace ssopt
