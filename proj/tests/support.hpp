#pragma once

#include <random>

#include "covdlm/matops.hpp"

namespace covdlm::testing {

inline Matrix random_matrix(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> z;
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = z(rng);
  return m;
}

inline Vector random_vector(Index n, std::mt19937_64& rng) { return random_matrix(n, 1, rng); }

// A A' + shift I
inline SymMatrix random_spd(Index n, std::mt19937_64& rng, double shift = 0.5) {
  const Matrix a = random_matrix(n, n, rng);
  return SymMatrix(a * a.transpose() + shift * Matrix::Identity(n, n));
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace covdlm::testing
