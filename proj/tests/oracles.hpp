#pragma once

// Reference computations written independently of the library code paths.

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "covdlm/dlm.hpp"

namespace covdlm::oracle {

// n0 S0 + sum S_{i-1}^{1/2} Q_i^{-1/2} e e' Q_i^{-1/2} S_{i-1}^{1/2}, over n0 + t.
inline Matrix sum_form(const Matrix& S0, double n0, const std::vector<SumTerm>& history) {
  Matrix total = n0 * S0;
  for (const auto& h : history) {
    Eigen::SelfAdjointEigenSolver<Matrix> s(h.S_prev.matrix());
    Eigen::SelfAdjointEigenSolver<Matrix> q(h.Q.matrix());
    const Vector z = s.operatorSqrt() * q.operatorInverseSqrt() * h.e;
    total += z * z.transpose();
  }
  return total / (n0 + static_cast<double>(history.size()));
}

// Posterior mean of vec(Phi) under y_t = Phi x_t + eps, eps ~ N(0, sigma),
// prior vec(Phi) ~ N(m0, P0): the normal equations, accumulated directly.
inline Vector batch_regression(const std::vector<Vector>& data, int order, const Matrix& sigma,
                               const Vector& m0, const Matrix& P0) {
  const Index p = data.front().size();
  const Index d = p * p * order;
  const Matrix P0_inv = P0.ldlt().solve(Matrix::Identity(d, d));
  const Matrix sigma_inv = sigma.ldlt().solve(Matrix::Identity(p, p));
  Matrix precision = P0_inv;
  Vector rhs = P0_inv * m0;
  for (std::size_t t = static_cast<std::size_t>(order); t < data.size(); ++t) {
    // Row k of Phi x multiplies vec(Phi) by (x' (x) e_k'); build that p x d map.
    Matrix X = Matrix::Zero(p, d);
    for (int lag = 0; lag < order; ++lag) {
      const Vector& y = data[t - 1 - static_cast<std::size_t>(lag)];
      for (Index j = 0; j < p; ++j) {
        const Index col = (lag * p + j);  // column of Phi
        for (Index k = 0; k < p; ++k) X(k, col * p + k) = y(j);
      }
    }
    precision += X.transpose() * sigma_inv * X;
    rhs += X.transpose() * sigma_inv * data[t];
  }
  return precision.ldlt().solve(rhs);
}

// Coefficients (ascending powers) of det(I - sum_i Phi_i z^i), found by
// evaluating the determinant at roots of unity and inverting the DFT.
inline std::vector<double> characteristic_polynomial(const std::vector<Matrix>& phis) {
  const Index p = phis.front().rows();
  const int degree = static_cast<int>(p * std::ssize(phis));
  const int K = degree + 1;
  using C = std::complex<double>;
  using CMatrix = Eigen::Matrix<C, Eigen::Dynamic, Eigen::Dynamic>;
  std::vector<C> values(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) {
    const C z = std::polar(1.0, 2.0 * std::numbers::pi * k / K);
    CMatrix m = CMatrix::Identity(p, p);
    C zi = 1.0;
    for (const auto& phi : phis) {
      zi *= z;
      m -= zi * phi.cast<C>();
    }
    values[static_cast<std::size_t>(k)] = m.determinant();
  }
  std::vector<double> coeffs(static_cast<std::size_t>(K));
  for (int j = 0; j < K; ++j) {
    C acc = 0.0;
    for (int k = 0; k < K; ++k) {
      acc += values[static_cast<std::size_t>(k)] * std::polar(1.0, -2.0 * std::numbers::pi * j * k / K);
    }
    coeffs[static_cast<std::size_t>(j)] = acc.real() / K;
  }
  return coeffs;
}

// All complex roots of a real polynomial (ascending coefficients), Durand-Kerner.
inline std::vector<std::complex<double>> polynomial_roots(std::vector<double> coeffs) {
  using C = std::complex<double>;
  double scale = 0.0;
  for (double c : coeffs) scale = std::max(scale, std::abs(c));
  while (coeffs.size() > 1 && std::abs(coeffs.back()) < 1e-13 * scale) coeffs.pop_back();
  const int n = static_cast<int>(coeffs.size()) - 1;
  if (n < 1) return {};
  const double lead = coeffs.back();
  std::vector<C> roots(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) roots[i] = std::pow(C(0.4, 0.9), i);
  auto eval = [&](C z) {
    C acc = 0.0;
    for (int i = n; i >= 0; --i) acc = acc * z + coeffs[static_cast<std::size_t>(i)] / lead;
    return acc;
  };
  for (int iter = 0; iter < 2000; ++iter) {
    double change = 0.0;
    for (int i = 0; i < n; ++i) {
      C denom = 1.0;
      for (int j = 0; j < n; ++j)
        if (j != i) denom *= roots[i] - roots[j];
      const C step = eval(roots[i]) / denom;
      roots[i] -= step;
      change = std::max(change, std::abs(step));
    }
    if (change < 1e-15) break;
  }
  return roots;
}

// Stationary iff every root of det(I - sum Phi_i z^i) lies outside the unit circle.
inline bool stationary_by_roots(const std::vector<Matrix>& phis, double* min_modulus = nullptr) {
  const auto roots = polynomial_roots(characteristic_polynomial(phis));
  double smallest = 1e300;
  for (const auto& r : roots) smallest = std::min(smallest, std::abs(r));
  if (min_modulus) *min_modulus = smallest;
  return smallest > 1.0;
}

}  // namespace covdlm::oracle
