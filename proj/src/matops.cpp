#include "covdlm/matops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "covdlm/errors.hpp"

namespace covdlm {

SymMatrix::SymMatrix(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorKind::DimensionMismatch,
                "symmetric matrix must be square, got " + std::to_string(m.rows()) + "x" +
                    std::to_string(m.cols()));
  }
  m_ = 0.5 * (m + m.transpose());
}

SymMatrix SymMatrix::identity(Index n) { return SymMatrix(Matrix::Identity(n, n)); }

SymMatrix SymMatrix::zero(Index n) { return SymMatrix(Matrix::Zero(n, n)); }

SymMatrix SymMatrix::diagonal(const Vector& d) { return SymMatrix(Matrix(d.asDiagonal())); }

double eigen_floor(const Vector& eigenvalues) {
  const double largest = eigenvalues.size() == 0 ? 0.0 : eigenvalues.cwiseAbs().maxCoeff();
  return 1e-10 * std::max(largest, 1.0);
}

bool all_finite(const Matrix& m) { return m.allFinite(); }

SpectralDecomposition spectral(const SymMatrix& m) {
  if (!m.matrix().allFinite()) {
    throw Error(ErrorKind::NonFiniteInput, "matrix contains non-finite entries");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m.matrix());
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::NonFiniteInput, "eigendecomposition did not converge");
  }
  SpectralDecomposition out;
  out.values = solver.eigenvalues();
  out.vectors = solver.eigenvectors();
  out.floor = eigen_floor(out.values);
  return out;
}

namespace {

SymMatrix recompose(const SpectralDecomposition& sd, const Vector& values) {
  return SymMatrix(sd.vectors * values.asDiagonal() * sd.vectors.transpose());
}

void require_not_negative(const SpectralDecomposition& sd) {
  if (sd.values.size() > 0 && sd.values.minCoeff() < -sd.floor) {
    throw Error(ErrorKind::NotPositiveDefinite,
                "matrix has eigenvalue " + std::to_string(sd.values.minCoeff()) +
                    " below -" + std::to_string(sd.floor));
  }
}

void require_invertible(const SpectralDecomposition& sd) {
  require_not_negative(sd);
  if (sd.values.size() > 0 && sd.values.minCoeff() <= sd.floor) {
    throw Error(ErrorKind::Singular, "matrix has eigenvalue " +
                                         std::to_string(sd.values.minCoeff()) +
                                         " at or below the floor " + std::to_string(sd.floor));
  }
}

}  // namespace

SymMatrix symmetric_sqrt(const SymMatrix& m) {
  const auto sd = spectral(m);
  require_not_negative(sd);
  const Vector roots = sd.values.cwiseMax(0.0).cwiseSqrt();
  return recompose(sd, roots);
}

SymMatrix symmetric_inv_sqrt(const SymMatrix& m) {
  const auto sd = spectral(m);
  require_invertible(sd);
  const Vector roots = sd.values.cwiseSqrt().cwiseInverse();
  return recompose(sd, roots);
}

InverseFactors inverse_factors(const SymMatrix& m) {
  const auto sd = spectral(m);
  require_invertible(sd);
  const Vector inv = sd.values.cwiseInverse();
  return {recompose(sd, inv), recompose(sd, inv.cwiseSqrt())};
}

SymMatrix covariance_root(const SymMatrix& m) {
  const auto sd = spectral(m);
  const double scale = std::max(sd.values.size() ? sd.values.cwiseAbs().maxCoeff() : 0.0, 1.0);
  if (sd.values.size() > 0 && sd.values.minCoeff() < -1e-8 * scale) {
    throw Error(ErrorKind::NotPositiveDefinite, "covariance has eigenvalue " +
                                                    std::to_string(sd.values.minCoeff()));
  }
  return recompose(sd, sd.values.cwiseMax(0.0).cwiseSqrt());
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Vector vec(const Matrix& m) { return m.reshaped(); }

bool is_symmetric(const Matrix& m, double rel_tol) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(m.cwiseAbs().maxCoeff(), 1.0);
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

Vector vech(const Matrix& m) {
  if (!is_symmetric(m)) {
    throw Error(ErrorKind::NotSymmetric, "vech requires a symmetric matrix");
  }
  const Index p = m.rows();
  Vector out(p * (p + 1) / 2);
  Index k = 0;
  for (Index j = 0; j < p; ++j) {
    for (Index i = j; i < p; ++i) out(k++) = m(i, j);
  }
  return out;
}

SymMatrix unvech(const Vector& v) {
  // p(p+1)/2 = n
  const auto p = static_cast<Index>(std::llround((std::sqrt(8.0 * v.size() + 1.0) - 1.0) / 2.0));
  if (p * (p + 1) / 2 != v.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                "length " + std::to_string(v.size()) + " is not a triangular number");
  }
  Matrix m(p, p);
  Index k = 0;
  for (Index j = 0; j < p; ++j) {
    for (Index i = j; i < p; ++i) {
      m(i, j) = v(k);
      m(j, i) = v(k);
      ++k;
    }
  }
  return SymMatrix(m);
}

Matrix duplication(Index p) {
  Matrix d = Matrix::Zero(p * p, p * (p + 1) / 2);
  Index k = 0;
  for (Index j = 0; j < p; ++j) {
    for (Index i = j; i < p; ++i) {
      d(j * p + i, k) = 1.0;
      d(i * p + j, k) = 1.0;
      ++k;
    }
  }
  return d;
}

double relative_frobenius_error(const Matrix& actual, const Matrix& expected) {
  const double denom = std::max(expected.norm(), std::numeric_limits<double>::min());
  return (actual - expected).norm() / denom;
}

}  // namespace covdlm
