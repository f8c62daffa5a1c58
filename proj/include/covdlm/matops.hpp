#pragma once

#include <Eigen/Dense>

namespace covdlm {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Dense symmetric matrix. The stored entries are always exactly symmetric:
/// construction replaces the input by (M + M')/2.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(const Matrix& m);

  static SymMatrix identity(Index n);
  static SymMatrix zero(Index n);
  static SymMatrix diagonal(const Vector& d);

  Index dim() const noexcept { return m_.rows(); }
  const Matrix& matrix() const noexcept { return m_; }
  double operator()(Index i, Index j) const { return m_(i, j); }

 private:
  Matrix m_;
};

/// Eigenvalues below this are treated as degenerate:
/// 1e-10 * max(largest |eigenvalue|, 1).
double eigen_floor(const Vector& eigenvalues);

struct SpectralDecomposition {
  Vector values;   // ascending
  Matrix vectors;  // orthonormal columns
  double floor = 0.0;
};

/// Self-adjoint eigendecomposition. Throws NonFiniteInput on NaN/Inf entries.
SpectralDecomposition spectral(const SymMatrix& m);

/// Unique symmetric PSD root. Eigenvalues in [-floor, 0) are treated as 0;
/// anything more negative is NotPositiveDefinite.
SymMatrix symmetric_sqrt(const SymMatrix& m);

/// Symmetric root of the inverse. Singular when an eigenvalue is <= floor.
SymMatrix symmetric_inv_sqrt(const SymMatrix& m);

struct InverseFactors {
  SymMatrix inverse;
  SymMatrix inv_sqrt;
};

/// M^{-1} and M^{-1/2} from a single decomposition, with the error contract
/// of symmetric_inv_sqrt.
InverseFactors inverse_factors(const SymMatrix& m);

/// PSD root for sampling from N(0, M). Negative rounding noise (down to
/// -1e-8 * scale) is clamped to zero rather than floored, so a degenerate
/// covariance yields a degenerate root.
SymMatrix covariance_root(const SymMatrix& m);

Matrix kron(const Matrix& a, const Matrix& b);

/// Column stacking.
Vector vec(const Matrix& m);

/// Column-wise stacking of the lower triangle. Throws NotSymmetric unless
/// the input is symmetric to 1e-12 relative tolerance.
Vector vech(const Matrix& m);

/// Inverse of vech.
SymMatrix unvech(const Vector& v);

/// D_p with D_p * vech(M) == vec(M) for symmetric p x p M.
Matrix duplication(Index p);

bool is_symmetric(const Matrix& m, double rel_tol = 1e-12);

/// ||actual - expected||_F / max(||expected||_F, tiny)
double relative_frobenius_error(const Matrix& actual, const Matrix& expected);

bool all_finite(const Matrix& m);

}  // namespace covdlm
