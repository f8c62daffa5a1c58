#include "covdlm/models.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "covdlm/errors.hpp"

namespace covdlm {

namespace {

void require_positive(int value, const char* what) {
  if (value < 1) {
    throw Error(ErrorKind::InvalidDimension,
                std::string(what) + " must be >= 1, got " + std::to_string(value));
  }
}

void require_discount(double delta) {
  if (!(delta > 0.0 && delta <= 1.0)) {
    throw Error(ErrorKind::InvalidDiscount,
                "discount factor must lie in (0, 1], got " + std::to_string(delta));
  }
}

// Block-diagonal (F, G) from a per-series 2-state block.
ModelSpec two_state_blocks(Family family, int p, const Matrix& g_block) {
  ModelSpec spec;
  spec.family = family;
  spec.p = p;
  spec.d = 2 * p;
  Matrix F = Matrix::Zero(spec.d, p);
  Matrix G = Matrix::Zero(spec.d, spec.d);
  for (int i = 0; i < p; ++i) {
    F(2 * i, i) = 1.0;
    G.block(2 * i, 2 * i, 2, 2) = g_block;
  }
  spec.design = std::move(F);
  spec.transition = std::move(G);
  spec.evolution = FixedEvolution{SymMatrix::identity(spec.d)};
  return spec;
}

LaggedDesign var_lagged_design(int p, int order) {
  return LaggedDesign{order, [p, order](std::span<const Vector> recent) {
                        return var_design(stack_lags(recent, order), p, order);
                      }};
}

}  // namespace

ModelSpec local_level(int p) {
  require_positive(p, "p");
  ModelSpec spec;
  spec.family = Family::LocalLevel;
  spec.p = p;
  spec.d = p;
  spec.design = Matrix(Matrix::Identity(p, p));
  spec.transition = Matrix::Identity(p, p);
  spec.evolution = FixedEvolution{SymMatrix::identity(p)};
  return spec;
}

ModelSpec linear_trend(int p) {
  require_positive(p, "p");
  Matrix block(2, 2);
  block << 1.0, 1.0, 0.0, 1.0;
  return two_state_blocks(Family::LinearTrend, p, block);
}

ModelSpec seasonal(int p, int period) {
  require_positive(p, "p");
  if (period < 2) {
    throw Error(ErrorKind::InvalidDimension,
                "seasonal period must be >= 2, got " + std::to_string(period));
  }
  const double w = 2.0 * std::numbers::pi / period;
  Matrix block(2, 2);
  block << std::cos(w), std::sin(w), -std::sin(w), std::cos(w);
  return two_state_blocks(Family::Seasonal, p, block);
}

Vector stack_lags(std::span<const Vector> recent, int order) {
  if (std::ssize(recent) < order) {
    throw Error(ErrorKind::DimensionMismatch, "need " + std::to_string(order) +
                                                  " lagged observations, got " +
                                                  std::to_string(recent.size()));
  }
  const Index p = recent.front().size();
  Vector x(p * order);
  for (int k = 0; k < order; ++k) {
    if (recent[k].size() != p) {
      throw Error(ErrorKind::DimensionMismatch, "lagged observations differ in length");
    }
    x.segment(k * p, p) = recent[k];
  }
  return x;
}

Matrix var_design(const Vector& lagged, int p, int order) {
  if (p < 1 || order < 1 || lagged.size() != static_cast<Index>(p) * order) {
    throw Error(ErrorKind::DimensionMismatch, "lag buffer must have length p*order=" +
                                                  std::to_string(p * order) + ", got " +
                                                  std::to_string(lagged.size()));
  }
  return kron(lagged, Matrix::Identity(p, p));
}

ModelSpec var_model(int p, int order) {
  require_positive(p, "p");
  require_positive(order, "VAR order");
  ModelSpec spec;
  spec.family = Family::Var;
  spec.p = p;
  spec.d = p * p * order;
  spec.design = var_lagged_design(p, order);
  spec.transition = Matrix::Identity(spec.d, spec.d);
  spec.evolution = FixedEvolution{SymMatrix::zero(spec.d)};
  return spec;
}

ModelSpec tvvar_model(int p, int order, double delta) {
  require_discount(delta);
  ModelSpec spec = var_model(p, order);
  spec.family = Family::TvVar;
  spec.evolution = DiscountEvolution{delta, {}};
  return spec;
}

std::vector<Matrix> coefficients_from_state(const Vector& theta, int p, int order) {
  if (theta.size() != static_cast<Index>(p) * p * order) {
    throw Error(ErrorKind::DimensionMismatch, "state length must be p*p*order");
  }
  const Matrix phi = theta.reshaped(p, p * order);
  std::vector<Matrix> out;
  for (int k = 0; k < order; ++k) out.emplace_back(phi.middleCols(k * p, p));
  return out;
}

Vector state_from_coefficients(std::span<const Matrix> phis) {
  if (phis.empty()) throw Error(ErrorKind::InvalidDimension, "need at least one coefficient");
  const Index p = phis.front().rows();
  Matrix phi(p, p * static_cast<Index>(phis.size()));
  for (std::size_t k = 0; k < phis.size(); ++k) {
    if (phis[k].rows() != p || phis[k].cols() != p) {
      throw Error(ErrorKind::DimensionMismatch, "coefficient matrices must all be p x p");
    }
    phi.middleCols(static_cast<Index>(k) * p, p) = phis[k];
  }
  return vec(phi);
}

Matrix companion(std::span<const Matrix> phis) {
  const Vector theta = state_from_coefficients(phis);  // validates shapes
  const Index p = phis.front().rows();
  const Index order = static_cast<Index>(phis.size());
  Matrix c = Matrix::Zero(p * order, p * order);
  c.topRows(p) = theta.reshaped(p, p * order);
  if (order > 1) c.bottomLeftCorner(p * (order - 1), p * (order - 1)).setIdentity();
  return c;
}

StationarityResult stationarity_check(std::span<const Matrix> phis) {
  const Matrix c = companion(phis);
  Eigen::EigenSolver<Matrix> solver(c, false);
  const double modulus = solver.eigenvalues().cwiseAbs().maxCoeff();
  return {modulus < 1.0 - 1e-9, modulus};
}

ModelSpec dwr_model(int p, double delta) {
  require_positive(p, "p");
  require_discount(delta);
  ModelSpec spec;
  spec.family = Family::Dwr;
  spec.p = p;
  spec.d = p + 1;
  spec.design = LaggedDesign{1, [p](std::span<const Vector> recent) {
                               Matrix F(p + 1, p);
                               F.row(0) = recent.front().transpose();
                               F.bottomRows(p).setIdentity();
                               return F;
                             }};
  spec.transition = Matrix::Identity(spec.d, spec.d);
  std::vector<bool> mask(static_cast<std::size_t>(spec.d), true);
  mask[0] = false;
  spec.evolution = DiscountEvolution{delta, std::move(mask)};
  return spec;
}

Prior default_prior(const ModelSpec& spec, const SymMatrix& S0, double p0_scale, double n0) {
  Prior prior;
  prior.m0 = Vector::Zero(spec.d);
  Vector p0 = Vector::Constant(spec.d, p0_scale);
  if (spec.family == Family::Dwr) {
    prior.m0(0) = 1.0;
    p0(0) = 0.0;
  }
  prior.P0 = SymMatrix::diagonal(p0);
  prior.S0 = S0;
  prior.n0 = n0;
  return prior;
}

SymMatrix mvdlm_s_recursion(const SymMatrix& S_prev, double n_prev, const Vector& e, double U) {
  if (!(U > 0.0)) {
    throw Error(ErrorKind::InvalidScale, "scale U must be positive, got " + std::to_string(U));
  }
  if (e.size() != S_prev.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "error vector and S disagree in size");
  }
  return SymMatrix((n_prev * S_prev.matrix() + e * e.transpose() / U) / (n_prev + 1.0));
}

MvDlmSpec mvdlm_trend(double delta) {
  require_discount(delta);
  MvDlmSpec spec;
  spec.F = Vector(2);
  spec.F << 1.0, 0.0;
  spec.G = Matrix(2, 2);
  spec.G << 1.0, 1.0, 0.0, 1.0;
  spec.delta = delta;
  return spec;
}

MvDlmFilter::MvDlmFilter(MvDlmSpec spec, Matrix m0, SymMatrix P0, SymMatrix S0, double n0)
    : spec_(std::move(spec)), m_(std::move(m0)), P_(std::move(P0)), S_(std::move(S0)), n0_(n0) {
  const Index d = spec_.F.size();
  require_discount(spec_.delta);
  if (spec_.G.rows() != d || spec_.G.cols() != d || m_.rows() != d || P_.dim() != d ||
      m_.cols() != S_.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "inconsistent matrix-variate DLM dimensions");
  }
  if (!(n0 > 0.0)) throw Error(ErrorKind::InvalidArgument, "n0 must be positive");
}

MvDlmFilter::Step MvDlmFilter::push(const Vector& y) {
  if (y.size() != S_.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "observation length differs from p");
  }
  const Matrix& G = spec_.G;
  const Vector& F = spec_.F;
  const Matrix a = G * m_;
  const Matrix R = G * P_.matrix() * G.transpose() / spec_.delta;
  const double U = F.dot(R * F) + 1.0;
  const Vector e = y - a.transpose() * F;
  const Vector gain = R * F / U;

  Step step{e, SymMatrix(U * S_.matrix())};
  const double n_prev = n();
  m_ = a + gain * e.transpose();
  P_ = SymMatrix(R - gain * gain.transpose() * U);
  S_ = mvdlm_s_recursion(S_, n_prev, e, U);
  ++t_;
  return step;
}

}  // namespace covdlm
