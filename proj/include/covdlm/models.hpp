#pragma once

#include <span>
#include <vector>

#include "covdlm/dlm.hpp"

namespace covdlm {

/// F = I_p, G = I_p, Omega = I_p.
ModelSpec local_level(int p);

/// Per-series (level, slope) blocks with G-block [[1,1],[0,1]] and F picking
/// the level. State order is (level_1, slope_1, level_2, slope_2, ...).
/// Omega = I_2p.
ModelSpec linear_trend(int p);

/// Per-series single harmonic: a 2x2 rotation by 2*pi/period, F picking the
/// first coordinate. Omega = I_2p.
ModelSpec seasonal(int p, int period = 12);

/// X_t = [y_{t-1}' ... y_{t-order}']' from observations given newest first.
Vector stack_lags(std::span<const Vector> recent, int order);

/// F_t = X_t (x) I_p, so that F_t' vec(Phi) = Phi X_t.
Matrix var_design(const Vector& lagged, int p, int order);

/// Static VAR(order): theta = vec([Phi_1 ... Phi_order]), G = I, Omega = 0.
ModelSpec var_model(int p, int order);

/// Random-walk coefficients with discount factor delta on the whole state.
/// delta = 1 gives var_model's recursions bit for bit.
ModelSpec tvvar_model(int p, int order, double delta);

struct VarSpec {
  int p = 1;
  int order = 1;
  bool time_varying = false;
  double delta = 1.0;

  ModelSpec build() const {
    return time_varying ? tvvar_model(p, order, delta) : var_model(p, order);
  }
};

/// Splits theta = vec(Phi) back into Phi_1 ... Phi_order.
std::vector<Matrix> coefficients_from_state(const Vector& theta, int p, int order);

/// vec([Phi_1 ... Phi_order]).
Vector state_from_coefficients(std::span<const Matrix> phis);

/// Block companion matrix of a VAR.
Matrix companion(std::span<const Matrix> phis);

struct StationarityResult {
  bool stationary = false;
  double max_root_modulus = 0.0;  // largest companion eigenvalue modulus
};

/// Stationary iff every companion eigenvalue has modulus < 1 - 1e-9.
StationarityResult stationarity_check(std::span<const Matrix> phis);

/// Dynamic walk regression y_t = y_{t-1} + psi_t + eps_t in state form with
/// theta = [1, psi']', F_t' = [y_{t-1}, I_p]. The leading coordinate has no
/// evolution noise; the drift block is discounted by delta.
ModelSpec dwr_model(int p, double delta);

/// Default priors: m0 = 0, P0 = p0_scale * I. For DWR the leading state is
/// pinned at 1 with zero prior variance.
Prior default_prior(const ModelSpec& spec, const SymMatrix& S0, double p0_scale = 1000.0,
                    double n0 = 1.0);

/// S_t = (n_{t-1} S_{t-1} + e e' / U) / (n_{t-1} + 1).
SymMatrix mvdlm_s_recursion(const SymMatrix& S_prev, double n_prev, const Vector& e, double U);

/// Matrix-variate DLM y_t' = F' Theta_t + eps_t', Theta_t = G Theta_{t-1} + omega_t
/// with Var(vec omega_t) = Sigma (x) Omega_t and a discounted Omega_t.
/// The one-step covariance is Q_t = U_t S_{t-1} with U_t = F' R_t F + 1.
struct MvDlmSpec {
  Vector F;  // d
  Matrix G;  // d x d
  double delta = 1.0;
};

/// F = [1, 0]', G = [[1, 1], [0, 1]].
MvDlmSpec mvdlm_trend(double delta);

class MvDlmFilter {
 public:
  MvDlmFilter(MvDlmSpec spec, Matrix m0, SymMatrix P0, SymMatrix S0, double n0);

  struct Step {
    Vector e;
    SymMatrix Q;
  };

  Step push(const Vector& y);

  const Matrix& mean() const noexcept { return m_; }  // d x p
  const SymMatrix& S() const noexcept { return S_; }
  double n() const noexcept { return n0_ + static_cast<double>(t_); }

 private:
  MvDlmSpec spec_;
  Matrix m_;
  SymMatrix P_;
  SymMatrix S_;
  double n0_;
  std::int64_t t_ = 0;
};

}  // namespace covdlm
