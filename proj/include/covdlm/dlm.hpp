#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "covdlm/matops.hpp"

namespace covdlm {

/// theta_t = G theta_{t-1} + omega_t with omega_t ~ N(0, omega).
struct FixedEvolution {
  SymMatrix omega;
};

/// R_t = G P_{t-1} G' / delta on the discounted block. An empty mask
/// discounts the whole state; otherwise only entries (i, j) with both
/// mask[i] and mask[j] set are inflated.
struct DiscountEvolution {
  double delta = 1.0;
  std::vector<bool> mask;
};

using Evolution = std::variant<FixedEvolution, DiscountEvolution>;

/// Design that depends on the most recent observations. The builder receives
/// them newest first (recent[0] = y_{t-1}) and returns the d x p matrix F_t.
struct LaggedDesign {
  int lags = 1;
  std::function<Matrix(std::span<const Vector> recent)> build;
};

using Design = std::variant<Matrix, LaggedDesign>;

enum class Family { LocalLevel, LinearTrend, Seasonal, Var, TvVar, Dwr, Custom };

std::string_view to_string(Family family) noexcept;

/// y_t = F_t' theta_t + eps_t,  theta_t = G theta_{t-1} + omega_t.
struct ModelSpec {
  Family family = Family::Custom;
  int p = 0;  // observation dimension
  int d = 0;  // state dimension
  Design design;
  Matrix transition;
  Evolution evolution;

  bool time_varying_design() const noexcept {
    return std::holds_alternative<LaggedDesign>(design);
  }
  /// Observations consumed to fill the lag buffer before filtering starts.
  int warmup() const noexcept {
    return time_varying_design() ? std::get<LaggedDesign>(design).lags : 0;
  }
  /// The fixed F; throws TimeVaryingDesign for lagged designs.
  const Matrix& fixed_design() const;
};

/// Checks dimensions, PSD evolution and discount range.
void validate(const ModelSpec& spec);

/// True when the evolution adds no noise (Omega == 0 or delta == 1).
bool is_deterministic(const Evolution& evolution);

/// R = G P G' + Omega, or G P G' / delta on the discounted block.
SymMatrix evolve_covariance(const SymMatrix& P, const Matrix& G, const Evolution& evolution);

/// Omega implied for the next step: Omega itself, or R - G P G' under
/// discounting. Used to extend discounted models over a forecast horizon.
SymMatrix implied_evolution(const SymMatrix& P, const Matrix& G, const Evolution& evolution);

struct Prior {
  Vector m0;
  SymMatrix P0;
  SymMatrix S0;
  double n0 = 1.0;
};

struct FilterState {
  std::int64_t t = 0;
  Vector m;
  SymMatrix P;
  SymMatrix S;
  double n0 = 1.0;
  double n = 1.0;  // always n0 + t
  std::optional<Vector> last_e;
  std::optional<SymMatrix> last_Q;
};

/// Prior state at t = 0. P0 may be PSD (frozen coordinates); S0 must be SPD.
FilterState init(const ModelSpec& spec, const Prior& prior);

enum class CovarianceMode {
  Estimate,  // update S by the on-line estimator
  Fixed,     // treat S as the known observation covariance
};

/// One posterior update. Computes R, the one-step forecast (f, Q), the error
/// e = y - f, the Kalman gain A = R F Q^{-1}, then
///   m' = G m + A e,  P' = R - A Q A',
///   S' = (n S + S^{1/2} Q^{-1/2} e e' Q^{-1/2} S^{1/2}) / (n + 1).
/// Q uses the previous S.
FilterState filter_step(const FilterState& state, const Vector& y, const Matrix& F,
                        const Matrix& G, const Evolution& evolution,
                        CovarianceMode mode = CovarianceMode::Estimate);

/// One summand of the closed-form estimator: (e_i, Q_i, S_{i-1}).
struct SumTerm {
  Vector e;
  SymMatrix Q;
  SymMatrix S_prev;
};

/// S_t = (n0 S0 + sum_i S_{i-1}^{1/2} Q_i^{-1/2} e_i e_i' Q_i^{-1/2} S_{i-1}^{1/2}) / (n0 + t)
SymMatrix covariance_sum_form(const SymMatrix& S0, double n0, std::span<const SumTerm> history);

struct ForecastResult {
  int horizon = 1;
  Vector mean;
  SymMatrix cov;
};

/// h-step forecast: mean F' G^h m and covariance
/// F' G^h P (G^h)' F + sum_{i<h} F' G^i Omega (G^i)' F + S.
/// Lagged designs support h = 1 only and need the newest observations.
ForecastResult forecast(const FilterState& state, const ModelSpec& spec, int h,
                        std::span<const Vector> recent = {});

/// Q^{-1/2} e.
Vector standardized_errors(const Vector& e, const SymMatrix& Q);

/// Drives filter_step over a stream, keeping the lag buffer for lagged
/// designs. The first spec.warmup() observations only seed the buffer.
class SequentialFilter {
 public:
  SequentialFilter(ModelSpec spec, const Prior& prior,
                   CovarianceMode mode = CovarianceMode::Estimate);

  /// Returns false while the lag buffer is still filling.
  bool push(const Vector& y);

  const FilterState& state() const noexcept { return state_; }
  const ModelSpec& spec() const noexcept { return spec_; }
  bool ready() const noexcept;
  /// F for the next observation.
  Matrix next_design() const;
  ForecastResult forecast(int h) const;

 private:
  ModelSpec spec_;
  FilterState state_;
  CovarianceMode mode_;
  std::vector<Vector> recent_;  // newest first
};

struct StepRecord {
  Vector y;
  Vector e;
  SymMatrix Q;
  SymMatrix S;  // S after the update
  Vector m;
};

struct FilterRun {
  std::vector<StepRecord> steps;  // one per filtered observation
  FilterState final_state;
  int warmup = 0;
};

FilterRun run_filter(const ModelSpec& spec, const Prior& prior, std::span<const Vector> data,
                     CovarianceMode mode = CovarianceMode::Estimate);

}  // namespace covdlm
