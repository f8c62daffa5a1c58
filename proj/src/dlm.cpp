#include "covdlm/dlm.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "covdlm/errors.hpp"

namespace covdlm {

std::string_view to_string(Family family) noexcept {
  switch (family) {
    case Family::LocalLevel: return "LL";
    case Family::LinearTrend: return "LT";
    case Family::Seasonal: return "SE";
    case Family::Var: return "VAR";
    case Family::TvVar: return "TVVAR";
    case Family::Dwr: return "DWR";
    case Family::Custom: return "custom";
  }
  return "custom";
}

namespace {

std::string dims(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_shape(const Matrix& m, Index rows, Index cols, const char* what) {
  if (m.rows() != rows || m.cols() != cols) {
    throw Error(ErrorKind::DimensionMismatch, std::string(what) + " must be " +
                                                  std::to_string(rows) + "x" +
                                                  std::to_string(cols) + ", got " + dims(m));
  }
}

void require_psd(const SymMatrix& m, const char* what) {
  const auto sd = spectral(m);
  if (sd.values.size() > 0 && sd.values.minCoeff() < -sd.floor) {
    throw Error(ErrorKind::NotPositiveDefinite, std::string(what) + " has negative eigenvalue " +
                                                    std::to_string(sd.values.minCoeff()));
  }
}

void require_spd(const SymMatrix& m, const char* what) {
  const auto sd = spectral(m);
  if (sd.values.size() > 0 && sd.values.minCoeff() <= sd.floor) {
    throw Error(ErrorKind::NotPositiveDefinite, std::string(what) + " is not positive definite " +
                                                    "(min eigenvalue " +
                                                    std::to_string(sd.values.minCoeff()) + ")");
  }
}

}  // namespace

const Matrix& ModelSpec::fixed_design() const {
  if (const auto* f = std::get_if<Matrix>(&design)) return *f;
  throw Error(ErrorKind::TimeVaryingDesign, "model has a time-varying design matrix");
}

void validate(const ModelSpec& spec) {
  if (spec.p < 1 || spec.d < 1) {
    throw Error(ErrorKind::InvalidDimension, "model dimensions must be positive, got p=" +
                                                 std::to_string(spec.p) +
                                                 " d=" + std::to_string(spec.d));
  }
  if (const auto* f = std::get_if<Matrix>(&spec.design)) {
    require_shape(*f, spec.d, spec.p, "design F");
  } else {
    const auto& lagged = std::get<LaggedDesign>(spec.design);
    if (lagged.lags < 1 || !lagged.build) {
      throw Error(ErrorKind::InvalidArgument, "lagged design needs lags >= 1 and a builder");
    }
  }
  require_shape(spec.transition, spec.d, spec.d, "transition G");
  if (const auto* fixed = std::get_if<FixedEvolution>(&spec.evolution)) {
    require_shape(fixed->omega.matrix(), spec.d, spec.d, "evolution covariance");
    require_psd(fixed->omega, "evolution covariance");
  } else {
    const auto& discount = std::get<DiscountEvolution>(spec.evolution);
    if (!(discount.delta > 0.0 && discount.delta <= 1.0)) {
      throw Error(ErrorKind::InvalidDiscount,
                  "discount factor must lie in (0, 1], got " + std::to_string(discount.delta));
    }
    if (!discount.mask.empty() && std::ssize(discount.mask) != spec.d) {
      throw Error(ErrorKind::DimensionMismatch, "discount mask length must equal d");
    }
  }
}

bool is_deterministic(const Evolution& evolution) {
  if (const auto* fixed = std::get_if<FixedEvolution>(&evolution)) {
    return fixed->omega.matrix().isZero(0.0);
  }
  return std::get<DiscountEvolution>(evolution).delta == 1.0;
}

SymMatrix evolve_covariance(const SymMatrix& P, const Matrix& G, const Evolution& evolution) {
  Matrix r = G * P.matrix() * G.transpose();
  if (const auto* fixed = std::get_if<FixedEvolution>(&evolution)) {
    r += fixed->omega.matrix();
  } else {
    const auto& discount = std::get<DiscountEvolution>(evolution);
    if (discount.mask.empty()) {
      r /= discount.delta;
    } else {
      for (Index j = 0; j < r.cols(); ++j) {
        for (Index i = 0; i < r.rows(); ++i) {
          if (discount.mask[i] && discount.mask[j]) r(i, j) /= discount.delta;
        }
      }
    }
  }
  return SymMatrix(r);
}

SymMatrix implied_evolution(const SymMatrix& P, const Matrix& G, const Evolution& evolution) {
  if (const auto* fixed = std::get_if<FixedEvolution>(&evolution)) return fixed->omega;
  const Matrix base = G * P.matrix() * G.transpose();
  return SymMatrix(evolve_covariance(P, G, evolution).matrix() - base);
}

FilterState init(const ModelSpec& spec, const Prior& prior) {
  validate(spec);
  if (prior.m0.size() != spec.d) {
    throw Error(ErrorKind::DimensionMismatch, "m0 must have length d=" + std::to_string(spec.d));
  }
  require_shape(prior.P0.matrix(), spec.d, spec.d, "P0");
  require_shape(prior.S0.matrix(), spec.p, spec.p, "S0");
  if (!(prior.n0 > 0.0) || !std::isfinite(prior.n0)) {
    throw Error(ErrorKind::InvalidArgument, "n0 must be positive, got " + std::to_string(prior.n0));
  }
  if (!prior.m0.allFinite()) throw Error(ErrorKind::NonFiniteInput, "m0 has non-finite entries");
  require_psd(prior.P0, "P0");
  require_spd(prior.S0, "S0");

  FilterState state;
  state.t = 0;
  state.m = prior.m0;
  state.P = prior.P0;
  state.S = prior.S0;
  state.n0 = prior.n0;
  state.n = prior.n0;
  return state;
}

FilterState filter_step(const FilterState& state, const Vector& y, const Matrix& F,
                        const Matrix& G, const Evolution& evolution, CovarianceMode mode) {
  const Index d = state.m.size();
  const Index p = state.S.dim();
  if (y.size() != p) {
    throw Error(ErrorKind::DimensionMismatch, "observation must have length p=" +
                                                  std::to_string(p) + ", got " +
                                                  std::to_string(y.size()));
  }
  require_shape(F, d, p, "design F");
  require_shape(G, d, d, "transition G");
  if (!y.allFinite()) throw Error(ErrorKind::NonFiniteInput, "observation has non-finite entries");
  if (!F.allFinite()) throw Error(ErrorKind::NonFiniteInput, "design has non-finite entries");

  const SymMatrix R = evolve_covariance(state.P, G, evolution);
  const Vector a = G * state.m;
  const Vector f = F.transpose() * a;
  const SymMatrix Q(F.transpose() * R.matrix() * F + state.S.matrix());
  const Vector e = y - f;

  const InverseFactors q_inv = inverse_factors(Q);
  const Matrix A = R.matrix() * F * q_inv.inverse.matrix();

  FilterState next;
  next.t = state.t + 1;
  next.n0 = state.n0;
  next.n = state.n0 + static_cast<double>(next.t);
  next.m = a + A * e;
  next.P = SymMatrix(R.matrix() - A * Q.matrix() * A.transpose());

  if (mode == CovarianceMode::Estimate) {
    const Vector z = symmetric_sqrt(state.S).matrix() * (q_inv.inv_sqrt.matrix() * e);
    next.S = SymMatrix((state.n * state.S.matrix() + z * z.transpose()) / next.n);
  } else {
    next.S = state.S;
  }
  if (!next.m.allFinite() || !next.P.matrix().allFinite() || !next.S.matrix().allFinite()) {
    throw Error(ErrorKind::NonFiniteInput, "filter update produced non-finite values at t=" +
                                               std::to_string(next.t));
  }
  next.last_e = e;
  next.last_Q = Q;
  return next;
}

SymMatrix covariance_sum_form(const SymMatrix& S0, double n0, std::span<const SumTerm> history) {
  Matrix total = n0 * S0.matrix();
  for (const auto& term : history) {
    if (term.e.size() != S0.dim() || term.Q.dim() != S0.dim() || term.S_prev.dim() != S0.dim()) {
      throw Error(ErrorKind::DimensionMismatch, "history entry dimension differs from S0");
    }
    const Matrix s_half = symmetric_sqrt(term.S_prev).matrix();
    const Matrix q_inv_half = symmetric_inv_sqrt(term.Q).matrix();
    total += s_half * q_inv_half * term.e * term.e.transpose() * q_inv_half * s_half;
  }
  return SymMatrix(total / (n0 + static_cast<double>(history.size())));
}

ForecastResult forecast(const FilterState& state, const ModelSpec& spec, int h,
                        std::span<const Vector> recent) {
  if (h < 1) {
    throw Error(ErrorKind::UnsupportedHorizon, "forecast horizon must be >= 1, got " +
                                                   std::to_string(h));
  }
  Matrix F;
  if (spec.time_varying_design()) {
    if (h > 1) {
      throw Error(ErrorKind::TimeVaryingDesign,
                  "multi-step forecasts are undefined for time-varying designs");
    }
    const auto& lagged = std::get<LaggedDesign>(spec.design);
    if (std::ssize(recent) < lagged.lags) {
      throw Error(ErrorKind::DimensionMismatch, "forecast needs the last " +
                                                    std::to_string(lagged.lags) + " observations");
    }
    F = lagged.build(recent.first(static_cast<std::size_t>(lagged.lags)));
  } else {
    F = spec.fixed_design();
  }
  const Matrix& G = spec.transition;
  const SymMatrix omega = implied_evolution(state.P, G, spec.evolution);

  Matrix g_power = Matrix::Identity(spec.d, spec.d);
  Matrix cov = state.S.matrix();
  for (int i = 0; i < h; ++i) {
    const Matrix fg = F.transpose() * g_power;
    cov += fg * omega.matrix() * fg.transpose();
    g_power = G * g_power;
  }
  const Matrix fgh = F.transpose() * g_power;
  cov += fgh * state.P.matrix() * fgh.transpose();

  ForecastResult out;
  out.horizon = h;
  out.mean = fgh * state.m;
  out.cov = SymMatrix(cov);
  return out;
}

Vector standardized_errors(const Vector& e, const SymMatrix& Q) {
  if (e.size() != Q.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "error vector and covariance disagree in size");
  }
  return symmetric_inv_sqrt(Q).matrix() * e;
}

SequentialFilter::SequentialFilter(ModelSpec spec, const Prior& prior, CovarianceMode mode)
    : spec_(std::move(spec)), state_(init(spec_, prior)), mode_(mode) {}

bool SequentialFilter::ready() const noexcept { return std::ssize(recent_) >= spec_.warmup(); }

Matrix SequentialFilter::next_design() const {
  if (!spec_.time_varying_design()) return spec_.fixed_design();
  if (!ready()) {
    throw Error(ErrorKind::InsufficientData, "lag buffer is not yet full");
  }
  const auto& lagged = std::get<LaggedDesign>(spec_.design);
  return lagged.build(std::span<const Vector>(recent_).first(static_cast<std::size_t>(lagged.lags)));
}

bool SequentialFilter::push(const Vector& y) {
  bool updated = false;
  if (ready()) {
    state_ = filter_step(state_, y, next_design(), spec_.transition, spec_.evolution, mode_);
    updated = true;
  } else if (y.size() != spec_.p) {
    throw Error(ErrorKind::DimensionMismatch, "observation must have length p=" +
                                                  std::to_string(spec_.p));
  }
  if (spec_.warmup() > 0) {
    recent_.insert(recent_.begin(), y);
    if (std::ssize(recent_) > spec_.warmup()) recent_.pop_back();
  }
  return updated;
}

ForecastResult SequentialFilter::forecast(int h) const {
  return covdlm::forecast(state_, spec_, h, recent_);
}

FilterRun run_filter(const ModelSpec& spec, const Prior& prior, std::span<const Vector> data,
                     CovarianceMode mode) {
  SequentialFilter filter(spec, prior, mode);
  FilterRun run;
  run.warmup = spec.warmup();
  run.steps.reserve(data.size());
  for (const auto& y : data) {
    if (filter.push(y)) {
      const auto& s = filter.state();
      run.steps.push_back({y, *s.last_e, *s.last_Q, s.S, s.m});
    }
  }
  run.final_state = filter.state();
  return run;
}

}  // namespace covdlm
