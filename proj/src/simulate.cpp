#include "covdlm/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <string>
#include <thread>

#include "covdlm/errors.hpp"
#include "covdlm/metrics.hpp"
#include "covdlm/models.hpp"

namespace covdlm {

SimulatedSeries generate_from(const ModelSpec& spec, const Vector& theta0, const SymMatrix& sigma,
                              int length, Rng& rng) {
  validate(spec);
  const auto* fixed = std::get_if<FixedEvolution>(&spec.evolution);
  if (fixed == nullptr) {
    throw Error(ErrorKind::InvalidArgument,
                "data generation needs a fixed evolution covariance, not a discount factor");
  }
  if (theta0.size() != spec.d || sigma.dim() != spec.p) {
    throw Error(ErrorKind::DimensionMismatch, "theta0 or sigma disagree with the model");
  }
  if (length < 1) throw Error(ErrorKind::InvalidArgument, "series length must be >= 1");

  const bool noiseless_states = fixed->omega.matrix().isZero(0.0);
  const Matrix omega_root = covariance_root(fixed->omega).matrix();
  const Matrix sigma_root = covariance_root(sigma).matrix();

  SimulatedSeries out;
  out.states.reserve(static_cast<std::size_t>(length) + 1);
  out.observations.reserve(static_cast<std::size_t>(length));
  out.states.push_back(theta0);

  std::vector<Vector> recent(static_cast<std::size_t>(spec.warmup()), Vector::Zero(spec.p));
  for (int t = 1; t <= length; ++t) {
    Vector theta = spec.transition * out.states.back();
    if (!noiseless_states) theta += omega_root * standard_normal(spec.d, rng);
    const Matrix F = spec.time_varying_design()
                         ? std::get<LaggedDesign>(spec.design).build(recent)
                         : spec.fixed_design();
    Vector y = F.transpose() * theta + sigma_root * standard_normal(spec.p, rng);
    if (!recent.empty()) {
      recent.pop_back();
      recent.insert(recent.begin(), y);
    }
    out.states.push_back(std::move(theta));
    out.observations.push_back(std::move(y));
  }
  return out;
}

SimulatedSeries generate(const ModelSpec& spec, const Prior& prior, const SymMatrix& sigma,
                         int length, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  const Vector theta0 = draw_normal(prior.m0, prior.P0, rng);
  return generate_from(spec, theta0, sigma, length, rng);
}

std::vector<Vector> trending_panel(int p, int length, std::uint64_t seed) {
  ModelSpec spec = linear_trend(p);
  Vector omega(spec.d);
  Vector theta0(spec.d);
  for (int i = 0; i < p; ++i) {
    omega(2 * i) = 100.0;
    omega(2 * i + 1) = 0.25;
    theta0(2 * i) = 1000.0 + 250.0 * i;
    theta0(2 * i + 1) = 1.0 + 0.5 * i;
  }
  spec.evolution = FixedEvolution{SymMatrix::diagonal(omega)};

  Matrix sigma(p, p);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) {
      const double sd_i = 15.0 + 2.0 * i;
      const double sd_j = 15.0 + 2.0 * j;
      sigma(i, j) = (i == j ? 1.0 : 0.7) * sd_i * sd_j;
    }
  }
  Rng rng = make_rng(seed);
  return generate_from(spec, theta0, SymMatrix(sigma), length, rng).observations;
}

void validate(const SimConfig& config) {
  if (config.length < 1) throw Error(ErrorKind::ValidationError, "length must be >= 1");
  if (config.replications < 1) {
    throw Error(ErrorKind::ValidationError, "replications must be >= 1");
  }
  if (config.sigma.dim() < 1) throw Error(ErrorKind::ValidationError, "sigma is required");
  const auto sd = spectral(config.sigma);
  if (sd.values.minCoeff() <= sd.floor) {
    throw Error(ErrorKind::ValidationError, "sigma must be positive definite");
  }
  if ((config.family == Family::Var || config.family == Family::TvVar) &&
      !config.initial_state) {
    throw Error(ErrorKind::ValidationError, "VAR studies need initial_state (the coefficients)");
  }
  for (int t : config.snapshots) {
    if (t < 1) throw Error(ErrorKind::ValidationError, "snapshot times must be >= 1");
  }
}

ModelSpec study_model(const SimConfig& config) {
  const int p = static_cast<int>(config.sigma.dim());
  auto with_omega = [&](ModelSpec spec) {
    if (config.omega) spec.evolution = FixedEvolution{*config.omega};
    return spec;
  };
  switch (config.family) {
    case Family::LocalLevel: return with_omega(local_level(p));
    case Family::LinearTrend: return with_omega(linear_trend(p));
    case Family::Seasonal: return with_omega(seasonal(p, config.period));
    case Family::Var: return var_model(p, config.order);
    case Family::TvVar: return tvvar_model(p, config.order, config.delta);
    default: break;
  }
  throw Error(ErrorKind::ValidationError,
              "replication studies support LL, LT, SE, VAR and TVVAR, not " +
                  std::string(to_string(config.family)));
}

ModelSpec generating_model(const SimConfig& config) {
  ModelSpec spec = study_model(config);
  if (config.omega) {
    spec.evolution = FixedEvolution{*config.omega};
  } else if (!std::holds_alternative<FixedEvolution>(spec.evolution)) {
    spec.evolution = FixedEvolution{SymMatrix::zero(spec.d)};
  }
  return spec;
}

ReplicationResult run_replication(const SimConfig& config, std::uint64_t index) {
  const ModelSpec filter_spec = study_model(config);
  const ModelSpec gen_spec = generating_model(config);
  Rng rng = make_rng(config.seed, index);
  const Vector theta0 =
      config.initial_state ? *config.initial_state : draw_normal(config.prior.m0, config.prior.P0, rng);
  const auto series = generate_from(gen_spec, theta0, config.sigma, config.length, rng);

  Prior known_prior = config.prior;
  known_prior.S0 = config.sigma;
  const FilterRun estimated = run_filter(filter_spec, config.prior, series.observations);
  const FilterRun known =
      run_filter(filter_spec, known_prior, series.observations, CovarianceMode::Fixed);

  ReplicationResult out;
  const Index p = config.sigma.dim();
  out.sq_std_estimated = Vector::Zero(p);
  out.sq_std_known = Vector::Zero(p);
  out.s_trace.reserve(estimated.steps.size());
  out.rho_trace.reserve(estimated.steps.size());
  for (std::size_t t = 0; t < estimated.steps.size(); ++t) {
    const auto& step = estimated.steps[t];
    out.s_trace.push_back(step.S);
    out.rho_trace.push_back(correlations(step.S));
    out.sq_std_estimated += standardized_errors(step.e, step.Q).cwiseAbs2();
    out.sq_std_known += standardized_errors(known.steps[t].e, known.steps[t].Q).cwiseAbs2();
  }
  out.scored = estimated.steps.size();
  return out;
}

void StudyAccumulator::add(const ReplicationResult& result) {
  if (count_ == 0) {
    s_sum_.assign(result.s_trace.size(), Matrix());
    rho_sum_.assign(result.rho_trace.size(), Matrix());
    for (std::size_t t = 0; t < result.s_trace.size(); ++t) {
      s_sum_[t] = result.s_trace[t].matrix();
      rho_sum_[t] = result.rho_trace[t];
    }
    sq_estimated_ = result.sq_std_estimated;
    sq_known_ = result.sq_std_known;
    scored_ = result.scored;
    count_ = 1;
    return;
  }
  if (result.s_trace.size() != s_sum_.size()) {
    throw Error(ErrorKind::DimensionMismatch, "replications differ in length");
  }
  for (std::size_t t = 0; t < s_sum_.size(); ++t) {
    s_sum_[t] += result.s_trace[t].matrix();
    rho_sum_[t] += result.rho_trace[t];
  }
  sq_estimated_ += result.sq_std_estimated;
  sq_known_ += result.sq_std_known;
  scored_ += result.scored;
  ++count_;
}

void StudyAccumulator::merge(const StudyAccumulator& other) {
  if (other.count_ == 0) return;
  if (count_ == 0) {
    *this = other;
    return;
  }
  if (other.s_sum_.size() != s_sum_.size()) {
    throw Error(ErrorKind::DimensionMismatch, "partial reports differ in length");
  }
  for (std::size_t t = 0; t < s_sum_.size(); ++t) {
    s_sum_[t] += other.s_sum_[t];
    rho_sum_[t] += other.rho_sum_[t];
  }
  sq_estimated_ += other.sq_estimated_;
  sq_known_ += other.sq_known_;
  scored_ += other.scored_;
  count_ += other.count_;
}

StudyReport StudyAccumulator::report(const SimConfig& config) const {
  if (count_ == 0) throw Error(ErrorKind::InsufficientData, "no replications accumulated");
  StudyReport out;
  out.family = config.family;
  out.p = static_cast<int>(config.sigma.dim());
  out.length = config.length;
  out.replications = count_;
  out.sigma_true = config.sigma;
  const double reps = static_cast<double>(count_);
  Matrix overall = Matrix::Zero(out.p, out.p);
  for (std::size_t t = 0; t < s_sum_.size(); ++t) {
    out.s_bar.emplace_back(s_sum_[t] / reps);
    out.rho_bar.push_back(rho_sum_[t] / reps);
    overall += out.s_bar.back().matrix();
  }
  out.s_bar_overall = SymMatrix(overall / std::max<double>(1.0, static_cast<double>(s_sum_.size())));
  for (int t : config.snapshots) {
    if (t >= 1 && static_cast<std::size_t>(t) <= out.s_bar.size()) {
      out.snapshots.push_back({t, out.s_bar[t - 1], out.rho_bar[t - 1]});
    }
  }
  const double per_series = static_cast<double>(scored_);
  out.msse_estimated = sq_estimated_ / per_series;
  out.msse_known = sq_known_ / per_series;
  return out;
}

StudyReport replication_study(const SimConfig& config) {
  validate(config);
  study_model(config);  // reject unsupported families before spawning work

  const int reps = config.replications;
  int workers = config.workers > 0 ? config.workers
                                   : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, reps);

  // Bounded batches keep memory flat; each batch is folded in index order.
  const int batch = 8 * workers;
  StudyAccumulator acc;
  for (int first = 0; first < reps; first += batch) {
    const int last = std::min(reps, first + batch);
    std::vector<ReplicationResult> results(static_cast<std::size_t>(last - first));
    std::vector<std::exception_ptr> failures(results.size());
    std::atomic<int> next{first};
    auto work = [&] {
      for (int i = next++; i < last; i = next++) {
        try {
          results[i - first] = run_replication(config, static_cast<std::uint64_t>(i));
        } catch (...) {
          failures[i - first] = std::current_exception();
        }
      }
    };
    if (workers == 1) {
      work();
    } else {
      std::vector<std::jthread> pool;
      for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    for (const auto& failure : failures) {
      if (failure) std::rethrow_exception(failure);
    }
    for (const auto& r : results) acc.add(r);
  }
  return acc.report(config);
}

}  // namespace covdlm
