#include "covdlm/mcmc.hpp"

#include <cmath>
#include <string>

#include "covdlm/errors.hpp"

namespace covdlm {

namespace {

Matrix spd_solve(const SymMatrix& m, const Matrix& rhs, const char* what) {
  Eigen::LLT<Matrix> llt(m.matrix());
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::Singular, std::string(what) + " is not positive definite");
  }
  return llt.solve(rhs);
}

}  // namespace

std::vector<FilteredMoments> forward_filter(std::span<const Vector> data, const ModelSpec& spec,
                                            const SymMatrix& sigma, const Vector& m0,
                                            const SymMatrix& P0) {
  validate(spec);
  const Matrix& F = spec.fixed_design();
  const Matrix& G = spec.transition;
  if (sigma.dim() != spec.p || m0.size() != spec.d || P0.dim() != spec.d) {
    throw Error(ErrorKind::DimensionMismatch, "forward filter inputs disagree with the model");
  }

  std::vector<FilteredMoments> out;
  out.reserve(data.size() + 1);
  out.push_back({m0, P0, Vector(), SymMatrix()});
  for (const auto& y : data) {
    if (y.size() != spec.p) {
      throw Error(ErrorKind::DimensionMismatch, "observation length differs from p");
    }
    const auto& prev = out.back();
    FilteredMoments next;
    next.a = G * prev.m;
    next.R = evolve_covariance(prev.P, G, spec.evolution);
    const SymMatrix Q(F.transpose() * next.R.matrix() * F + sigma.matrix());
    const Vector e = y - F.transpose() * next.a;
    // A' = Q^{-1} F' R
    const Matrix gain = spd_solve(Q, F.transpose() * next.R.matrix(), "forecast covariance")
                            .transpose();
    next.m = next.a + gain * e;
    next.P = SymMatrix(next.R.matrix() - gain * Q.matrix() * gain.transpose());
    out.push_back(std::move(next));
  }
  return out;
}

std::vector<Vector> backward_sample(std::span<const FilteredMoments> filtered,
                                    const ModelSpec& spec, Rng& rng) {
  if (filtered.empty()) {
    throw Error(ErrorKind::InsufficientData, "backward sampling needs filtered moments");
  }
  const Matrix& G = spec.transition;
  const bool deterministic = is_deterministic(spec.evolution);
  const bool identity = G.isIdentity(0.0);
  const std::size_t N = filtered.size() - 1;

  std::vector<Vector> states(N + 1);
  states[N] = draw_normal(filtered[N].m, filtered[N].P, rng);
  for (std::size_t t = N; t-- > 0;) {
    const auto& now = filtered[t];
    const auto& ahead = filtered[t + 1];
    if (deterministic) {
      // theta_{t+1} = G theta_t exactly.
      states[t] = identity ? states[t + 1] : Vector(G.colPivHouseholderQr().solve(states[t + 1]));
      continue;
    }
    // J = P G' R^{-1}
    const Matrix J = spd_solve(ahead.R, G * now.P.matrix(), "state prior covariance").transpose();
    const Vector h = now.m + J * (states[t + 1] - ahead.a);
    const SymMatrix H(now.P.matrix() - J * G * now.P.matrix());
    states[t] = draw_normal(h, H, rng);
  }
  return states;
}

SymMatrix inverse_wishart_draw(double dof, const SymMatrix& scale, Rng& rng) {
  const Index p = scale.dim();
  if (!(dof > static_cast<double>(p) - 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "inverted Wishart needs dof > p - 1, got " +
                                                std::to_string(dof));
  }
  const Matrix precision = spd_solve(scale, Matrix::Identity(p, p), "inverted Wishart scale");
  Eigen::LLT<Matrix> llt(precision);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::Singular, "inverted Wishart scale is not positive definite");
  }
  Matrix bartlett = Matrix::Zero(p, p);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (Index i = 0; i < p; ++i) {
    std::chi_squared_distribution<double> chi2(dof - static_cast<double>(i));
    bartlett(i, i) = std::sqrt(chi2(rng));
    for (Index j = 0; j < i; ++j) bartlett(i, j) = normal(rng);
  }
  // W = B B' with B = L A lower triangular; Sigma = W^{-1} = B^{-T} B^{-1}.
  const Matrix B = Matrix(llt.matrixL()) * bartlett;
  const Matrix b_inv = B.triangularView<Eigen::Lower>().solve(Matrix::Identity(p, p));
  return SymMatrix(b_inv.transpose() * b_inv);
}

SymMatrix sigma_draw(std::span<const Vector> states, std::span<const Vector> data, const Matrix& F,
                     double n0, const SymMatrix& S0, Rng& rng) {
  if (states.size() != data.size() + 1) {
    throw Error(ErrorKind::DimensionMismatch, "states must hold theta_0 ... theta_N");
  }
  const Index p = S0.dim();
  Matrix scatter = Matrix::Zero(p, p);
  for (std::size_t t = 0; t < data.size(); ++t) {
    const Vector resid = data[t] - F.transpose() * states[t + 1];
    scatter += resid * resid.transpose();
  }
  const double N = static_cast<double>(data.size());
  const SymMatrix scale(scatter + n0 * S0.matrix());
  return inverse_wishart_draw(n0 + N + 2.0 * static_cast<double>(p), scale, rng);
}

void validate(const GibbsConfig& config) {
  if (config.iterations < 1) {
    throw Error(ErrorKind::ValidationError, "iterations must be >= 1");
  }
  if (config.burn_in < 0 || config.burn_in >= config.iterations) {
    throw Error(ErrorKind::ValidationError, "burn_in must satisfy 0 <= burn_in < iterations");
  }
  if (!(config.n0 > 0.0)) throw Error(ErrorKind::ValidationError, "n0 must be positive");
}

GibbsDraw gibbs_sweep(std::span<const Vector> data, const ModelSpec& spec,
                      const GibbsConfig& config, const SymMatrix& sigma, Rng& rng) {
  const auto filtered = forward_filter(data, spec, sigma, config.m0, config.P0);
  GibbsDraw draw;
  draw.states = backward_sample(filtered, spec, rng);
  draw.sigma = sigma_draw(draw.states, data, spec.fixed_design(), config.n0, config.S0, rng);
  return draw;
}

GibbsSummary gibbs_run(std::span<const Vector> data, const ModelSpec& spec,
                       const GibbsConfig& config) {
  validate(config);
  if (config.S0.dim() != spec.p) {
    throw Error(ErrorKind::DimensionMismatch, "prior scale S0 must be p x p");
  }
  Rng rng = make_rng(config.seed);
  SymMatrix sigma = config.S0;

  GibbsSummary summary;
  Matrix sigma_total = Matrix::Zero(spec.p, spec.p);
  std::vector<Vector> state_total(data.size() + 1, Vector::Zero(spec.d));
  for (int iter = 0; iter < config.iterations; ++iter) {
    GibbsDraw draw = gibbs_sweep(data, spec, config, sigma, rng);
    sigma = draw.sigma;
    if (iter < config.burn_in) continue;
    sigma_total += draw.sigma.matrix();
    for (std::size_t t = 0; t < draw.states.size(); ++t) state_total[t] += draw.states[t];
    summary.sigma_draws.push_back(std::move(draw.sigma));
  }
  summary.retained = config.iterations - config.burn_in;
  const double kept = static_cast<double>(summary.retained);
  summary.sigma_mean = SymMatrix(sigma_total / kept);
  summary.state_means.reserve(state_total.size());
  for (auto& s : state_total) summary.state_means.push_back(s / kept);
  return summary;
}

}  // namespace covdlm
