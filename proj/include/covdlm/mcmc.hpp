#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "covdlm/dlm.hpp"
#include "covdlm/random.hpp"

namespace covdlm {

/// Forward-filter output at one time. Index 0 holds the prior (m0, P0) with
/// a and R left empty.
struct FilteredMoments {
  Vector m;
  SymMatrix P;
  Vector a;
  SymMatrix R;
};

/// Kalman filter with the observation covariance held at sigma.
/// Requires a fixed design.
std::vector<FilteredMoments> forward_filter(std::span<const Vector> data, const ModelSpec& spec,
                                            const SymMatrix& sigma, const Vector& m0,
                                            const SymMatrix& P0);

/// Draws theta_N ~ N(m_N, P_N), then theta_t | theta_{t+1} ~ N(h_t, H_t) for
/// t = N-1 ... 0 with
///   h_t = m_t + P_t G' R_{t+1}^{-1} (theta_{t+1} - a_{t+1}),
///   H_t = P_t - P_t G' R_{t+1}^{-1} G P_t.
/// With noiseless evolution the conditional is the point theta_{t+1} pulled
/// back through G. Returns theta_0 ... theta_N.
std::vector<Vector> backward_sample(std::span<const FilteredMoments> filtered,
                                    const ModelSpec& spec, Rng& rng);

/// IW(dof, scale) with mean scale / (dof - p - 1): draws W ~ Wishart(dof,
/// scale^{-1}) by the Bartlett factorization and returns W^{-1}.
SymMatrix inverse_wishart_draw(double dof, const SymMatrix& scale, Rng& rng);

/// Sigma | states, data ~ IW(n0 + N + 2p, N Sigma_hat + n0 S0) where
/// Sigma_hat = N^{-1} sum_t (y_t - F' theta_t)(y_t - F' theta_t)'.
/// `states` holds theta_0 ... theta_N.
SymMatrix sigma_draw(std::span<const Vector> states, std::span<const Vector> data, const Matrix& F,
                     double n0, const SymMatrix& S0, Rng& rng);

struct GibbsConfig {
  int iterations = 5000;
  int burn_in = 1000;
  double n0 = 1.0;
  SymMatrix S0;
  Vector m0;
  SymMatrix P0;
  std::uint64_t seed = 1;
};

void validate(const GibbsConfig& config);

struct GibbsDraw {
  std::vector<Vector> states;  // theta_0 ... theta_N
  SymMatrix sigma;
};

struct GibbsSummary {
  SymMatrix sigma_mean;
  std::vector<SymMatrix> sigma_draws;  // retained draws, in sweep order
  std::vector<Vector> state_means;     // theta_0 ... theta_N
  int retained = 0;
};

/// One forward-filter / backward-sample / Sigma sweep from the given Sigma.
GibbsDraw gibbs_sweep(std::span<const Vector> data, const ModelSpec& spec,
                      const GibbsConfig& config, const SymMatrix& sigma, Rng& rng);

/// Chain started at Sigma = S0; the first burn_in sweeps are discarded.
/// Deterministic for a given seed.
GibbsSummary gibbs_run(std::span<const Vector> data, const ModelSpec& spec,
                       const GibbsConfig& config);

}  // namespace covdlm
