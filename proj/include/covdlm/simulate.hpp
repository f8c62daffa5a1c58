#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "covdlm/dlm.hpp"
#include "covdlm/random.hpp"

namespace covdlm {

struct SimulatedSeries {
  std::vector<Vector> observations;  // y_1 ... y_N
  std::vector<Vector> states;        // theta_0 ... theta_N
};

/// Runs the state and observation equations forward from theta_0. The model
/// must have a fixed evolution covariance; lagged designs see zero vectors
/// before the first observation.
SimulatedSeries generate_from(const ModelSpec& spec, const Vector& theta0, const SymMatrix& sigma,
                              int length, Rng& rng);

/// As generate_from with theta_0 ~ N(m0, P0) drawn from the prior.
SimulatedSeries generate(const ModelSpec& spec, const Prior& prior, const SymMatrix& sigma,
                         int length, std::uint64_t seed);

/// Positive, upward-trending p-variate panel from a correlated linear trend
/// model; level of series i starts near 1000 + 250 i.
std::vector<Vector> trending_panel(int p, int length, std::uint64_t seed);

struct SimConfig {
  Family family = Family::LocalLevel;
  SymMatrix sigma;  // true observation covariance
  /// Evolution covariance used to generate data, and to filter it for
  /// LL/LT/SE. Defaults to the builder's Omega (identity for LL/LT/SE, zero
  /// for VAR and TVVAR).
  std::optional<SymMatrix> omega;
  int length = 500;
  int replications = 1000;
  Prior prior;
  /// Fixed theta_0 (e.g. VAR coefficients); otherwise drawn from the prior.
  std::optional<Vector> initial_state;
  int period = 12;   // SE
  int order = 1;     // VAR / TVVAR
  double delta = 1;  // TVVAR
  std::vector<int> snapshots{100, 500};
  std::uint64_t seed = 1;
  int workers = 0;  // 0 = hardware concurrency
};

void validate(const SimConfig& config);

/// Model used to filter the simulated data.
ModelSpec study_model(const SimConfig& config);

/// Model used to generate it (fixed evolution).
ModelSpec generating_model(const SimConfig& config);

struct Snapshot {
  int t = 0;
  SymMatrix s_bar;
  Matrix rho_bar;
};

struct StudyReport {
  Family family = Family::LocalLevel;
  int p = 0;
  int length = 0;
  int replications = 0;
  SymMatrix sigma_true;
  std::vector<SymMatrix> s_bar;  // replication average of S_t, t = 1 ... T
  std::vector<Matrix> rho_bar;   // replication average of corr(S_t)
  SymMatrix s_bar_overall;       // time average of s_bar
  std::vector<Snapshot> snapshots;
  Vector msse_estimated;  // S estimated on-line
  Vector msse_known;      // S held at the true Sigma
};

/// What one replication contributes.
struct ReplicationResult {
  std::vector<SymMatrix> s_trace;
  std::vector<Matrix> rho_trace;
  Vector sq_std_estimated;  // summed squared standardized errors
  Vector sq_std_known;
  std::size_t scored = 0;
};

ReplicationResult run_replication(const SimConfig& config, std::uint64_t index);

/// Running sums over replications. merge() is associative and the result
/// does not depend on the order replications are added, up to rounding.
class StudyAccumulator {
 public:
  void add(const ReplicationResult& result);
  void merge(const StudyAccumulator& other);
  int count() const noexcept { return count_; }
  StudyReport report(const SimConfig& config) const;

 private:
  int count_ = 0;
  std::vector<Matrix> s_sum_;
  std::vector<Matrix> rho_sum_;
  Vector sq_estimated_;
  Vector sq_known_;
  std::size_t scored_ = 0;
};

/// Replications run on `workers` threads; results are reduced in
/// replication order so the report depends only on the config.
StudyReport replication_study(const SimConfig& config);

}  // namespace covdlm
