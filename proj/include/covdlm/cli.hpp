#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "covdlm/dlm.hpp"
#include "covdlm/metrics.hpp"
#include "covdlm/simulate.hpp"

namespace covdlm::cli {

/// Directory used when --out is not given: $COVDLM_OUTPUT_DIR, else ".".
std::filesystem::path default_output_dir();

struct PriorOptions {
  double p0_scale = 1000.0;
  double n0 = 1.0;
};

struct StudyOptions {
  std::string family = "LL";
  std::vector<double> sigma;  // vech of the true covariance
  std::vector<double> s0;     // vech of the prior estimate; identity if empty
  double omega_scale = 1.0;   // Omega = omega_scale * I_d
  int replications = 1000;
  int length = 500;
  int period = 12;
  std::vector<int> snapshots{100, 500};
  PriorOptions prior;
  std::uint64_t seed = 1;
  int workers = 0;
  std::filesystem::path out_dir = ".";
};

/// Writes study.json and study_trace.csv and prints the summary table.
StudyReport cmd_study(const StudyOptions& options, std::ostream& console);

struct FitOptions {
  std::filesystem::path input;
  std::string family = "TVVAR";  // LL LT SE VAR TVVAR DWR MVDLM
  int order = 1;
  std::optional<double> delta;  // discount; LL/LT/SE use Omega = I without it
  int period = 12;
  std::vector<double> s0;  // prior variances (diagonal); ones if empty
  PriorOptions prior;
  std::filesystem::path out_dir = ".";
};

struct FitResult {
  std::string model;
  MetricsReport metrics;
  SymMatrix final_S;
  int warmup = 0;
};

/// Fits one model over a panel already in memory.
FitResult fit_panel(const std::vector<Vector>& data, const FitOptions& options,
                    std::vector<std::pair<long, SymMatrix>>* trace = nullptr);

/// Writes fit.json, covariance_trace.csv and correlation_trace.csv.
FitResult cmd_fit(const FitOptions& options, std::ostream& console);

/// {0.10, 0.15, ..., 0.95}
std::vector<double> default_delta_grid();

struct ScanOptions {
  std::filesystem::path input;
  int min_order = 1;
  int max_order = 10;
  std::vector<double> deltas = default_delta_grid();
  std::vector<double> s0;
  PriorOptions prior;
  std::filesystem::path out_dir = ".";
};

struct ScanRow {
  std::string model;
  int order = 1;
  double delta = 1.0;
  bool ok = false;
  std::string error;  // error kind when !ok
  Vector msse;
  Vector mape;
};

/// Sum of |msse_i - 1|; smaller is better.
double msse_distance(const Vector& msse);

/// Per order: VAR (delta = 1) first, then TVVAR for each delta < 1 in grid
/// order. Cells that fail numerically are reported, never fatal.
std::vector<ScanRow> scan_panel(const std::vector<Vector>& data, const ScanOptions& options);

/// Writes scan.csv and scan.json.
std::vector<ScanRow> cmd_scan(const ScanOptions& options, std::ostream& console);

struct CompareOptions {
  std::vector<double> sigma{2.0, 3.0, 5.0};
  std::vector<double> s0;  // identity if empty
  double omega_scale = 1.0;
  int length = 500;
  std::vector<int> checkpoints{100, 150, 200, 250, 300, 350, 400, 450, 500};
  int iterations = 5000;
  int burn_in = 1000;
  PriorOptions prior;
  std::uint64_t seed = 1;
  std::filesystem::path out_dir = ".";
};

struct CompareRow {
  int N = 0;
  SymMatrix real;
  SymMatrix mcmc;
  SymMatrix online;  // on-line estimate after N observations
  Vector e_mcmc;     // one-step error at N, Kalman filter with Sigma = MCMC mean
  Vector e_online;
  Vector mse_mcmc;  // N^{-1} sum_t e_t^2
  Vector mse_online;
  double gap = 0.0;  // ||online - mcmc||_F / ||mcmc||_F
};

/// Simulates one local level series and compares the on-line estimator
/// with the Gibbs posterior mean at each checkpoint.
std::vector<CompareRow> compare_on_series(const std::vector<Vector>& data,
                                          const CompareOptions& options);

/// Writes mcmc_compare.csv and mcmc_compare.json.
std::vector<CompareRow> cmd_mcmc_compare(const CompareOptions& options, std::ostream& console);

struct GenerateOptions {
  std::string kind = "panel";  // panel | LL | LT | SE
  int p = 4;
  int length = 210;
  std::vector<double> sigma;  // LL/LT/SE only
  int period = 12;
  std::uint64_t seed = 1;
  std::filesystem::path output = "panel.csv";
};

void cmd_generate(const GenerateOptions& options, std::ostream& console);

/// Entry point. Returns 0 on success; on failure writes
/// {"error": {"kind": ..., "message": ...}} to `err` and returns nonzero.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace covdlm::cli
