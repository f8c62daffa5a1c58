#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>

#include "covdlm/cli.hpp"
#include "covdlm/csv.hpp"
#include "covdlm/errors.hpp"
#include "covdlm/mcmc.hpp"
#include "covdlm/models.hpp"
#include "covdlm/report.hpp"

namespace covdlm::cli {

namespace fs = std::filesystem;

namespace {

SymMatrix sym_from_vech(const std::vector<double>& values, const std::string& field) {
  try {
    return unvech(Eigen::Map<const Vector>(values.data(), static_cast<Index>(values.size())));
  } catch (const Error&) {
    throw Error(ErrorKind::ValidationError,
                field + ": expected the p(p+1)/2 lower-triangular entries of a p x p matrix, got " +
                    std::to_string(values.size()) + " values");
  }
}

SymMatrix diag_or_identity(const std::vector<double>& values, int p, const std::string& field) {
  if (values.empty()) return SymMatrix::identity(p);
  if (std::ssize(values) != p) {
    throw Error(ErrorKind::ValidationError, field + ": expected " + std::to_string(p) +
                                                " variances, got " + std::to_string(values.size()));
  }
  return SymMatrix::diagonal(Eigen::Map<const Vector>(values.data(), p));
}

Family parse_study_family(const std::string& name) {
  if (name == "LL") return Family::LocalLevel;
  if (name == "LT") return Family::LinearTrend;
  if (name == "SE") return Family::Seasonal;
  throw Error(ErrorKind::ValidationError, "family: expected LL, LT or SE, got '" + name + "'");
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot create " + dir.string() + ": " + ec.message());
}

std::string fixed(double v, int width = 10, int precision = 4) {
  std::ostringstream s;
  s << std::setw(width) << std::fixed << std::setprecision(precision) << v;
  return s.str();
}

std::string model_name(const std::string& family, int order, std::optional<double> delta) {
  std::string name = family;
  if (family == "VAR" || family == "TVVAR") name += "(" + std::to_string(order) + ")";
  if (delta) name += ": delta=" + format_number(*delta);
  return name;
}

nlohmann::json prior_json(const PriorOptions& prior) {
  return {{"p0_scale", round_significant(prior.p0_scale)}, {"n0", round_significant(prior.n0)}};
}

void write_trace_csv(const fs::path& path, const std::vector<std::pair<long, SymMatrix>>& trace,
                     bool correlations_only) {
  std::ostringstream csv;
  csv << "time,entry,value\n";
  for (const auto& [time, S] : trace) {
    if (correlations_only) {
      write_matrix_rows(csv, time, "rho", correlations(S), false);
    } else {
      write_matrix_rows(csv, time, "s", S.matrix(), true);
    }
  }
  write_text_file(path, csv.str());
}

}  // namespace

fs::path default_output_dir() {
  if (const char* env = std::getenv("COVDLM_OUTPUT_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return ".";
}

// ---------------------------------------------------------------- study

StudyReport cmd_study(const StudyOptions& options, std::ostream& console) {
  if (options.sigma.empty()) {
    throw Error(ErrorKind::ValidationError, "sigma: the true covariance entries are required");
  }
  SimConfig config;
  config.family = parse_study_family(options.family);
  config.sigma = sym_from_vech(options.sigma, "sigma");
  const int p = static_cast<int>(config.sigma.dim());
  const SymMatrix S0 = options.s0.empty() ? SymMatrix::identity(p) : sym_from_vech(options.s0, "s0");
  if (S0.dim() != p) {
    throw Error(ErrorKind::ValidationError, "s0: dimension differs from sigma");
  }
  config.period = options.period;
  const ModelSpec spec = study_model(config);
  config.omega = SymMatrix(options.omega_scale * Matrix::Identity(spec.d, spec.d));
  config.prior = default_prior(spec, S0, options.prior.p0_scale, options.prior.n0);
  config.length = options.length;
  config.replications = options.replications;
  config.snapshots = options.snapshots;
  config.seed = options.seed;
  config.workers = options.workers;

  const StudyReport report = replication_study(config);

  ensure_dir(options.out_dir);
  nlohmann::json doc = to_json(report);
  doc["config"] = {{"family", options.family},
                   {"sigma", to_json(config.sigma.matrix())},
                   {"s0", to_json(S0.matrix())},
                   {"omega_scale", round_significant(options.omega_scale)},
                   {"period", options.period},
                   {"seed", options.seed},
                   {"prior", prior_json(options.prior)}};
  write_json_file(options.out_dir / "study.json", doc);
  std::ostringstream csv;
  write_study_csv(report, csv);
  write_text_file(options.out_dir / "study_trace.csv", csv.str());

  console << "Replication study: " << options.family << ", " << report.replications
          << " series of length " << report.length << "\n";
  console << "entry       true   S_overall";
  for (const auto& snap : report.snapshots) console << std::setw(10) << ("S_" + std::to_string(snap.t));
  console << "\n";
  const Matrix rho_true = correlations(config.sigma);
  const Matrix rho_overall = [&] {
    Matrix total = Matrix::Zero(p, p);
    for (const auto& r : report.rho_bar) total += r;
    return Matrix(total / static_cast<double>(std::max<std::size_t>(1, report.rho_bar.size())));
  }();
  for (int i = 0; i < p; ++i) {
    for (int j = i; j < p; ++j) {
      console << "s" << i + 1 << j + 1 << "   " << fixed(config.sigma(i, j))
              << fixed(report.s_bar_overall(i, j));
      for (const auto& snap : report.snapshots) console << fixed(snap.s_bar(i, j));
      console << "\n";
    }
  }
  for (int i = 0; i < p; ++i) {
    for (int j = i + 1; j < p; ++j) {
      console << "rho" << i + 1 << j + 1 << " " << fixed(rho_true(i, j)) << fixed(rho_overall(i, j));
      for (const auto& snap : report.snapshots) console << fixed(snap.rho_bar(i, j));
      console << "\n";
    }
  }
  console << "MSSE (estimated S):";
  for (Index i = 0; i < report.msse_estimated.size(); ++i) console << fixed(report.msse_estimated(i));
  console << "\nMSSE (known Sigma): ";
  for (Index i = 0; i < report.msse_known.size(); ++i) console << fixed(report.msse_known(i));
  console << "\n";
  return report;
}

// ---------------------------------------------------------------- fit

FitResult fit_panel(const std::vector<Vector>& data, const FitOptions& options,
                    std::vector<std::pair<long, SymMatrix>>* trace) {
  if (data.empty()) throw Error(ErrorKind::InsufficientData, "the panel has no data rows");
  const int p = static_cast<int>(data.front().size());
  const SymMatrix S0 = diag_or_identity(options.s0, p, "s0");
  const std::string& family = options.family;

  FitResult result;
  if (family == "MVDLM") {
    const double delta = options.delta.value_or(0.9);
    result.model = model_name("MV-DLM", 0, delta);
    MvDlmFilter filter(mvdlm_trend(delta), Matrix::Zero(2, p),
                       SymMatrix(options.prior.p0_scale * Matrix::Identity(2, 2)), S0,
                       options.prior.n0);
    std::vector<Vector> errors;
    std::vector<SymMatrix> covs;
    long time = 0;
    for (const auto& y : data) {
      auto step = filter.push(y);
      errors.push_back(std::move(step.e));
      covs.push_back(std::move(step.Q));
      if (trace) trace->emplace_back(++time, filter.S());
    }
    result.metrics = {msse(errors, covs), mape(errors, data), errors.size()};
    result.final_S = filter.S();
    return result;
  }

  ModelSpec spec;
  std::optional<double> shown_delta = options.delta;
  if (family == "LL" || family == "LT" || family == "SE") {
    spec = family == "LL" ? local_level(p) : family == "LT" ? linear_trend(p) : seasonal(p, options.period);
    if (options.delta) spec.evolution = DiscountEvolution{*options.delta, {}};
  } else if (family == "VAR") {
    spec = var_model(p, options.order);
    shown_delta.reset();
  } else if (family == "TVVAR") {
    shown_delta = options.delta.value_or(0.9);
    spec = tvvar_model(p, options.order, *shown_delta);
  } else if (family == "DWR") {
    shown_delta = options.delta.value_or(0.9);
    spec = dwr_model(p, *shown_delta);
  } else {
    throw Error(ErrorKind::ValidationError,
                "family: expected LL, LT, SE, VAR, TVVAR, DWR or MVDLM, got '" + family + "'");
  }
  validate(spec);
  result.model = model_name(family, options.order, shown_delta);
  result.warmup = spec.warmup();
  if (std::ssize(data) <= spec.warmup()) {
    throw Error(ErrorKind::InsufficientData,
                "need more than " + std::to_string(spec.warmup()) + " observations, got " +
                    std::to_string(data.size()));
  }
  const Prior prior = default_prior(spec, S0, options.prior.p0_scale, options.prior.n0);
  const FilterRun run = run_filter(spec, prior, data);
  result.metrics = evaluate(run);
  result.final_S = run.final_state.S;
  if (trace) {
    for (std::size_t k = 0; k < run.steps.size(); ++k) {
      trace->emplace_back(static_cast<long>(k) + run.warmup + 1, run.steps[k].S);
    }
  }
  return result;
}

FitResult cmd_fit(const FitOptions& options, std::ostream& console) {
  const Panel panel = read_panel_file(options.input);
  std::vector<std::pair<long, SymMatrix>> trace;
  const FitResult result = fit_panel(panel.rows, options, &trace);

  ensure_dir(options.out_dir);
  nlohmann::json doc;
  doc["model"] = result.model;
  doc["observations"] = panel.rows.size();
  doc["columns"] = panel.header;
  doc["warmup"] = result.warmup;
  doc["scored"] = result.metrics.count;
  doc["msse"] = to_json(result.metrics.msse);
  doc["mape"] = to_json(result.metrics.mape);
  doc["final_S"] = to_json(result.final_S.matrix());
  doc["final_correlation"] = to_json(correlations(result.final_S));
  doc["prior"] = prior_json(options.prior);
  if (options.family == "DWR") {
    doc["note"] = "Sigma estimated with the on-line covariance estimator";
  }
  write_json_file(options.out_dir / "fit.json", doc);
  write_trace_csv(options.out_dir / "covariance_trace.csv", trace, false);
  write_trace_csv(options.out_dir / "correlation_trace.csv", trace, true);

  console << result.model << " on " << panel.rows.size() << " observations (" << result.metrics.count
          << " scored)\nMSSE:";
  for (Index i = 0; i < result.metrics.msse.size(); ++i) console << fixed(result.metrics.msse(i));
  console << "\nMAPE:";
  for (Index i = 0; i < result.metrics.mape.size(); ++i) console << fixed(result.metrics.mape(i));
  console << "\n";
  return result;
}

// ---------------------------------------------------------------- scan

std::vector<double> default_delta_grid() {
  std::vector<double> grid;
  for (int k = 2; k <= 19; ++k) grid.push_back(k * 0.05);
  return grid;
}

double msse_distance(const Vector& msse) { return (msse.array() - 1.0).abs().sum(); }

std::vector<ScanRow> scan_panel(const std::vector<Vector>& data, const ScanOptions& options) {
  if (options.deltas.empty()) {
    throw Error(ErrorKind::ValidationError, "deltas: the discount grid is empty");
  }
  for (double d : options.deltas) {
    if (!(d > 0.0 && d <= 1.0)) {
      throw Error(ErrorKind::ValidationError,
                  "deltas: every discount factor must lie in (0, 1], got " + format_number(d));
    }
  }
  if (options.min_order < 1 || options.max_order < options.min_order) {
    throw Error(ErrorKind::ValidationError, "orders: need 1 <= min order <= max order");
  }
  std::vector<double> tv_deltas;
  for (double d : options.deltas) {
    if (d < 1.0 && std::find(tv_deltas.begin(), tv_deltas.end(), d) == tv_deltas.end()) {
      tv_deltas.push_back(d);
    }
  }

  std::vector<ScanRow> rows;
  for (int order = options.min_order; order <= options.max_order; ++order) {
    std::vector<std::optional<double>> cells{std::nullopt};
    for (double d : tv_deltas) cells.emplace_back(d);
    for (const auto& delta : cells) {
      FitOptions fit;
      fit.family = delta ? "TVVAR" : "VAR";
      fit.order = order;
      fit.delta = delta;
      fit.s0 = options.s0;
      fit.prior = options.prior;
      ScanRow row;
      row.model = model_name(fit.family, order, std::nullopt);
      row.order = order;
      row.delta = delta.value_or(1.0);
      try {
        const FitResult result = fit_panel(data, fit);
        row.ok = true;
        row.msse = result.metrics.msse;
        row.mape = result.metrics.mape;
      } catch (const Error& e) {
        row.ok = false;
        row.error = std::string(to_string(e.kind()));
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<ScanRow> cmd_scan(const ScanOptions& options, std::ostream& console) {
  const Panel panel = read_panel_file(options.input);
  const auto rows = scan_panel(panel.rows, options);
  const int p = panel.columns();

  ensure_dir(options.out_dir);
  std::ostringstream csv;
  csv << "model,order,delta,status,error";
  for (int i = 1; i <= p; ++i) csv << ",msse_" << i;
  for (int i = 1; i <= p; ++i) csv << ",mape_" << i;
  csv << "\n";
  nlohmann::json doc;
  doc["observations"] = panel.rows.size();
  doc["rows"] = nlohmann::json::array();
  for (const auto& row : rows) {
    csv << row.model << ',' << row.order << ',' << format_number(row.delta) << ','
        << (row.ok ? "ok" : "failed") << ',' << row.error;
    for (int i = 0; i < p; ++i) csv << ',' << (row.ok ? format_number(row.msse(i)) : "");
    for (int i = 0; i < p; ++i) csv << ',' << (row.ok ? format_number(row.mape(i)) : "");
    csv << "\n";
    nlohmann::json j = {{"model", row.model},
                        {"order", row.order},
                        {"delta", round_significant(row.delta)},
                        {"status", row.ok ? "ok" : "failed"}};
    if (row.ok) {
      j["msse"] = to_json(row.msse);
      j["mape"] = to_json(row.mape);
    } else {
      j["error"] = row.error;
    }
    doc["rows"].push_back(std::move(j));
  }
  write_text_file(options.out_dir / "scan.csv", csv.str());
  write_json_file(options.out_dir / "scan.json", doc);

  console << std::left << std::setw(12) << "model" << std::setw(8) << "delta" << std::right
          << "  MSSE / MAPE\n";
  for (const auto& row : rows) {
    console << std::left << std::setw(12) << row.model << std::setw(8) << format_number(row.delta)
            << std::right;
    if (!row.ok) {
      console << "  failed (" << row.error << ")\n";
      continue;
    }
    for (int i = 0; i < p; ++i) console << fixed(row.msse(i), 9, 3);
    console << "  |";
    for (int i = 0; i < p; ++i) console << fixed(row.mape(i), 7, 3);
    console << "\n";
  }
  return rows;
}

// ---------------------------------------------------------------- mcmc-compare

namespace {

struct CompareSetup {
  SymMatrix real;
  ModelSpec spec;
  Prior prior;
  GibbsConfig gibbs;
};

CompareSetup compare_setup(const CompareOptions& options) {
  CompareSetup setup;
  setup.real = sym_from_vech(options.sigma, "sigma");
  const int p = static_cast<int>(setup.real.dim());
  const SymMatrix S0 = options.s0.empty() ? SymMatrix::identity(p) : sym_from_vech(options.s0, "s0");
  if (S0.dim() != p) throw Error(ErrorKind::ValidationError, "s0: dimension differs from sigma");
  setup.spec = local_level(p);
  setup.spec.evolution = FixedEvolution{SymMatrix(options.omega_scale * Matrix::Identity(p, p))};
  setup.prior = default_prior(setup.spec, S0, options.prior.p0_scale, options.prior.n0);
  setup.gibbs.iterations = options.iterations;
  setup.gibbs.burn_in = options.burn_in;
  setup.gibbs.n0 = options.prior.n0;
  setup.gibbs.S0 = S0;
  setup.gibbs.m0 = setup.prior.m0;
  setup.gibbs.P0 = setup.prior.P0;
  setup.gibbs.seed = options.seed;
  validate(setup.gibbs);
  if (options.checkpoints.empty()) {
    throw Error(ErrorKind::ValidationError, "checkpoints: at least one is required");
  }
  for (int n : options.checkpoints) {
    if (n < 1 || n > options.length) {
      throw Error(ErrorKind::ValidationError, "checkpoints: " + std::to_string(n) +
                                                  " is outside 1.." +
                                                  std::to_string(options.length));
    }
  }
  return setup;
}

Vector mean_square(const FilterRun& run, int N) {
  Vector total = Vector::Zero(run.steps.front().e.size());
  for (int t = 0; t < N; ++t) total += run.steps[t].e.cwiseAbs2();
  return total / N;
}

}  // namespace

std::vector<CompareRow> compare_on_series(const std::vector<Vector>& data,
                                          const CompareOptions& options) {
  const CompareSetup setup = compare_setup(options);
  if (std::ssize(data) < options.length) {
    throw Error(ErrorKind::InsufficientData, "series shorter than the requested length");
  }
  const FilterRun online = run_filter(setup.spec, setup.prior, data);

  std::vector<CompareRow> rows;
  for (int N : options.checkpoints) {
    const std::span<const Vector> head(data.data(), static_cast<std::size_t>(N));
    GibbsConfig gibbs = setup.gibbs;
    gibbs.seed = options.seed + static_cast<std::uint64_t>(N);
    const GibbsSummary summary = gibbs_run(head, setup.spec, gibbs);

    Prior known = setup.prior;
    known.S0 = summary.sigma_mean;
    const FilterRun mcmc_run = run_filter(setup.spec, known, head, CovarianceMode::Fixed);

    CompareRow row;
    row.N = N;
    row.real = setup.real;
    row.mcmc = summary.sigma_mean;
    row.online = online.steps[N - 1].S;
    row.e_mcmc = mcmc_run.steps.back().e;
    row.e_online = online.steps[N - 1].e;
    row.mse_mcmc = mean_square(mcmc_run, N);
    row.mse_online = mean_square(online, N);
    row.gap = relative_frobenius_error(row.online.matrix(), row.mcmc.matrix());
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<CompareRow> cmd_mcmc_compare(const CompareOptions& options, std::ostream& console) {
  const CompareSetup setup = compare_setup(options);
  const auto series = generate(setup.spec, setup.prior, setup.real, options.length, options.seed);
  const auto rows = compare_on_series(series.observations, options);
  const Index p = setup.real.dim();

  ensure_dir(options.out_dir);
  std::ostringstream csv;
  csv << "N";
  for (Index i = 0; i < p; ++i) {
    for (Index j = i; j < p; ++j) {
      const std::string e = "s" + std::to_string(i + 1) + std::to_string(j + 1);
      csv << ',' << e << "_real," << e << "_mcmc," << e << "_new";
    }
  }
  for (Index i = 0; i < p; ++i) {
    for (Index j = i + 1; j < p; ++j) {
      const std::string e = "rho" + std::to_string(i + 1) + std::to_string(j + 1);
      csv << ',' << e << "_real," << e << "_mcmc," << e << "_new";
    }
  }
  for (Index i = 0; i < p; ++i) csv << ",e" << i + 1 << "_mcmc,e" << i + 1 << "_new";
  for (Index i = 0; i < p; ++i) csv << ",mse" << i + 1 << "_mcmc,mse" << i + 1 << "_new";
  csv << ",gap\n";

  nlohmann::json doc;
  doc["config"] = {{"sigma", to_json(setup.real.matrix())},
                   {"length", options.length},
                   {"iterations", options.iterations},
                   {"burn_in", options.burn_in},
                   {"seed", options.seed},
                   {"prior", prior_json(options.prior)}};
  doc["rows"] = nlohmann::json::array();
  for (const auto& row : rows) {
    const Matrix rho_real = correlations(row.real);
    const Matrix rho_mcmc = correlations(row.mcmc);
    const Matrix rho_new = correlations(row.online);
    csv << row.N;
    for (Index i = 0; i < p; ++i) {
      for (Index j = i; j < p; ++j) {
        csv << ',' << format_number(row.real(i, j)) << ',' << format_number(row.mcmc(i, j)) << ','
            << format_number(row.online(i, j));
      }
    }
    for (Index i = 0; i < p; ++i) {
      for (Index j = i + 1; j < p; ++j) {
        csv << ',' << format_number(rho_real(i, j)) << ',' << format_number(rho_mcmc(i, j)) << ','
            << format_number(rho_new(i, j));
      }
    }
    for (Index i = 0; i < p; ++i) {
      csv << ',' << format_number(row.e_mcmc(i)) << ',' << format_number(row.e_online(i));
    }
    for (Index i = 0; i < p; ++i) {
      csv << ',' << format_number(row.mse_mcmc(i)) << ',' << format_number(row.mse_online(i));
    }
    csv << ',' << format_number(row.gap) << "\n";
    doc["rows"].push_back({{"N", row.N},
                           {"mcmc", to_json(row.mcmc.matrix())},
                           {"new", to_json(row.online.matrix())},
                           {"e_mcmc", to_json(row.e_mcmc)},
                           {"e_new", to_json(row.e_online)},
                           {"mse_mcmc", to_json(row.mse_mcmc)},
                           {"mse_new", to_json(row.mse_online)},
                           {"gap", round_significant(row.gap)}});
  }
  write_text_file(options.out_dir / "mcmc_compare.csv", csv.str());
  write_json_file(options.out_dir / "mcmc_compare.json", doc);

  console << "     N";
  for (Index i = 0; i < p; ++i) {
    for (Index j = i; j < p; ++j) {
      console << "   s" << i + 1 << j + 1 << " real/MCMC/new      ";
    }
  }
  console << "    gap\n";
  for (const auto& row : rows) {
    console << std::setw(6) << row.N;
    for (Index i = 0; i < p; ++i) {
      for (Index j = i; j < p; ++j) {
        console << fixed(row.real(i, j), 8, 2) << fixed(row.mcmc(i, j), 8, 2)
                << fixed(row.online(i, j), 8, 2) << "   ";
      }
    }
    console << fixed(row.gap, 8, 3) << "\n";
  }
  return rows;
}

// ---------------------------------------------------------------- generate

void cmd_generate(const GenerateOptions& options, std::ostream& console) {
  Panel panel;
  if (options.kind == "panel") {
    if (options.p < 1) throw Error(ErrorKind::ValidationError, "p: must be >= 1");
    if (options.length < 1) throw Error(ErrorKind::ValidationError, "len: must be >= 1");
    panel.rows = trending_panel(options.p, options.length, options.seed);
  } else {
    if (options.sigma.empty()) {
      throw Error(ErrorKind::ValidationError, "sigma: required for model-based generation");
    }
    const SymMatrix sigma = sym_from_vech(options.sigma, "sigma");
    SimConfig config;
    config.family = parse_study_family(options.kind);
    config.sigma = sigma;
    config.period = options.period;
    const ModelSpec spec = study_model(config);
    const Prior prior = default_prior(spec, SymMatrix::identity(sigma.dim()));
    panel.rows = generate(spec, prior, sigma, options.length, options.seed).observations;
  }
  for (Index i = 0; i < panel.rows.front().size(); ++i) {
    panel.header.push_back("y" + std::to_string(i + 1));
  }
  std::ostringstream text;
  write_panel(text, panel);
  if (options.output.has_parent_path()) ensure_dir(options.output.parent_path());
  write_text_file(options.output, text.str());
  console << "wrote " << panel.rows.size() << " rows to " << options.output.string() << "\n";
}

}  // namespace covdlm::cli
