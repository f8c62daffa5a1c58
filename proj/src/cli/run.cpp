#include <algorithm>
#include <charconv>
#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "covdlm/cli.hpp"
#include "covdlm/errors.hpp"

namespace covdlm::cli {

namespace {

// "3-7" or "5"
std::pair<int, int> parse_order_range(const std::string& text) {
  const auto dash = text.find('-', 1);
  auto to_int = [&](std::string_view s) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw Error(ErrorKind::ValidationError, "orders: expected N or A-B, got '" + text + "'");
    }
    return v;
  };
  if (dash == std::string::npos) {
    const int v = to_int(text);
    return {v, v};
  }
  return {to_int(std::string_view(text).substr(0, dash)),
          to_int(std::string_view(text).substr(dash + 1))};
}

void add_prior(CLI::App* cmd, PriorOptions& prior) {
  cmd->add_option("--p0-scale", prior.p0_scale, "P0 = scale * I")->check(CLI::PositiveNumber);
  cmd->add_option("--n0", prior.n0, "prior degrees of freedom")->check(CLI::PositiveNumber);
}

void print_error(std::ostream& err, std::string_view kind, const std::string& message) {
  const nlohmann::json doc = {{"error", {{"kind", kind}, {"message", message}}}};
  err << doc.dump() << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"On-line covariance estimation for multivariate dynamic linear models", "covdlm"};
  app.require_subcommand(1);
  std::string out_dir = default_output_dir().string();

  StudyOptions study;
  auto* study_cmd = app.add_subcommand("study", "Monte Carlo replication study on simulated series");
  study_cmd->add_option("--family", study.family, "LL, LT or SE");
  study_cmd->add_option("--sigma", study.sigma, "lower triangle of the true Sigma, row-wise")
      ->delimiter(',')
      ->required();
  study_cmd->add_option("--s0", study.s0, "lower triangle of S0 (default identity)")->delimiter(',');
  study_cmd->add_option("--omega", study.omega_scale, "Omega = value * I");
  study_cmd->add_option("--reps", study.replications, "number of replications");
  study_cmd->add_option("--len", study.length, "series length");
  study_cmd->add_option("--period", study.period, "seasonal period (SE)");
  study_cmd->add_option("--snapshots", study.snapshots, "times reported in the table")->delimiter(',');
  study_cmd->add_option("--seed", study.seed);
  study_cmd->add_option("--workers", study.workers, "threads (0 = all cores)");
  study_cmd->add_option("--out", out_dir, "output directory");
  add_prior(study_cmd, study.prior);

  FitOptions fit;
  std::optional<double> fit_delta;
  auto* fit_cmd = app.add_subcommand("fit", "Filter a CSV panel with one model");
  fit_cmd->add_option("--input", fit.input, "CSV panel, one observation per row")->required();
  fit_cmd->add_option("--model", fit.family, "LL LT SE VAR TVVAR DWR MVDLM");
  fit_cmd->add_option("--order", fit.order, "VAR/TVVAR lag order");
  fit_cmd->add_option("--delta", fit_delta, "discount factor in (0, 1]");
  fit_cmd->add_option("--period", fit.period, "seasonal period (SE)");
  fit_cmd->add_option("--s0", fit.s0, "prior variances, one per column")->delimiter(',');
  fit_cmd->add_option("--out", out_dir, "output directory");
  add_prior(fit_cmd, fit.prior);

  ScanOptions scan;
  std::string orders = "1-10";
  auto* scan_cmd = app.add_subcommand("scan", "VAR and TVVAR over a range of orders and discounts");
  scan_cmd->add_option("--input", scan.input, "CSV panel")->required();
  scan_cmd->add_option("--orders", orders, "lag orders, e.g. 1-10");
  scan_cmd->add_option("--deltas", scan.deltas, "discount grid")->delimiter(',');
  scan_cmd->add_option("--s0", scan.s0, "prior variances, one per column")->delimiter(',');
  scan_cmd->add_option("--out", out_dir, "output directory");
  add_prior(scan_cmd, scan.prior);

  CompareOptions compare;
  auto* compare_cmd =
      app.add_subcommand("mcmc-compare", "On-line estimate against the Gibbs posterior mean");
  compare_cmd->add_option("--sigma", compare.sigma, "lower triangle of the true Sigma")
      ->delimiter(',');
  compare_cmd->add_option("--s0", compare.s0, "lower triangle of S0")->delimiter(',');
  compare_cmd->add_option("--omega", compare.omega_scale, "Omega = value * I");
  compare_cmd->add_option("--len", compare.length, "series length");
  compare_cmd->add_option("--checkpoints", compare.checkpoints)->delimiter(',');
  compare_cmd->add_option("--iterations", compare.iterations, "Gibbs sweeps");
  compare_cmd->add_option("--burn-in", compare.burn_in);
  compare_cmd->add_option("--seed", compare.seed);
  compare_cmd->add_option("--out", out_dir, "output directory");
  add_prior(compare_cmd, compare.prior);

  GenerateOptions generate;
  auto* generate_cmd = app.add_subcommand("generate", "Write a synthetic CSV panel");
  generate_cmd->add_option("--kind", generate.kind, "panel, LL, LT or SE");
  generate_cmd->add_option("--p", generate.p, "columns (panel)");
  generate_cmd->add_option("--len", generate.length, "rows");
  generate_cmd->add_option("--sigma", generate.sigma, "lower triangle of Sigma (LL/LT/SE)")
      ->delimiter(',');
  generate_cmd->add_option("--period", generate.period);
  generate_cmd->add_option("--seed", generate.seed);
  generate_cmd->add_option("--output", generate.output, "CSV path");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    print_error(err, to_string(ErrorKind::ValidationError), e.what());
    return 2;
  }

  try {
    if (study_cmd->parsed()) {
      study.out_dir = out_dir;
      cmd_study(study, out);
    } else if (fit_cmd->parsed()) {
      fit.delta = fit_delta;
      fit.out_dir = out_dir;
      cmd_fit(fit, out);
    } else if (scan_cmd->parsed()) {
      std::tie(scan.min_order, scan.max_order) = parse_order_range(orders);
      scan.out_dir = out_dir;
      cmd_scan(scan, out);
    } else if (compare_cmd->parsed()) {
      compare.out_dir = out_dir;
      cmd_mcmc_compare(compare, out);
    } else if (generate_cmd->parsed()) {
      cmd_generate(generate, out);
    }
  } catch (const Error& e) {
    print_error(err, to_string(e.kind()), e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error(err, "InternalError", e.what());
    return 1;
  }
  return 0;
}

}  // namespace covdlm::cli
