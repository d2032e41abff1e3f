#include <CLI11.hpp>
#include <map>
#include <ostream>
#include <sstream>

#include "fbm2d/cli.hpp"

namespace fbm2d::cli {

bool parse_args(int argc, const char* const* argv, RunConfig& c, std::ostream& out) {
  CLI::App app{"Two-dimensional fractional Brownian motion: analytics, simulation, estimation",
               "fbm2d"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.set_config("--config", "", "flat key=value file; flags override it");

  std::string variant = "causal", format = "csv", estimate = "cov,psd";
  app.add_option("--h1", c.params.h1, "Hurst exponent of component 1")->capture_default_str();
  app.add_option("--h2", c.params.h2, "Hurst exponent of component 2")->capture_default_str();
  app.add_option("--rho", c.params.rho, "noise correlation")->capture_default_str();
  app.add_option("--sigma1", c.params.sigma1)->capture_default_str();
  app.add_option("--sigma2", c.params.sigma2)->capture_default_str();
  app.add_option("--variant", variant, "causal|wb")->capture_default_str();
  auto* n_opt = app.add_option("--n", c.n, "steps per trajectory")->capture_default_str();
  auto* nt_opt =
      app.add_option("--num-traj", c.num_traj, "number of trajectories")->capture_default_str();
  app.add_option("--delta", c.delta, "time step")->capture_default_str();
  auto* seed_opt = app.add_option("--seed", c.seed)->capture_default_str();
  app.add_option("--freq-min", c.freq_min)->capture_default_str();
  app.add_option("--freq-max", c.freq_max)->capture_default_str();
  app.add_option("--freq-points", c.freq_points)->capture_default_str();
  app.add_option("--lag-max", c.lag_max)->capture_default_str();
  app.add_option("--out", c.out, "output file (prefix or directory for multi-table commands)");
  app.add_option("--format", format, "csv|json")->capture_default_str();
  app.add_option("--horizon", c.horizon, "ensemble PSD horizon T (default n*delta)");
  app.add_option("--n-terms", c.n_terms, "series terms for the increment PSD")->capture_default_str();
  app.add_option("--what", c.what, "cov: process|increment|both; psd: increment|ensemble|both")
      ->capture_default_str();
  app.add_option("--raw-paths", c.raw_paths, "simulate: also export this many trajectories");
  app.add_option("--estimate", estimate, "simulate: comma list of cov,psd or none")
      ->capture_default_str();
  app.add_option("--only", c.only, "validate: run only the named checks");
  app.add_option("--corrupt-constant", c.corrupt_constant,
                 "validate: relative perturbation of a_H (harness test hook)")
      ->group("");

  app.add_subcommand("derive", "normalization constants, rho12, eta12 and C for both variants");
  app.add_subcommand("cov", "process and increment covariance over a lag grid");
  app.add_subcommand("psd", "increment PSD and ensemble-averaged PSD with asymptotes");
  app.add_subcommand("simulate", "sample trajectories and export estimator tables");
  app.add_subcommand("validate", "run the acceptance checks");
  app.add_subcommand("figures-data", "export CSV inputs for the figure scripts into --out DIR");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return false;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return false;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  c.command = app.get_subcommands().front()->get_name();
  try {
    c.params.variant = parse_variant(variant);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (format == "csv") c.format = Format::CSV;
  else if (format == "json") c.format = Format::JSON;
  else throw UsageError("unknown format '" + format + "'");

  c.estimate_cov = c.estimate_psd = false;
  std::stringstream ss(estimate);
  for (std::string item; std::getline(ss, item, ',');) {
    if (item == "cov") c.estimate_cov = true;
    else if (item == "psd") c.estimate_psd = true;
    else if (item != "none" && !item.empty()) throw UsageError("unknown estimator '" + item + "'");
  }
  c.n_given = n_opt->count() > 0;
  c.num_traj_given = nt_opt->count() > 0;
  c.seed_given = seed_opt->count() > 0;
  return true;
}

}  // namespace fbm2d::cli
