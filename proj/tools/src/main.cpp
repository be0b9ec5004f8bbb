#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "econofit/cli/commands.hpp"
#include "econofit/cli/io.hpp"

namespace fs = std::filesystem;
using namespace econofit::cli;

int main(int argc, char** argv) {
  CLI::App app{"Bayesian estimation of GARCH, Vikram-Sinha and Franke-Westerhoff models"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_dir;
  auto* fit = app.add_subcommand("fit", "Sample the posterior of a model given a price series");
  fit->add_option("--config", config_path, "Run config, or a metadata.json to replay")->required();
  fit->add_option("--output-dir", output_dir, "Override the configured output directory");

  auto* simulate = app.add_subcommand("simulate", "Simulate prices from fixed parameters");
  simulate->add_option("--config", config_path, "Run config with a simulate block")->required();
  simulate->add_option("--output-dir", output_dir, "Override the configured output directory");

  std::string fit_dir;
  auto* diagnose = app.add_subcommand("diagnose", "Convergence report for a finished fit");
  diagnose->add_option("fit_dir", fit_dir, "Fit output directory")->required();

  std::vector<std::string> dirs;
  std::string compare_csv;
  auto* compare = app.add_subcommand("compare", "Leave-one-out comparison of fits on the same data");
  compare->add_option("fit_dirs", dirs, "Two or more fit output directories")->required();
  compare->add_option("--output", compare_csv, "Also write the table as CSV");

  std::size_t horizon = 250;
  std::optional<std::uint64_t> seed;
  std::size_t max_draws = 0;
  auto* forecast = app.add_subcommand("forecast", "Posterior predictive fan and smoothed states");
  forecast->add_option("fit_dir", fit_dir, "Fit output directory")->required();
  forecast->add_option("--horizon", horizon, "Steps past the last observed price")->capture_default_str();
  forecast->add_option("--seed", seed, "Seed of the predictive simulation (default: the fit seed)");
  forecast->add_option("--max-draws", max_draws, "Thin the pooled draws to at most this many (0 keeps all)");

  std::size_t n_series = 12;
  std::size_t T = 1500;
  auto* prior = app.add_subcommand("prior-check", "Prior predictive simulation");
  prior->add_option("--config", config_path, "Run config")->required();
  prior->add_option("--n", n_series, "Number of series")->capture_default_str();
  prior->add_option("--T", T, "Prices per series")->capture_default_str();
  prior->add_option("--output-dir", output_dir, "Override the configured output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    auto config = [&] {
      RunConfig c = load_config(config_path);
      if (!output_dir.empty()) c.output_dir = fs::absolute(output_dir);
      return c;
    };
    if (*fit) return cmd_fit(config(), std::cout);
    if (*simulate) return cmd_simulate(config(), std::cout);
    if (*diagnose) return cmd_diagnose(fit_dir, std::cout);
    if (*compare) {
      std::vector<fs::path> paths(dirs.begin(), dirs.end());
      std::optional<fs::path> csv;
      if (!compare_csv.empty()) csv = compare_csv;
      return cmd_compare(paths, csv, std::cout);
    }
    if (*forecast) return cmd_forecast(fit_dir, horizon, seed, max_draws, std::cout);
    if (*prior) return cmd_prior_check(config(), n_series, T, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
