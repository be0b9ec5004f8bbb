#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "econofit/cli/config.hpp"
#include "econofit/diagnostics.hpp"
#include "json.hpp"

namespace econofit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
/// Outputs were written but a chain failed or the chains disagree.
inline constexpr int kExitDiagnostics = 2;

/// A finished fit read back from its output directory. Chains carry
/// constrained draws and sampler statistics only.
struct FitRun {
  RunConfig config;
  nlohmann::json metadata;
  std::vector<std::string> names;
  std::vector<ChainOutput> chains;
};

FitRun load_fit(const std::filesystem::path& dir);

struct CompareRow {
  std::string model;
  std::filesystem::path dir;
  double elpd = 0.0;
  double se = 0.0;
  double elpd_diff = 0.0;  // relative to the best model, <= 0
  double se_diff = 0.0;
  int n_high_k = 0;
};

struct PairwiseDifference {
  std::string first;
  std::string second;
  LooDifference difference;  // first - second
};

struct Comparison {
  std::vector<CompareRow> rows;  // descending elpd, ties by model name
  std::vector<PairwiseDifference> pairs;
  std::size_t observations = 0;
};

/// Compares fits on the observations they share. Throws InputError with
/// "observation mismatch" when the fits saw different data.
Comparison compare_fits(const std::vector<std::filesystem::path>& dirs);

int cmd_fit(const RunConfig& config, std::ostream& out);
int cmd_simulate(const RunConfig& config, std::ostream& out);
int cmd_diagnose(const std::filesystem::path& dir, std::ostream& out);
int cmd_compare(const std::vector<std::filesystem::path>& dirs, const std::optional<std::filesystem::path>& csv,
                std::ostream& out);
int cmd_forecast(const std::filesystem::path& dir, std::size_t horizon, std::optional<std::uint64_t> seed,
                 std::size_t max_draws, std::ostream& out);
int cmd_prior_check(const RunConfig& config, std::size_t n_series, std::size_t T, std::ostream& out);

}  // namespace econofit::cli
