#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "econofit/model.hpp"
#include "econofit/sampler.hpp"
#include "json.hpp"

namespace econofit::cli {

struct SimulateSettings {
  std::size_t T = 0;
  /// Structural parameters by name; must name every structural parameter.
  std::map<std::string, double> parameters;
  std::vector<double> init;
};

/// One run. Paths are stored absolute, resolved against the directory of
/// the config file.
struct RunConfig {
  ModelKind model = ModelKind::kGarch;
  std::optional<std::filesystem::path> data_path;
  std::filesystem::path output_dir;
  std::uint64_t seed = 0;
  HmcConfig sampler;
  /// Prior overrides as written, e.g. "normal(0, 1)".
  std::map<std::string, std::string> priors;
  double p_star = 0.0;
  std::optional<double> return_sd;
  std::optional<SimulateSettings> simulate;

  ModelOptions model_options() const;
  nlohmann::ordered_json to_json() const;
};

/// Strict parse: unknown keys, wrong types and missing files are errors.
RunConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir);

/// Reads a config file. A metadata.json written by a previous run is accepted
/// too; its recorded config is used.
RunConfig load_config(const std::filesystem::path& path);

/// Parses "family(a, b, ...)" as printed by Prior::describe.
Prior parse_prior(std::string_view text);

}  // namespace econofit::cli
