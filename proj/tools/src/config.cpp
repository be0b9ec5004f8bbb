#include "econofit/cli/config.hpp"

#include <fstream>
#include <set>

#include "econofit/cli/io.hpp"

namespace econofit::cli {
namespace {

using nlohmann::json;

void check_keys(const json& j, const std::set<std::string>& allowed, std::string_view where) {
  if (!j.is_object()) throw InputError(std::string(where) + " must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) throw InputError("unknown key '" + key + "' in " + std::string(where));
}

double get_number(const json& j, const std::string& key, std::string_view where) {
  if (!j.at(key).is_number()) throw InputError("'" + key + "' in " + std::string(where) + " must be a number");
  return j.at(key).get<double>();
}

long long get_integer(const json& j, const std::string& key, std::string_view where) {
  if (!j.at(key).is_number_integer())
    throw InputError("'" + key + "' in " + std::string(where) + " must be an integer");
  return j.at(key).get<long long>();
}

std::string get_string(const json& j, const std::string& key, std::string_view where) {
  if (!j.at(key).is_string()) throw InputError("'" + key + "' in " + std::string(where) + " must be a string");
  return j.at(key).get<std::string>();
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  return std::filesystem::weakly_canonical(std::filesystem::absolute(base / p));
}

}  // namespace

Prior parse_prior(std::string_view text) {
  const std::string s(text);
  const auto open = s.find('(');
  const auto close = s.rfind(')');
  if (open == std::string::npos || close == std::string::npos || close < open || s.find_first_not_of(" ", close + 1) != std::string::npos)
    throw InputError("prior '" + s + "' must look like family(a, b)");
  std::string family = s.substr(0, open);
  family.erase(family.find_last_not_of(' ') + 1);
  family.erase(0, family.find_first_not_of(' '));
  std::vector<double> args;
  const std::string inner = s.substr(open + 1, close - open - 1);
  if (inner.find_first_not_of(' ') != std::string::npos) {
    std::size_t start = 0;
    while (true) {
      const auto comma = inner.find(',', start);
      args.push_back(parse_double(inner.substr(start, comma - start), "prior argument in '" + s + "'"));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  auto need = [&](std::size_t n) {
    if (args.size() != n)
      throw InputError("prior " + family + " takes " + std::to_string(n) + " arguments, got " +
                       std::to_string(args.size()));
  };
  try {
    if (family == "flat") return need(0), Prior::flat();
    if (family == "normal") return need(2), Prior::normal(args[0], args[1]);
    if (family == "half_normal") return need(1), Prior::half_normal(args[0]);
    if (family == "student_t") return need(3), Prior::student_t(args[0], args[1], args[2]);
    if (family == "half_student_t") return need(2), Prior::half_student_t(args[0], args[1]);
    if (family == "beta") return need(2), Prior::beta(args[0], args[1]);
    if (family == "gamma") return need(2), Prior::gamma(args[0], args[1]);
    if (family == "uniform") return need(2), Prior::uniform(args[0], args[1]);
    if (family == "point_mass") return need(1), Prior::point_mass(args[0]);
  } catch (const std::invalid_argument& e) {
    throw InputError("prior '" + s + "': " + e.what());
  }
  throw InputError("unknown prior family '" + family + "'");
}

ModelOptions RunConfig::model_options() const {
  ModelOptions o;
  for (const auto& [name, text] : priors) o.prior_overrides.emplace(name, parse_prior(text));
  o.p_star = p_star;
  if (return_sd) o.return_sd = *return_sd;
  return o;
}

nlohmann::ordered_json RunConfig::to_json() const {
  nlohmann::ordered_json j;
  j["model"] = std::string(to_string(model));
  if (data_path) j["data"] = data_path->string();
  j["output_dir"] = output_dir.string();
  j["seed"] = seed;
  j["sampler"] = {{"chains", sampler.chains},
                  {"warmup", sampler.warmup},
                  {"draws", sampler.draws},
                  {"max_tree_depth", sampler.max_tree_depth},
                  {"target_accept", sampler.target_accept},
                  {"init_radius", sampler.init_radius}};
  j["priors"] = nlohmann::ordered_json::object();
  for (const auto& [name, text] : priors) j["priors"][name] = text;
  j["p_star"] = p_star;
  if (return_sd) j["return_sd"] = *return_sd;
  if (simulate) {
    nlohmann::ordered_json s;
    s["T"] = simulate->T;
    s["parameters"] = nlohmann::ordered_json::object();
    for (const auto& [name, v] : simulate->parameters) s["parameters"][name] = v;
    if (!simulate->init.empty()) s["init"] = simulate->init;
    j["simulate"] = s;
  }
  return j;
}

RunConfig parse_config(const json& j, const std::filesystem::path& base_dir) {
  check_keys(j, {"model", "data", "output_dir", "seed", "sampler", "priors", "p_star", "return_sd", "simulate"},
             "config");
  RunConfig c;
  if (!j.contains("model")) throw InputError("missing required key 'model' in config");
  try {
    c.model = parse_model_kind(get_string(j, "model", "config"));
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  if (!j.contains("output_dir")) throw InputError("missing required key 'output_dir' in config");
  c.output_dir = resolve(base_dir, get_string(j, "output_dir", "config"));
  if (j.contains("data")) {
    c.data_path = resolve(base_dir, get_string(j, "data", "config"));
    if (!std::filesystem::is_regular_file(*c.data_path))
      throw InputError("data file does not exist: " + c.data_path->string());
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !(j["seed"].is_number_integer() && j["seed"].get<long long>() >= 0))
      throw InputError("'seed' in config must be a non-negative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("sampler")) {
    const json& s = j["sampler"];
    check_keys(s, {"chains", "warmup", "draws", "max_tree_depth", "target_accept", "init_radius"}, "sampler");
    if (s.contains("chains")) c.sampler.chains = static_cast<int>(get_integer(s, "chains", "sampler"));
    if (s.contains("warmup")) c.sampler.warmup = static_cast<int>(get_integer(s, "warmup", "sampler"));
    if (s.contains("draws")) c.sampler.draws = static_cast<int>(get_integer(s, "draws", "sampler"));
    if (s.contains("max_tree_depth"))
      c.sampler.max_tree_depth = static_cast<int>(get_integer(s, "max_tree_depth", "sampler"));
    if (s.contains("target_accept")) c.sampler.target_accept = get_number(s, "target_accept", "sampler");
    if (s.contains("init_radius")) c.sampler.init_radius = get_number(s, "init_radius", "sampler");
  }
  c.sampler.seed = c.seed;
  try {
    c.sampler.validate();
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  if (j.contains("priors")) {
    if (!j["priors"].is_object()) throw InputError("'priors' in config must be an object");
    for (const auto& [name, spec] : j["priors"].items()) {
      if (!spec.is_string()) throw InputError("prior for '" + name + "' must be a string such as \"normal(0, 1)\"");
      parse_prior(spec.get<std::string>());
      c.priors[name] = spec.get<std::string>();
    }
  }
  if (j.contains("p_star")) c.p_star = get_number(j, "p_star", "config");
  if (j.contains("return_sd")) {
    c.return_sd = get_number(j, "return_sd", "config");
    if (!(*c.return_sd > 0.0)) throw InputError("'return_sd' in config must be positive");
  }
  if (j.contains("simulate")) {
    const json& s = j["simulate"];
    check_keys(s, {"T", "parameters", "init"}, "simulate");
    SimulateSettings sim;
    if (!s.contains("T")) throw InputError("missing required key 'T' in simulate");
    const long long T = get_integer(s, "T", "simulate");
    if (T < 3) throw InputError("'T' in simulate must be at least 3");
    sim.T = static_cast<std::size_t>(T);
    if (!s.contains("parameters") || !s["parameters"].is_object())
      throw InputError("simulate needs a 'parameters' object");
    for (const auto& [name, v] : s["parameters"].items()) {
      if (!v.is_number()) throw InputError("simulate parameter '" + name + "' must be a number");
      sim.parameters[name] = v.get<double>();
    }
    if (s.contains("init")) {
      if (!s["init"].is_array()) throw InputError("'init' in simulate must be an array of log prices");
      for (const auto& v : s["init"]) {
        if (!v.is_number()) throw InputError("'init' in simulate must be an array of log prices");
        sim.init.push_back(v.get<double>());
      }
    }
    c.simulate = std::move(sim);
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
  const auto base = std::filesystem::absolute(path).parent_path();
  if (j.is_object() && j.contains("econofit_version") && j.contains("config")) return parse_config(j["config"], base);
  return parse_config(j, base);
}

}  // namespace econofit::cli
