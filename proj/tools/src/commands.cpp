#include "econofit/cli/commands.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "econofit/cli/io.hpp"
#include "econofit/forecast.hpp"

#ifndef ECONOFIT_VERSION
#define ECONOFIT_VERSION "unknown"
#endif

namespace econofit::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, v);
  return buf;
}

void write_json(const fs::path& path, const ordered_json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

nlohmann::json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

ordered_json base_metadata(const RunConfig& config, std::string_view command) {
  ordered_json m;
  m["econofit_version"] = ECONOFIT_VERSION;
  m["command"] = std::string(command);
  m["config"] = config.to_json();
  return m;
}

ordered_json data_json(const RunConfig& config, const PriceSeries& data) {
  ordered_json d;
  d["path"] = config.data_path ? config.data_path->string() : "";
  d["prices"] = data.size();
  d["fingerprint"] = hex(data.fingerprint());
  if (!data.dates().empty()) {
    d["first_date"] = data.dates().front();
    d["last_date"] = data.dates().back();
  }
  return d;
}

std::string cell(const std::optional<double>& v) { return v ? format_double(*v) : "NA"; }

std::string fixed(const std::optional<double>& v, const char* fmt) {
  if (!v) return "NA";
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, *v);
  return buf;
}

std::string row_text(const SummaryRow& r) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-16s %12.5g %12.5g %12.5g %12.5g %12.5g %7s %8s", r.name.c_str(), r.mean, r.sd,
                r.q025, r.q50, r.q975, fixed(r.rhat, "%.3f").c_str(), fixed(r.ess, "%.0f").c_str());
  return buf;
}

// Human readable report. Latent innovations are folded into one line.
std::string report_text(const Model& model, const RunReport& report, const std::optional<LooResult>& loo) {
  std::ostringstream os;
  os << "model " << model.name() << ", " << model.data().size() << " prices\n";
  os << "chains used " << report.chains_used << ", failed " << report.failed_chains << ", draws "
     << report.total_draws << "\n";
  os << "divergences " << report.divergences << ", tree depth saturations " << report.tree_depth_saturations << "\n";
  os << "multimodality ";
  if (report.multimodal) {
    os << "suspected in";
    for (const auto& n : report.multimodal_parameters) os << ' ' << n;
    os << "\n";
  } else {
    os << "not detected\n";
  }
  char head[256];
  std::snprintf(head, sizeof(head), "%-16s %12s %12s %12s %12s %12s %7s %8s", "parameter", "mean", "sd", "2.5%", "50%",
                "97.5%", "rhat", "ess");
  os << head << "\n";
  const std::size_t k = model.num_structural();
  for (std::size_t i = 0; i < report.rows.size() && i < k; ++i) os << row_text(report.rows[i]) << "\n";
  if (report.rows.size() > k) {
    double max_rhat = 0.0, min_ess = INFINITY;
    for (std::size_t i = k; i < report.rows.size(); ++i) {
      if (report.rows[i].rhat) max_rhat = std::max(max_rhat, *report.rows[i].rhat);
      if (report.rows[i].ess) min_ess = std::min(min_ess, *report.rows[i].ess);
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf), "latent innovations: %zu coordinates, max rhat %.3f, min ess %.0f\n",
                  report.rows.size() - k, max_rhat, min_ess);
    os << buf;
  }
  if (loo) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "elpd_loo %.2f (se %.2f), pareto k > 0.7: %d, 0.5 < k <= 0.7: %d\n", loo->elpd,
                  loo->se, loo->n_high_k, loo->n_warn_k);
    os << buf;
  }
  for (const auto& n : report.notes) os << "note: " << n << "\n";
  return os.str();
}

void write_summary_csv(const fs::path& path, const RunReport& report) {
  CsvWriter w(path);
  w.row({"parameter", "mean", "sd", "q2.5", "q50", "q97.5", "rhat", "ess"});
  for (const auto& r : report.rows) {
    w.cell(std::string_view(r.name)).cell(r.mean).cell(r.sd).cell(r.q025).cell(r.q50).cell(r.q975);
    w.cell(std::string_view(cell(r.rhat))).cell(std::string_view(cell(r.ess))).end_row();
  }
}

void write_draws(const fs::path& path, const std::vector<ChainOutput>& chains, const std::vector<std::string>& names) {
  CsvWriter w(path);
  w.cell("chain").cell("iteration");
  for (const auto& n : names) w.cell(std::string_view(n));
  w.end_row();
  for (const auto& c : chains) {
    if (c.failed) continue;
    for (std::size_t r = 0; r < c.num_draws(); ++r) {
      w.cell(c.chain).cell(r + 1);
      for (double v : c.row(r)) w.cell(v);
      w.end_row();
    }
  }
}

void write_stats(const fs::path& path, const std::vector<ChainOutput>& chains) {
  CsvWriter w(path);
  w.row({"chain", "iteration", "accept_stat", "step_size", "tree_depth", "n_leapfrog", "divergent", "energy"});
  for (const auto& c : chains) {
    if (c.failed) continue;
    for (std::size_t r = 0; r < c.stats.size(); ++r) {
      const auto& s = c.stats[r];
      w.cell(c.chain).cell(r + 1).cell(s.accept_stat).cell(s.step_size).cell(s.tree_depth).cell(s.n_leapfrog);
      w.cell(s.divergent ? 1 : 0).cell(s.energy).end_row();
    }
  }
}

void write_loo(const fs::path& path, const Model& model, const LooResult& loo) {
  const auto idx = model.observation_indices();
  CsvWriter w(path);
  w.row({"return_index", "elpd_loo", "pareto_k"});
  for (std::size_t i = 0; i < idx.size(); ++i)
    w.cell(idx[i]).cell(loo.pointwise[i].elpd).cell(loo.pointwise[i].pareto_k).end_row();
}

ordered_json report_json(const RunReport& report) {
  ordered_json r;
  r["total_draws"] = report.total_draws;
  r["chains_used"] = report.chains_used;
  r["failed_chains"] = report.failed_chains;
  r["divergences"] = report.divergences;
  r["tree_depth_saturations"] = report.tree_depth_saturations;
  r["multimodal"] = report.multimodal;
  r["multimodal_parameters"] = report.multimodal_parameters;
  r["notes"] = report.notes;
  return r;
}

PriceSeries load_data(const RunConfig& config) {
  if (!config.data_path) throw InputError("config has no 'data' file");
  return ingest_prices(*config.data_path);
}

std::unique_ptr<Model> build_model(const RunConfig& config, std::optional<PriceSeries> data) {
  try {
    return make_model(config.model, std::move(data), config.model_options());
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
}

int exit_code(const RunReport& report) {
  return report.failed_chains > 0 || report.multimodal ? kExitDiagnostics : kExitOk;
}

std::vector<double> numeric_cells(const CsvTable& t, std::size_t r, std::size_t from, const fs::path& path) {
  std::vector<double> out;
  for (std::size_t c = from; c < t.header.size(); ++c)
    out.push_back(parse_double(t.rows[r][c], t.header[c] + " in " + path.string() + " row " + std::to_string(t.lines[r])));
  return out;
}

}  // namespace

FitRun load_fit(const fs::path& dir) {
  FitRun run;
  run.metadata = read_json(dir / "metadata.json");
  if (!run.metadata.contains("config") || run.metadata.value("command", "") != "fit")
    throw InputError((dir / "metadata.json").string() + " does not describe a fit");
  run.config = parse_config(run.metadata["config"], dir);
  run.names = run.metadata.at("parameter_names").get<std::vector<std::string>>();

  std::map<int, ChainOutput> chains;
  for (const auto& c : run.metadata.at("chains")) {
    ChainOutput out;
    out.chain = c.at("chain").get<int>();
    out.seed = c.at("seed").get<std::uint64_t>();
    out.dimension = run.names.size();
    out.failed = c.at("failed").get<bool>();
    out.error = c.at("error").get<std::string>();
    chains[out.chain] = std::move(out);
  }

  const fs::path draws_path = dir / "draws.csv";
  const CsvTable draws = read_csv(draws_path);
  if (draws.header.size() != run.names.size() + 2) throw InputError(draws_path.string() + ": unexpected columns");
  for (std::size_t r = 0; r < draws.rows.size(); ++r) {
    const int chain = static_cast<int>(parse_double(draws.rows[r][0], "chain"));
    auto it = chains.find(chain);
    if (it == chains.end()) throw InputError(draws_path.string() + ": unknown chain " + std::to_string(chain));
    const auto values = numeric_cells(draws, r, 2, draws_path);
    it->second.draws.insert(it->second.draws.end(), values.begin(), values.end());
  }

  const fs::path stats_path = dir / "sampler_stats.csv";
  const CsvTable stats = read_csv(stats_path);
  for (std::size_t r = 0; r < stats.rows.size(); ++r) {
    const auto v = numeric_cells(stats, r, 0, stats_path);
    auto it = chains.find(static_cast<int>(v[0]));
    if (it == chains.end()) throw InputError(stats_path.string() + ": unknown chain");
    IterationStats s;
    s.accept_stat = v[2];
    s.step_size = v[3];
    s.tree_depth = static_cast<int>(v[4]);
    s.n_leapfrog = static_cast<int>(v[5]);
    s.divergent = v[6] != 0.0;
    s.energy = v[7];
    it->second.stats.push_back(s);
  }
  for (auto& [index, c] : chains) {
    if (!c.failed && c.stats.size() != c.num_draws())
      throw InputError(dir.string() + ": draws and sampler statistics disagree for chain " + std::to_string(index));
    run.chains.push_back(std::move(c));
  }
  return run;
}

int cmd_fit(const RunConfig& config, std::ostream& out) {
  const PriceSeries data = load_data(config);
  const auto model = build_model(config, data);
  const auto chains = run_chains(*model, config.sampler);
  const auto& names = model->transform().names();
  const RunReport report = summarize(chains, names, config.sampler.max_tree_depth);

  std::optional<LooResult> loo;
  std::string loo_note;
  if (report.total_draws >= 100) {
    loo = psis_loo(loglik_matrix(*model, chains));
  } else {
    loo_note = "fewer than 100 draws, leave-one-out skipped";
  }

  fs::create_directories(config.output_dir);
  write_draws(config.output_dir / "draws.csv", chains, names);
  write_stats(config.output_dir / "sampler_stats.csv", chains);
  write_summary_csv(config.output_dir / "summary.csv", report);
  if (loo) write_loo(config.output_dir / "loo.csv", *model, *loo);

  ordered_json meta = base_metadata(config, "fit");
  meta["data"] = data_json(config, data);
  meta["parameter_names"] = names;
  meta["structural_parameters"] = model->num_structural();
  ordered_json priors = ordered_json::object();
  const auto structural = model->structural_names();
  for (std::size_t i = 0; i < structural.size(); ++i) priors[structural[i]] = model->priors()[i].describe();
  meta["priors"] = priors;
  ordered_json chain_meta = ordered_json::array();
  for (const auto& c : chains) {
    ordered_json cj;
    cj["chain"] = c.chain;
    cj["seed"] = c.seed;
    cj["failed"] = c.failed;
    cj["error"] = c.error;
    cj["step_size"] = c.adaptation.step_size;
    cj["inv_mass"] = c.adaptation.inv_mass;
    cj["initial_unconstrained"] = c.initial_unconstrained;
    chain_meta.push_back(cj);
  }
  meta["chains"] = chain_meta;
  meta["report"] = report_json(report);
  if (loo) {
    meta["loo"] = {{"elpd", loo->elpd},
                   {"se", loo->se},
                   {"observations", loo->pointwise.size()},
                   {"n_high_k", loo->n_high_k},
                   {"n_warn_k", loo->n_warn_k}};
  } else {
    meta["loo"] = nullptr;
  }
  write_json(config.output_dir / "metadata.json", meta);

  std::string text = report_text(*model, report, loo);
  if (!loo_note.empty()) text += "note: " + loo_note + "\n";
  for (const auto& c : chains)
    if (c.failed) text += "chain " + std::to_string(c.chain) + " failed: " + c.error + "\n";
  std::ofstream(config.output_dir / "summary.txt", std::ios::binary) << text;
  out << text << "outputs written to " << config.output_dir.string() << "\n";
  return exit_code(report);
}

int cmd_diagnose(const fs::path& dir, std::ostream& out) {
  const FitRun run = load_fit(dir);
  const int depth = run.config.sampler.max_tree_depth;
  const RunReport report = summarize(run.chains, run.names, depth);
  const PriceSeries data = load_data(run.config);
  const auto model = build_model(run.config, data);
  std::optional<LooResult> loo;
  if (!run.metadata["loo"].is_null()) {
    LooResult l;
    l.elpd = run.metadata["loo"]["elpd"].get<double>();
    l.se = run.metadata["loo"]["se"].get<double>();
    l.n_high_k = run.metadata["loo"]["n_high_k"].get<int>();
    l.n_warn_k = run.metadata["loo"]["n_warn_k"].get<int>();
    loo = l;
  }
  out << report_text(*model, report, loo);
  for (const auto& c : run.chains)
    if (c.failed) out << "chain " << c.chain << " failed: " << c.error << "\n";
  const int code = exit_code(report);
  out << (code == kExitOk ? "diagnostics ok\n" : "diagnostics flagged problems\n");
  return code;
}

Comparison compare_fits(const std::vector<fs::path>& dirs) {
  if (dirs.size() < 2) throw InputError("compare needs at least two fit directories");
  struct Fit {
    std::string model;
    fs::path dir;
    std::string fingerprint;
    std::map<long long, double> elpd;
    std::map<long long, double> pareto_k;
  };
  std::vector<Fit> fits;
  for (const auto& dir : dirs) {
    const auto meta = read_json(dir / "metadata.json");
    if (meta.value("command", "") != "fit") throw InputError(dir.string() + " is not a fit directory");
    if (meta["loo"].is_null()) throw InputError(dir.string() + " has no leave-one-out results");
    Fit f;
    f.model = meta["config"]["model"].get<std::string>();
    f.dir = dir;
    f.fingerprint = meta["data"]["fingerprint"].get<std::string>();
    const fs::path path = dir / "loo.csv";
    const CsvTable t = read_csv(path);
    const std::size_t ic = t.require_column("return_index", path);
    const std::size_t ec = t.require_column("elpd_loo", path);
    const std::size_t kc = t.require_column("pareto_k", path);
    for (const auto& row : t.rows) {
      const auto idx = static_cast<long long>(parse_double(row[ic], "return_index"));
      f.elpd[idx] = parse_double(row[ec], "elpd_loo in " + path.string());
      f.pareto_k[idx] = parse_double(row[kc], "pareto_k in " + path.string());
    }
    fits.push_back(std::move(f));
  }
  for (const auto& f : fits)
    if (f.fingerprint != fits[0].fingerprint)
      throw InputError("observation mismatch: " + f.dir.string() + " was fit to different data than " +
                       fits[0].dir.string());

  std::set<long long> shared;
  for (const auto& [idx, v] : fits[0].elpd) shared.insert(idx);
  for (const auto& f : fits)
    for (auto it = shared.begin(); it != shared.end();)
      it = f.elpd.count(*it) ? std::next(it) : shared.erase(it);
  if (shared.empty()) throw InputError("observation mismatch: the fits share no observations");

  std::vector<std::vector<double>> pointwise(fits.size());
  Comparison cmp;
  cmp.observations = shared.size();
  for (std::size_t m = 0; m < fits.size(); ++m) {
    CompareRow row;
    row.model = fits[m].model;
    row.dir = fits[m].dir;
    for (long long idx : shared) {
      pointwise[m].push_back(fits[m].elpd.at(idx));
      if (fits[m].pareto_k.at(idx) > kParetoKBad) ++row.n_high_k;
    }
    const auto total = loo_difference(pointwise[m], std::vector<double>(shared.size(), 0.0));
    row.elpd = total.elpd_diff;
    row.se = total.se;
    cmp.rows.push_back(row);
  }
  std::vector<std::size_t> order(fits.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (cmp.rows[a].elpd != cmp.rows[b].elpd) return cmp.rows[a].elpd > cmp.rows[b].elpd;
    return cmp.rows[a].model < cmp.rows[b].model;
  });
  std::vector<CompareRow> sorted;
  for (std::size_t i : order) {
    CompareRow row = cmp.rows[i];
    const auto d = loo_difference(pointwise[i], pointwise[order[0]]);
    row.elpd_diff = d.elpd_diff;
    row.se_diff = d.se;
    sorted.push_back(row);
  }
  for (std::size_t a = 0; a < order.size(); ++a)
    for (std::size_t b = a + 1; b < order.size(); ++b)
      cmp.pairs.push_back({cmp.rows[order[a]].model, cmp.rows[order[b]].model,
                           loo_difference(pointwise[order[a]], pointwise[order[b]])});
  cmp.rows = std::move(sorted);
  return cmp;
}

int cmd_compare(const std::vector<fs::path>& dirs, const std::optional<fs::path>& csv, std::ostream& out) {
  const Comparison cmp = compare_fits(dirs);
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-10s %12s %9s %11s %9s %7s  %s\n", "model", "elpd_loo", "se", "elpd_diff",
                "se_diff", "k>0.7", "fit");
  out << "leave-one-out comparison over " << cmp.observations << " shared observations\n" << buf;
  for (const auto& r : cmp.rows) {
    std::snprintf(buf, sizeof(buf), "%-10s %12.2f %9.2f %11.2f %9.2f %7d  %s\n", r.model.c_str(), r.elpd, r.se,
                  r.elpd_diff, r.se_diff, r.n_high_k, r.dir.string().c_str());
    out << buf;
  }
  out << "pairwise differences\n";
  for (const auto& p : cmp.pairs) {
    std::snprintf(buf, sizeof(buf), "%-10s - %-10s %11.2f (se %.2f)\n", p.first.c_str(), p.second.c_str(),
                  p.difference.elpd_diff, p.difference.se);
    out << buf;
  }
  if (csv) {
    CsvWriter w(*csv);
    w.row({"model", "fit", "elpd_loo", "se", "elpd_diff", "se_diff", "n_high_k"});
    for (const auto& r : cmp.rows)
      w.cell(std::string_view(r.model)).cell(std::string_view(r.dir.string())).cell(r.elpd).cell(r.se)
          .cell(r.elpd_diff).cell(r.se_diff).cell(r.n_high_k).end_row();
  }
  return kExitOk;
}

int cmd_forecast(const fs::path& dir, std::size_t horizon, std::optional<std::uint64_t> seed, std::size_t max_draws,
                 std::ostream& out) {
  if (horizon == 0) throw InputError("horizon must be positive");
  const FitRun run = load_fit(dir);
  const PriceSeries data = load_data(run.config);
  if (hex(data.fingerprint()) != run.metadata["data"]["fingerprint"].get<std::string>())
    throw InputError("data file " + run.config.data_path->string() + " changed since the fit");
  const auto model = build_model(run.config, data);
  Rng rng(seed.value_or(run.config.seed));
  const ForecastFan fan = posterior_predictive(*model, run.chains, horizon, rng, max_draws);
  const StateBands bands = smoothed_states(*model, run.chains, max_draws);

  {
    CsvWriter w(dir / "fan.csv");
    w.row({"step", "series", "level", "value"});
    const std::pair<const char*, const std::vector<FanQuantiles>*> series[] = {
        {"return", &fan.returns}, {"log_price", &fan.log_prices}, {"sigma", &fan.sigma}};
    for (std::size_t h = 0; h < horizon; ++h)
      for (const auto& [name, rows] : series)
        for (std::size_t l = 0; l < kFanLevels.size(); ++l)
          w.cell(h + 1).cell(name).cell(kFanLevels[l]).cell((*rows)[h][l]).end_row();
  }
  {
    CsvWriter w(dir / "bands.csv");
    w.row({"t", "date", "series", "level", "value"});
    const std::pair<const char*, const std::vector<Band>*> states[] = {
        {"sigma", &bands.sigma}, {"n_f", &bands.n_f}, {"p_star", &bands.p_star}};
    for (std::size_t t = 0; t < data.size(); ++t) {
      const std::string date = data.dates().empty() ? std::to_string(t + 1) : data.dates()[t];
      for (const auto& [name, rows] : states) {
        if (rows->empty()) continue;
        const Band& b = (*rows)[t];
        w.cell(t + 1).cell(std::string_view(date)).cell(name).cell("mean").cell(b.mean).end_row();
        w.cell(t + 1).cell(std::string_view(date)).cell(name).cell(0.025).cell(b.lower).end_row();
        w.cell(t + 1).cell(std::string_view(date)).cell(name).cell(0.975).cell(b.upper).end_row();
      }
    }
  }
  out << "forecast of " << horizon << " steps from " << fan.draws_used << " draws written to "
      << (dir / "fan.csv").string() << " and " << (dir / "bands.csv").string() << "\n";
  return kExitOk;
}

int cmd_simulate(const RunConfig& config, std::ostream& out) {
  if (!config.simulate) throw InputError("simulate needs a 'simulate' block in the config");
  const auto model = build_model(config, std::nullopt);
  const auto names = model->structural_names();
  std::vector<double> structural;
  for (const auto& n : names) {
    const auto it = config.simulate->parameters.find(n);
    if (it == config.simulate->parameters.end()) throw InputError("simulate: missing parameter '" + n + "'");
    structural.push_back(it->second);
  }
  for (const auto& [n, v] : config.simulate->parameters)
    if (std::find(names.begin(), names.end(), n) == names.end())
      throw InputError("simulate: " + std::string(model->name()) + " has no parameter '" + n + "'");

  SimulatedPath path;
  try {
    Rng rng(config.seed);
    path = model->simulate(structural, config.simulate->T, config.simulate->init, rng);
  } catch (const std::domain_error& e) {
    throw InputError(std::string("simulate: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("simulate: ") + e.what());
  }

  fs::create_directories(config.output_dir);
  write_prices(config.output_dir / "simulated.csv", {}, path.log_prices);
  {
    CsvWriter w(config.output_dir / "simulated_latent.csv");
    w.row({"t", "sigma", "n_f", "p_star"});
    for (std::size_t t = 0; t < path.log_prices.size(); ++t) {
      w.cell(t + 1).cell(path.latent.sigma[t]);
      w.cell(path.latent.n_f.empty() ? NAN : path.latent.n_f[t]);
      w.cell(path.latent.p_star.empty() ? NAN : path.latent.p_star[t]).end_row();
    }
  }
  write_json(config.output_dir / "metadata.json", base_metadata(config, "simulate"));
  out << "simulated " << path.log_prices.size() << " prices written to "
      << (config.output_dir / "simulated.csv").string() << "\n";
  return kExitOk;
}

int cmd_prior_check(const RunConfig& config, std::size_t n_series, std::size_t T, std::ostream& out) {
  if (n_series == 0) throw InputError("prior-check needs at least one series");
  if (T < 3) throw InputError("prior-check needs T >= 3");
  RunConfig effective = config;
  std::vector<double> init;
  if (config.data_path) {
    const PriceSeries data = load_data(config);
    if (!effective.return_sd && data.return_sd() > 0.0) effective.return_sd = data.return_sd();
    init.push_back(data.log_prices().front());
  }
  const auto model = build_model(effective, std::nullopt);
  Rng rng(config.seed);
  const auto series = prior_predictive(*model, n_series, T, rng, init);

  fs::create_directories(config.output_dir);
  const auto names = model->structural_names();
  {
    CsvWriter w(config.output_dir / "prior_draws.csv");
    w.cell("series");
    for (const auto& n : names) w.cell(std::string_view(n));
    w.end_row();
    for (std::size_t s = 0; s < series.size(); ++s) {
      w.cell(s + 1);
      for (double v : series[s].structural) w.cell(v);
      w.end_row();
    }
  }
  {
    CsvWriter w(config.output_dir / "prior_series.csv");
    w.row({"series", "t", "log_price", "sigma", "n_f", "p_star"});
    for (std::size_t s = 0; s < series.size(); ++s) {
      const auto& p = series[s].path;
      for (std::size_t t = 0; t < p.log_prices.size(); ++t) {
        w.cell(s + 1).cell(t + 1).cell(p.log_prices[t]).cell(p.latent.sigma[t]);
        w.cell(p.latent.n_f.empty() ? NAN : p.latent.n_f[t]);
        w.cell(p.latent.p_star.empty() ? NAN : p.latent.p_star[t]).end_row();
      }
    }
  }
  ordered_json meta = base_metadata(config, "prior-check");
  meta["series"] = n_series;
  meta["T"] = T;
  write_json(config.output_dir / "metadata.json", meta);

  out << "prior predictive: " << n_series << " series of " << T << " prices\n";
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%-8s %14s %14s\n", "series", "return sd", "max |return|");
  out << buf;
  for (std::size_t s = 0; s < series.size(); ++s) {
    const auto& p = series[s].path.log_prices;
    double sum = 0.0, ss = 0.0, worst = 0.0;
    for (std::size_t t = 1; t < p.size(); ++t) {
      const double r = p[t] - p[t - 1];
      sum += r;
      ss += r * r;
      worst = std::max(worst, std::abs(r));
    }
    const double n = static_cast<double>(p.size() - 1);
    const double sd = std::sqrt(std::max(0.0, ss / n - (sum / n) * (sum / n)));
    std::snprintf(buf, sizeof(buf), "%-8zu %14.5g %14.5g\n", s + 1, sd, worst);
    out << buf;
  }
  out << "outputs written to " << config.output_dir.string() << "\n";
  return kExitOk;
}

}  // namespace econofit::cli
