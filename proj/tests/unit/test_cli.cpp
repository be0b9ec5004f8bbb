#include <cmath>
#include <limits>
#include <sstream>

#include "doctest.h"
#include "econofit/cli/commands.hpp"
#include "econofit/cli/config.hpp"
#include "econofit/cli/io.hpp"
#include "scratch.hpp"

using namespace econofit;
using namespace econofit::cli;
using namespace econofit::testing;

namespace {

std::string price_rows(std::size_t n) {
  std::string s = "date,price\n";
  for (std::size_t i = 0; i < n; ++i) s += "2020-01-" + std::string(i < 9 ? "0" : "") + std::to_string(i + 1) + "," +
                                           std::to_string(100 + i) + "\n";
  return s;
}

std::string error_of(auto&& f) {
  try {
    f();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("three price rows become log prices") {
    ScratchDir dir("ingest");
    const auto p = dir.write("p.csv", "date,price\n2020-01-01,100\n2020-01-02,101\n2020-01-03,100\n");
    const auto t = read_price_table(p);
    REQUIRE(t.log_prices.size() == 3);
    CHECK(t.log_prices[0] == doctest::Approx(4.60517).epsilon(1e-6));
    CHECK(t.log_prices[1] == doctest::Approx(4.61512).epsilon(1e-6));
    CHECK(t.log_prices[2] == doctest::Approx(4.60517).epsilon(1e-6));
    CHECK(t.log_prices[0] == std::log(100.0));
    CHECK(t.dates[1] == "2020-01-02");
  }

  TEST_CASE("log_price column passes through unchanged") {
    ScratchDir dir("ingest");
    const auto p = dir.write("p.csv", "log_price,date\n0.125,1\n-3.5,2\n7,3\n");
    const auto t = read_price_table(p);
    CHECK(t.log_prices == std::vector<double>{0.125, -3.5, 7.0});
  }

  TEST_CASE("shuffled or duplicate dates are rejected with the row") {
    ScratchDir dir("ingest");
    const auto shuffled = dir.write("s.csv", "date,price\n2020-01-02,1\n2020-01-03,1\n2020-01-01,1\n");
    const auto msg = error_of([&] { read_price_table(shuffled); });
    CHECK(msg.find("non-chronological at row 4") != std::string::npos);
    const auto dup = dir.write("d.csv", "date,price\n1,1\n2,1\n2,1\n");
    CHECK(error_of([&] { read_price_table(dup); }).find("duplicate date '2' at row 4") != std::string::npos);
    // Numeric labels compare as numbers: 9 < 10.
    const auto numeric = dir.write("n.csv", "date,price\n9,1\n10,1\n11,1\n");
    CHECK(read_price_table(numeric).log_prices.size() == 3);
  }

  TEST_CASE("ingest errors name the problem") {
    ScratchDir dir("ingest");
    const auto no_price = dir.write("a.csv", "date,close\n1,2\n");
    CHECK(error_of([&] { read_price_table(no_price); }).find("missing column 'price' or 'log_price'") !=
          std::string::npos);
    const auto no_date = dir.write("b.csv", "price\n1\n");
    CHECK(error_of([&] { read_price_table(no_date); }).find("missing column 'date'") != std::string::npos);
    const auto bad = dir.write("c.csv", "date,price\n1,100\n2,abc\n");
    CHECK(error_of([&] { read_price_table(bad); }).find("non-numeric price 'abc' at row 3") != std::string::npos);
    const auto negative = dir.write("e.csv", "date,price\n1,100\n2,-1\n");
    CHECK(error_of([&] { read_price_table(negative); }).find("positive at row 3") != std::string::npos);
    const auto ragged = dir.write("f.csv", "date,price\n1,100,5\n");
    CHECK(error_of([&] { read_price_table(ragged); }).find("row 2 has 3 cells") != std::string::npos);
    const auto short_file = dir.write("g.csv", price_rows(9));
    CHECK(error_of([&] { ingest_prices(short_file); }).find("at least 10") != std::string::npos);
    CHECK(ingest_prices(dir.write("h.csv", price_rows(10))).size() == 10);
    CHECK_THROWS_AS(read_price_table(dir / "missing.csv"), InputError);
  }

  TEST_CASE("byte order mark, blank lines and quoted cells") {
    ScratchDir dir("ingest");
    const auto p = dir.write("p.csv", "\xEF\xBB\xBF" "date , price\r\n\"Jan 1, 2020\",100\r\n\r\n\"Jan 2, 2020\",101\r\n");
    const auto t = read_price_table(p);
    REQUIRE(t.dates.size() == 2);
    CHECK(t.dates[0] == "Jan 1, 2020");
  }

  TEST_CASE("doubles round trip through their text form") {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02e23, 0.0, std::numeric_limits<double>::denorm_min()})
      CHECK(parse_double(format_double(v), "x") == v);
    CHECK(format_double(NAN) == "NA");
    CHECK(std::isnan(parse_double("NA", "x")));
    CHECK_THROWS_AS(parse_double("1.5x", "x"), InputError);
    CHECK_THROWS_AS(parse_double("", "x"), InputError);
  }

  TEST_CASE("priors parse from their printed form") {
    for (const Prior& p : {Prior::normal(0.5, 2.0), Prior::half_normal(0.25), Prior::student_t(5, 0, 1),
                           Prior::half_student_t(5, 30), Prior::beta(10, 0.5), Prior::gamma(3, 0.03),
                           Prior::uniform(0, 1), Prior::flat(), Prior::point_mass(4.0)}) {
      const Prior q = parse_prior(p.describe());
      CHECK(q.describe() == p.describe());
      CHECK(q.lpdf(0.3) == doctest::Approx(p.lpdf(0.3)));
    }
    CHECK_THROWS_AS(parse_prior("cauchy(0, 1)"), InputError);
    CHECK_THROWS_AS(parse_prior("normal(0)"), InputError);
    CHECK_THROWS_AS(parse_prior("normal(0, -1)"), InputError);
    CHECK_THROWS_AS(parse_prior("normal 0 1"), InputError);
  }

  TEST_CASE("config parsing is strict") {
    ScratchDir dir("config");
    dir.write("prices.csv", price_rows(10));
    const auto base = dir.path();
    const auto parse = [&](const std::string& text) { return parse_config(nlohmann::json::parse(text), base); };

    const RunConfig c = parse(R"j({"model": "fw-rw", "data": "prices.csv", "output_dir": "out", "seed": 9,
      "sampler": {"chains": 2, "warmup": 100, "draws": 50, "max_tree_depth": 8, "target_accept": 0.9},
      "priors": {"phi": "half_normal(1)"}, "p_star": 4.6})j");
    CHECK(c.model == ModelKind::kFwRandomWalk);
    CHECK(c.data_path->is_absolute());
    CHECK(c.output_dir == std::filesystem::weakly_canonical(base / "out"));
    CHECK(c.seed == 9);
    CHECK(c.sampler.seed == 9);
    CHECK(c.sampler.chains == 2);
    CHECK(c.sampler.target_accept == 0.9);
    CHECK(c.model_options().prior_overrides.at("phi").describe() == "half_normal(1)");
    CHECK(c.model_options().p_star == 4.6);

    const RunConfig again = parse_config(nlohmann::json::parse(c.to_json().dump()), "/");
    CHECK(again.to_json() == c.to_json());

    CHECK(error_of([&] { parse(R"({"model": "garch", "output_dir": "o", "colour": 1})"); }) ==
          "unknown key 'colour' in config");
    CHECK(error_of([&] { parse(R"({"model": "garch", "output_dir": "o", "sampler": {"steps": 1}})"); }) ==
          "unknown key 'steps' in sampler");
    CHECK(error_of([&] { parse(R"({"model": "arima", "output_dir": "o"})"); }).find("arima") != std::string::npos);
    CHECK(error_of([&] { parse(R"({"output_dir": "o"})"); }).find("'model'") != std::string::npos);
    CHECK(error_of([&] { parse(R"({"model": "garch"})"); }).find("'output_dir'") != std::string::npos);
    CHECK(error_of([&] { parse(R"({"model": "garch", "output_dir": "o", "data": "nope.csv"})"); })
              .find("does not exist") != std::string::npos);
    CHECK(error_of([&] { parse(R"({"model": "garch", "output_dir": "o", "seed": -1})"); }).find("seed") !=
          std::string::npos);
    CHECK(error_of([&] { parse(R"({"model": "garch", "output_dir": "o", "sampler": {"chains": 1.5}})"); })
              .find("integer") != std::string::npos);
    CHECK_THROWS_AS(parse(R"({"model": "garch", "output_dir": "o", "sampler": {"chains": 0}})"), InputError);
    CHECK_THROWS_AS(parse(R"({"model": "garch", "output_dir": "o", "priors": {"mu": 3}})"), InputError);
    CHECK_THROWS_AS(parse(R"({"model": "garch", "output_dir": "o", "simulate": {"T": 10, "x": 1}})"), InputError);
  }

  TEST_CASE("metadata files replay their recorded config") {
    ScratchDir dir("config");
    dir.write("prices.csv", price_rows(10));
    const auto meta = dir.write("metadata.json", R"({"econofit_version": "0", "command": "fit",
      "config": {"model": "vs", "data": ")" + (dir / "prices.csv").string() + R"(", "output_dir": "/tmp/x", "seed": 4}})");
    const RunConfig c = load_config(meta);
    CHECK(c.model == ModelKind::kVs);
    CHECK(c.seed == 4);
  }

  TEST_CASE("simulate validates its parameters") {
    ScratchDir dir("simulate");
    RunConfig c;
    c.model = ModelKind::kGarch;
    c.output_dir = dir / "out";
    std::ostringstream log;
    CHECK_THROWS_AS(cmd_simulate(c, log), InputError);
    c.simulate = SimulateSettings{50, {{"mu", 1e-5}, {"alpha", 0.1}, {"beta", 0.8}}, {}};
    CHECK(error_of([&] { cmd_simulate(c, log); }).find("missing parameter 'sigma1'") != std::string::npos);
    c.simulate->parameters["sigma1"] = 0.01;
    c.simulate->parameters["gamma"] = 1.0;
    CHECK(error_of([&] { cmd_simulate(c, log); }).find("no parameter 'gamma'") != std::string::npos);
    c.simulate->parameters.erase("gamma");
    c.simulate->parameters["alpha"] = 1.5;
    CHECK_THROWS_AS(cmd_simulate(c, log), InputError);
    c.simulate->parameters["alpha"] = 0.1;
    CHECK(cmd_simulate(c, log) == kExitOk);
    CHECK(ingest_prices(dir / "out/simulated.csv").size() == 50);
  }

  TEST_CASE("compare needs two fits") {
    ScratchDir dir("compare");
    CHECK_THROWS_AS(compare_fits({dir.path()}), InputError);
    CHECK_THROWS_AS(compare_fits({dir / "a", dir / "b"}), InputError);
  }
}
