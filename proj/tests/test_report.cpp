#include <doctest.h>

#include <cmath>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>
#include <string>

#include "rrsgd/report.hpp"
#include "rrsgd/serialize.hpp"

using namespace rrsgd;
using nlohmann::json;

TEST_CASE("CSV emitters embed the version/seed preamble") {
  std::vector<SweepRow> rows{{"quadratic", "ahn_sra", 3.0, 8, 16, 200, 1e-3,
                              1e-5, 0.0, 42}};
  const std::string csv = sweep_rows_to_csv(rows, 777);
  CHECK(csv.rfind("# rrsgd 0.1.0 seed=777\n", 0) == 0);
  CHECK(csv.find("family,schedule,alpha,n,K,trials,mean,half_width,exited_frac,"
                 "seed\n") != std::string::npos);
  CHECK(csv.find("quadratic,ahn_sra,3,8,16,200,0.001") != std::string::npos);
}

TEST_CASE("parse_csv round trip and error reporting") {
  SUBCASE("round trip through the sweep emitter") {
    std::vector<SweepRow> rows{
        {"quadratic", "ahn_sra", 3.0, 8, 16, 200, 1.25e-3, 2e-5, 0.0, 42},
        {"quadratic", "ahn_sra", 3.0, 8, 32, 200, 3.5e-4, 1e-5, 0.0, 43}};
    const auto table = parse_csv(sweep_rows_to_csv(rows, 1));
    CHECK(table.header.size() == 10);
    REQUIRE(table.rows.size() == 2);
    CHECK(table.rows[0][table.column("K")] == "16");
    CHECK(std::stod(table.rows[1][table.column("mean")]) ==
          doctest::Approx(3.5e-4).epsilon(1e-15));
    CHECK_THROWS_AS(table.column("missing"), std::runtime_error);
  }
  SUBCASE("line-precise field-count errors") {
    try {
      parse_csv("# comment\na,b,c\n1,2,3\n4,5\n");
      FAIL("expected runtime_error");
    } catch (const std::runtime_error& e) {
      const std::string msg = e.what();
      CHECK(msg.find("line 4") != std::string::npos);
      CHECK(msg.find("expected 3") != std::string::npos);
    }
  }
  SUBCASE("empty input rejected") {
    CHECK_THROWS_AS(parse_csv(""), std::runtime_error);
    CHECK_THROWS_AS(parse_csv("# only comments\n"), std::runtime_error);
  }
  SUBCASE("CRLF and trailing-comma handling") {
    const auto t = parse_csv("a,b\r\n1,\r\n");
    CHECK(t.rows[0][1] == "");
  }
}

TEST_CASE("fit_csv groups rows and recovers exponents") {
  std::ostringstream csv;
  csv.precision(17);
  csv << "schedule,n,K,mean\n";
  for (int K : {8, 16, 32, 64}) {
    csv << "ahn_sra,8," << K << ',' << 1.0 / (static_cast<double>(K) * K) << '\n';
    csv << "per_iteration,8," << K << ',' << 1.0 / K << '\n';
  }
  const auto table = parse_csv(csv.str());
  const auto fits = fit_csv(table, {"schedule", "n"}, "K", "mean");
  REQUIRE(fits.size() == 2);
  for (const auto& g : fits) {
    if (g.group.at("schedule") == "ahn_sra")
      CHECK(g.fit.slope == doctest::Approx(-2.0).epsilon(1e-9));
    else
      CHECK(g.fit.slope == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(g.group.at("n") == "8");
  }
  CHECK_THROWS_AS(fit_csv(table, {"schedule"}, "K", "absent"), std::runtime_error);
}

TEST_CASE("svg_loglog_chart structure") {
  SvgSeries s{"ahn_sra n=8", {{8.0, 1e-2}, {16.0, 2.5e-3}, {32.0, 6e-4}}};
  const std::string svg = svg_loglog_chart({s}, "epochs K", "dist");
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg.find("ahn_sra n=8") != std::string::npos);
  CHECK(svg.find("epochs K") != std::string::npos);
  CHECK(svg.find("<circle") != std::string::npos);
  // rejects non-positive coordinates and empty input
  CHECK_THROWS_AS(svg_loglog_chart({{"bad", {{1.0, 0.0}}}}, "x", "y"),
                  std::invalid_argument);
  CHECK_THROWS_AS(svg_loglog_chart({}, "x", "y"), std::invalid_argument);
}

TEST_CASE("problem JSON round trip regenerates identical instances") {
  const auto p = make_random_quadratic(5, 3, 1.0, 6.0, 12345);
  const auto q = problem_from_json(problem_to_json(p));
  CHECK(q.n == p.n);
  CHECK(q.d == p.d);
  CHECK(q.x_star == p.x_star);
  for (int i = 0; i < p.n; ++i)
    CHECK(q.quadratics[i].hessian == p.quadratics[i].hessian);
  CHECK_THROWS(problem_from_json(json{{"kind", "unknown"}}));
}

TEST_CASE("schedule JSON round trip") {
  for (const auto& s : {constant_step(0.05), epoch_log_constant_step(4.0),
                        per_iteration_step(2.0), epoch_only_decay_step(3.0),
                        ahn_sra_step(3.0)}) {
    const auto back = schedule_from_json(schedule_to_json(s));
    CHECK(schedule_variant_name(back) == schedule_variant_name(s));
    CHECK(schedule_alpha_or_eta(back) == schedule_alpha_or_eta(s));
  }
  CHECK_THROWS_AS(schedule_from_json(json{{"variant", "nope"}, {"alpha", 3.0}}),
                  std::invalid_argument);
}

TEST_CASE("sweep config JSON round trip with validation") {
  SweepConfig c;
  c.family = Family::kLogCosh;
  c.mu = 1.0;
  c.L = 4.0;
  c.d = 3;
  c.n_grid = {8, 16};
  c.K_grid = {4, 8};
  c.schedules = {ahn_sra_step(3.0), constant_step(0.01)};
  c.trials = 50;
  c.master_seed = 7;
  const auto back = sweep_config_from_json(sweep_config_to_json(c));
  CHECK(back.n_grid == c.n_grid);
  CHECK(back.K_grid == c.K_grid);
  CHECK(back.schedules.size() == 2);
  CHECK(back.master_seed == 7);
  // invalid configs are rejected on load
  auto bad = sweep_config_to_json(c);
  bad["trials"] = 5;
  CHECK_THROWS_AS(sweep_config_from_json(bad), std::invalid_argument);
}

TEST_CASE("rate_fit_to_json carries the fit fields") {
  const auto f = fit_rate({{8.0, 1.0 / 64.0}, {16.0, 1.0 / 256.0}, {32.0, 1.0 / 1024.0}});
  const auto j = rate_fit_to_json(f);
  CHECK(j.at("slope").get<double>() == doctest::Approx(-2.0).epsilon(1e-9));
  CHECK(j.at("log_points").size() == 3);
  CHECK_FALSE(j.at("dropped_head").get<bool>());
}
