#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "rrsgd/analysis.hpp"
#include "rrsgd/engine.hpp"
#include "rrsgd/report.hpp"
#include "rrsgd/serialize.hpp"
#include "rrsgd/verify.hpp"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBoundViolated = 2;
constexpr int kExitConfigError = 3;
constexpr int kExitDiverged = 4;

json load_json(const std::string& path) {
  try {
    return json::parse(rrsgd::read_text_file(path));
  } catch (const json::parse_error& e) {
    // json::parse_error carries the byte offset; surface it with the path.
    throw std::invalid_argument("malformed JSON in " + path + ": " + e.what());
  }
}

int cmd_generate(const std::string& config_path, const std::string& out_dir) {
  const rrsgd::SweepConfig config =
      rrsgd::sweep_config_from_json(load_json(config_path));
  for (int n : config.n_grid) {
    const std::uint64_t prob_seed =
        rrsgd::Rng::derive(config.master_seed, 0x9000 + n).next_u64();
    const auto problem =
        config.family == rrsgd::Family::kQuadratic
            ? rrsgd::make_random_quadratic(n, config.d, config.mu, config.L, prob_seed)
            : rrsgd::make_random_logcosh(n, config.d, config.mu, config.L, prob_seed);
    const std::string path = out_dir + "/problem_" +
                             rrsgd::family_name(config.family) + "_n" +
                             std::to_string(n) + ".json";
    rrsgd::write_text_file(path, rrsgd::problem_to_json(problem).dump(2) + "\n");
    std::cout << path << "\n";
  }
  return kExitOk;
}

int cmd_run(const std::string& problem_path, const std::string& schedule_path,
            int K, std::uint64_t seed, const std::string& out_path) {
  const auto problem = rrsgd::problem_from_json(load_json(problem_path));
  const auto schedule = rrsgd::schedule_from_json(load_json(schedule_path));
  const auto x0 = rrsgd::default_x0(problem, seed);
  const auto result = rrsgd::run_without_replacement(problem, schedule, x0, K, seed);
  const std::string text = rrsgd::run_result_to_json(result).dump(2) + "\n";
  if (out_path.empty())
    std::cout << text;
  else
    rrsgd::write_text_file(out_path, text);
  return kExitOk;
}

int cmd_sweep(const std::string& config_path, std::string out_path, int threads) {
  const rrsgd::SweepConfig config =
      rrsgd::sweep_config_from_json(load_json(config_path));
  if (out_path.empty()) out_path = config.output_path;
  const auto rows = rrsgd::sweep(config, threads);
  const std::string csv = rrsgd::sweep_rows_to_csv(rows, config.master_seed);
  if (out_path.empty())
    std::cout << csv;
  else
    rrsgd::write_text_file(out_path, csv);
  return kExitOk;
}

int cmd_verify_recurrences(int draws, std::uint64_t seed, const std::string& out_path) {
  const auto rows = rrsgd::verify_recurrences(draws, seed);
  const std::string csv = rrsgd::recurrence_rows_to_csv(rows, seed);
  if (out_path.empty())
    std::cout << csv;
  else
    rrsgd::write_text_file(out_path, csv);
  long violations = 0;
  for (const auto& r : rows)
    if (r.slack < -1e-12) ++violations;
  std::cerr << "verify-recurrences: " << rows.size() << " rows, " << violations
            << " violations\n";
  return violations == 0 ? kExitOk : kExitBoundViolated;
}

int cmd_verify_progress_bounds(const std::string& config_path, std::uint64_t seed,
                               const std::string& out_path) {
  const rrsgd::SweepConfig config =
      rrsgd::sweep_config_from_json(load_json(config_path));
  const auto rows = rrsgd::verify_progress_bounds(config, seed);
  const std::string csv = rrsgd::progress_rows_to_csv(rows, seed);
  if (out_path.empty())
    std::cout << csv;
  else
    rrsgd::write_text_file(out_path, csv);
  long violations = 0, inconclusive = 0;
  for (const auto& r : rows) {
    if (r.confirmed_violation) ++violations;
    if (r.inconclusive) ++inconclusive;
  }
  std::cerr << "verify-progress-bounds: " << rows.size() << " checks, " << violations
            << " confirmed violations, " << inconclusive << " inconclusive\n";
  return violations == 0 ? kExitOk : kExitBoundViolated;
}

int cmd_fit(const std::string& csv_path, const std::vector<std::string>& group_by,
            const std::string& scale_column, const std::string& value_column,
            const std::string& out_path) {
  const auto table = rrsgd::parse_csv(rrsgd::read_text_file(csv_path));
  const auto fits = rrsgd::fit_csv(table, group_by, scale_column, value_column);
  json out = json::array();
  for (const auto& g : fits) {
    json entry{{"group", g.group}};
    entry["fit"] = rrsgd::rate_fit_to_json(g.fit);
    out.push_back(std::move(entry));
  }
  const std::string text = out.dump(2) + "\n";
  if (out_path.empty())
    std::cout << text;
  else
    rrsgd::write_text_file(out_path, text);
  return kExitOk;
}

int cmd_report(const std::string& csv_path, const std::string& out_path) {
  const auto table = rrsgd::parse_csv(rrsgd::read_text_file(csv_path));
  const int sched_col = table.column("schedule");
  const int n_col = table.column("n");
  const int k_col = table.column("K");
  const int mean_col = table.column("mean");
  std::vector<rrsgd::SvgSeries> series;
  for (const auto& row : table.rows) {
    const std::string label = row[sched_col] + " n=" + row[n_col];
    auto it = std::find_if(series.begin(), series.end(),
                           [&](const auto& s) { return s.label == label; });
    if (it == series.end()) {
      series.push_back({label, {}});
      it = series.end() - 1;
    }
    it->points.emplace_back(std::stod(row[k_col]), std::stod(row[mean_col]));
  }
  const std::string svg = rrsgd::svg_loglog_chart(series, "epochs K", "E||y_K - x*||^2");
  if (out_path.empty())
    std::cout << svg;
  else
    rrsgd::write_text_file(out_path, svg);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Without-replacement SGD experiment harness"};
  app.require_subcommand(1);

  std::string config_path, out_path, problem_path, schedule_path, csv_path;
  std::string scale_column = "K", value_column = "mean";
  std::vector<std::string> group_by{"schedule", "n"};
  int K = 1, draws = 1000, threads = 1;
  std::uint64_t seed = 0;

  auto* generate = app.add_subcommand("generate", "Write problem JSON files from a config");
  generate->add_option("--config", config_path)->required();
  generate->add_option("--out", out_path, "output directory")->required();

  auto* run = app.add_subcommand("run", "Single without-replacement run");
  run->add_option("--problem", problem_path)->required();
  run->add_option("--schedule", schedule_path)->required();
  run->add_option("--K", K)->required();
  run->add_option("--seed", seed);
  run->add_option("--out", out_path);

  auto* sweep = app.add_subcommand("sweep", "Monte Carlo grid sweep to CSV");
  sweep->add_option("--config", config_path)->required();
  sweep->add_option("--out", out_path);
  sweep->add_option("--threads", threads);

  auto* verify_rec = app.add_subcommand("verify-recurrences",
                                        "Recurrence bound soundness suite");
  verify_rec->add_option("--draws", draws);
  verify_rec->add_option("--seed", seed);
  verify_rec->add_option("--out", out_path);

  auto* verify_prog = app.add_subcommand("verify-progress-bounds",
                                         "Monte Carlo progress-bound checks");
  verify_prog->add_option("--config", config_path)->required();
  verify_prog->add_option("--seed", seed);
  verify_prog->add_option("--out", out_path);

  auto* fit = app.add_subcommand("fit", "Log-log rate fit over CSV groups");
  fit->add_option("--csv", csv_path)->required();
  fit->add_option("--group-by", group_by, "grouping columns");
  fit->add_option("--scale-column", scale_column);
  fit->add_option("--value-column", value_column);
  fit->add_option("--out", out_path);

  auto* report = app.add_subcommand("report", "SVG log-log chart from a sweep CSV");
  report->add_option("--csv", csv_path)->required();
  report->add_option("--out", out_path);

  CLI11_PARSE(app, argc, argv);

  try {
    if (generate->parsed()) return cmd_generate(config_path, out_path);
    if (run->parsed()) return cmd_run(problem_path, schedule_path, K, seed, out_path);
    if (sweep->parsed()) return cmd_sweep(config_path, out_path, threads);
    if (verify_rec->parsed()) return cmd_verify_recurrences(draws, seed, out_path);
    if (verify_prog->parsed())
      return cmd_verify_progress_bounds(config_path, seed, out_path);
    if (fit->parsed())
      return cmd_fit(csv_path, group_by, scale_column, value_column, out_path);
    if (report->parsed()) return cmd_report(csv_path, out_path);
  } catch (const rrsgd::DivergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDiverged;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const json::exception& e) {
    std::cerr << "error: bad config: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::runtime_error& e) {
    const std::string msg = e.what();
    std::cerr << "error: " << msg << "\n";
    return msg.find("diverged") != std::string::npos ? kExitDiverged : kExitConfigError;
  }
  return kExitOk;
}
