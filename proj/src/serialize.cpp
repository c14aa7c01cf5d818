#include "rrsgd/serialize.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

using nlohmann::json;

namespace rrsgd {

json problem_to_json(const FiniteSumProblem& p) {
  return json{{"kind", family_name(p.family)}, {"n", p.n},   {"d", p.d},
              {"mu", p.mu},                    {"L", p.L},   {"seed", p.seed}};
}

FiniteSumProblem problem_from_json(const json& j) {
  const Family family = family_from_name(j.at("kind").get<std::string>());
  const int n = j.at("n").get<int>();
  const int d = j.at("d").get<int>();
  const double mu = j.at("mu").get<double>();
  const double L = j.at("L").get<double>();
  const std::uint64_t seed = j.at("seed").get<std::uint64_t>();
  return family == Family::kQuadratic ? make_random_quadratic(n, d, mu, L, seed)
                                      : make_random_logcosh(n, d, mu, L, seed);
}

json schedule_to_json(const StepSchedule& s) {
  json j{{"variant", schedule_variant_name(s)}};
  if (std::holds_alternative<ConstantStep>(s))
    j["eta"] = std::get<ConstantStep>(s).eta;
  else
    j["alpha"] = schedule_alpha_or_eta(s);
  return j;
}

StepSchedule schedule_from_json(const json& j) {
  const std::string variant = j.at("variant").get<std::string>();
  if (variant == "constant") return constant_step(j.at("eta").get<double>());
  const double alpha = j.at("alpha").get<double>();
  if (variant == "epoch_log_constant") return epoch_log_constant_step(alpha);
  if (variant == "per_iteration") return per_iteration_step(alpha);
  if (variant == "epoch_only_decay") return epoch_only_decay_step(alpha);
  if (variant == "ahn_sra") return ahn_sra_step(alpha);
  throw std::invalid_argument("unknown schedule variant: " + variant);
}

json run_result_to_json(const RunResult& r) {
  json ys = json::array();
  for (const auto& y : r.y) {
    json v = json::array();
    for (int i = 0; i < y.size(); ++i) v.push_back(y[i]);
    ys.push_back(std::move(v));
  }
  return json{{"y", std::move(ys)},
              {"dist_sq", r.dist_sq},
              {"grad_evals", r.grad_evals},
              {"exited_ball", r.exited_ball},
              {"max_radius", r.max_radius},
              {"seed", r.seed}};
}

json sweep_config_to_json(const SweepConfig& c) {
  json schedules = json::array();
  for (const auto& s : c.schedules) schedules.push_back(schedule_to_json(s));
  return json{{"family", family_name(c.family)},
              {"mu", c.mu},
              {"L", c.L},
              {"d", c.d},
              {"n_grid", c.n_grid},
              {"K_grid", c.K_grid},
              {"schedules", std::move(schedules)},
              {"trials", c.trials},
              {"master_seed", c.master_seed},
              {"output_path", c.output_path}};
}

SweepConfig sweep_config_from_json(const json& j) {
  SweepConfig c;
  c.family = family_from_name(j.at("family").get<std::string>());
  c.mu = j.at("mu").get<double>();
  c.L = j.at("L").get<double>();
  c.d = j.at("d").get<int>();
  c.n_grid = j.at("n_grid").get<std::vector<int>>();
  c.K_grid = j.at("K_grid").get<std::vector<int>>();
  for (const auto& s : j.at("schedules")) c.schedules.push_back(schedule_from_json(s));
  c.trials = j.at("trials").get<int>();
  c.master_seed = j.at("master_seed").get<std::uint64_t>();
  c.output_path = j.value("output_path", std::string{});
  validate(c);
  return c;
}

json rate_fit_to_json(const RateFit& f) {
  json pts = json::array();
  for (const auto& [x, y] : f.points) pts.push_back(json::array({x, y}));
  return json{{"slope", f.slope},
              {"intercept", f.intercept},
              {"r_squared", f.r_squared},
              {"dropped_head", f.dropped_head},
              {"log_points", std::move(pts)}};
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << contents;
}

}  // namespace rrsgd
