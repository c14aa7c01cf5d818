#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rrsgd/engine.hpp"
#include "rrsgd/problems.hpp"
#include "rrsgd/schedules.hpp"

namespace rrsgd {

struct McEstimate {
  double mean = 0.0;
  double half_width = 0.0;  // 95% normal-approximation CI
  int trials = 0;
  std::uint64_t seed = 0;
};

// McEstimate plus run diagnostics needed by sweeps and bound evaluation.
struct McRunStats {
  McEstimate estimate;
  double exited_frac = 0.0;
  double max_radius = 0.0;
};

// One-sided inequality check, CI-guarded: a check may come back inconclusive,
// but confirmed_violation means LHS clearly exceeds RHS on a
// precondition-satisfying instance.
struct BoundCheckReport {
  double lhs_mean = 0.0;
  double lhs_sigma = 0.0;  // std error of lhs_mean
  double rhs_mean = 0.0;
  double rhs_sigma = 0.0;
  double G_used = 0.0;
  double max_radius = 0.0;
  bool locality_breach = false;  // some sampled iterate left the ball
  bool holds_within_ci = false;
  bool confirmed_violation = false;
  bool inconclusive = false;
};

McEstimate mc_distance_sq(const FiniteSumProblem& p, const StepSchedule& s,
                          const Eigen::VectorXd& x0, int K, int trials,
                          std::uint64_t seed);
McRunStats mc_distance_sq_stats(const FiniteSumProblem& p, const StepSchedule& s,
                                const Eigen::VectorXd& x0, int K, int trials,
                                std::uint64_t seed);

// Per-iteration progress inequality: starting the epoch at `state` with
// constant step eta, relates E||x_{k,i+1}-x*||^2 to E||x_{k,i}-x*||^2 over the
// epoch's permutation randomness; both sides share permutation draws.
BoundCheckReport check_per_iteration_bound(const FiniteSumProblem& p,
                                           const Eigen::VectorXd& state, int k,
                                           int i, double eta, int trials,
                                           std::uint64_t seed);

// Per-epoch progress inequality at constant step eta from fixed y_k; the
// right-hand side is deterministic given y_k.
BoundCheckReport check_per_epoch_bound(const FiniteSumProblem& p,
                                       const Eigen::VectorXd& y_k, double eta,
                                       int trials, std::uint64_t seed);

// Sharper per-epoch inequality valid when F is quadratic.
BoundCheckReport check_quadratic_epoch_bound(const FiniteSumProblem& p,
                                             const Eigen::VectorXd& y_k, double eta,
                                             int trials, std::uint64_t seed);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::vector<std::pair<double, double>> points;  // (log scale, log value)
  bool dropped_head = false;  // smallest-scale point dropped and refit once
};

// Least-squares line through (log scale, log value); slope is the empirical
// rate exponent.
RateFit fit_rate(const std::vector<std::pair<double, double>>& points);

struct SweepConfig {
  Family family = Family::kQuadratic;
  double mu = 1.0;
  double L = 4.0;
  int d = 4;
  std::vector<int> n_grid;
  std::vector<int> K_grid;
  std::vector<StepSchedule> schedules;
  int trials = 200;
  std::uint64_t master_seed = 0;
  std::string output_path;
};

// Throws std::invalid_argument listing every offending field.
void validate(const SweepConfig& config);

struct SweepRow {
  std::string family;
  std::string schedule;
  double alpha = 0.0;  // alpha or eta of the schedule
  int n = 0;
  int K = 0;
  int trials = 0;
  double mean = 0.0;
  double half_width = 0.0;
  double exited_frac = 0.0;
  std::uint64_t seed = 0;
};

// Grid of mc_distance_sq cells; deterministic for a fixed master seed
// regardless of thread count.
std::vector<SweepRow> sweep(const SweepConfig& config, int threads = 1);

}  // namespace rrsgd
