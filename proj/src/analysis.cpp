#include "rrsgd/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "rrsgd/rng.hpp"

namespace rrsgd {

namespace {

struct Moments {
  double mean = 0.0;
  double m2 = 0.0;  // sum of squared deviations (Welford)
  long count = 0;

  void add(double x) {
    ++count;
    const double delta = x - mean;
    mean += delta / count;
    m2 += delta * (x - mean);
  }
  double sigma_of_mean() const {
    if (count < 2) return 0.0;
    return std::sqrt(m2 / (count - 1.0) / count);
  }
};

void check_trials(int trials) {
  if (trials < 30) throw std::invalid_argument("Monte Carlo: trials must be >= 30");
}

// Relative slack for the CI comparisons, scaled by the magnitudes involved.
double ci_slack(double lhs, double rhs) {
  return 1e-9 * std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

void finish_report(BoundCheckReport& r) {
  const double slack = ci_slack(r.lhs_mean, r.rhs_mean);
  r.holds_within_ci =
      r.lhs_mean + 3.0 * r.lhs_sigma <= r.rhs_mean - 3.0 * r.rhs_sigma + slack;
  r.confirmed_violation =
      r.lhs_mean - 3.0 * r.lhs_sigma > r.rhs_mean + 3.0 * r.rhs_sigma + slack;
  r.inconclusive = !r.holds_within_ci && !r.confirmed_violation;
}

}  // namespace

McRunStats mc_distance_sq_stats(const FiniteSumProblem& p, const StepSchedule& s,
                                const Eigen::VectorXd& x0, int K, int trials,
                                std::uint64_t seed) {
  check_trials(trials);
  Moments m;
  int exited = 0;
  double max_radius = 0.0;
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t run_seed = Rng::derive(seed, t).next_u64();
    RunResult r;
    try {
      r = run_without_replacement(p, s, x0, K, run_seed);
    } catch (const DivergenceError& e) {
      throw std::runtime_error(std::string("mc_distance_sq: trial ") +
                               std::to_string(t) + " diverged: " + e.what());
    }
    m.add(r.dist_sq.back());
    exited += r.exited_ball ? 1 : 0;
    max_radius = std::max(max_radius, r.max_radius);
  }
  McRunStats out;
  out.estimate = {m.mean, 1.96 * m.sigma_of_mean(), trials, seed};
  out.exited_frac = static_cast<double>(exited) / trials;
  out.max_radius = max_radius;
  return out;
}

McEstimate mc_distance_sq(const FiniteSumProblem& p, const StepSchedule& s,
                          const Eigen::VectorXd& x0, int K, int trials,
                          std::uint64_t seed) {
  return mc_distance_sq_stats(p, s, x0, K, trials, seed).estimate;
}

BoundCheckReport check_per_iteration_bound(const FiniteSumProblem& p,
                                           const Eigen::VectorXd& state, int k,
                                           int i, double eta, int trials,
                                           std::uint64_t seed) {
  check_trials(trials);
  if (!(eta >= 0.0 && eta <= 2.0 / p.L))
    throw std::invalid_argument("check_per_iteration_bound: need 0 <= eta <= 2/L");
  if (i < 0 || i >= p.n)
    throw std::invalid_argument("check_per_iteration_bound: need 0 <= i < n");

  PermutationStream perms(p.n, seed);
  Moments before, after;
  double max_radius = (state - p.x_star).norm();
  for (int t = 0; t < trials; ++t) {
    const std::vector<int> perm = perms.next();
    Eigen::VectorXd x = state;
    for (int j = 0; j < i; ++j) {
      x -= eta * p.component_gradient(perm[j], x);
      max_radius = std::max(max_radius, (x - p.x_star).norm());
    }
    before.add((x - p.x_star).squaredNorm());
    x -= eta * p.component_gradient(perm[i], x);
    max_radius = std::max(max_radius, (x - p.x_star).norm());
    after.add((x - p.x_star).squaredNorm());
  }

  const double G = effective_lipschitz_G(p, max_radius);
  const double contraction = 1.0 - eta * p.mu / 2.0;
  BoundCheckReport r;
  r.G_used = G;
  r.max_radius = max_radius;
  r.locality_breach = max_radius > p.radius;
  r.lhs_mean = after.mean;
  r.lhs_sigma = after.sigma_of_mean();
  r.rhs_mean = contraction * before.mean + 3.0 * eta * eta * G * G +
               4.0 * eta * eta * eta * p.kappa * p.L * G * G;
  r.rhs_sigma = contraction * before.sigma_of_mean();
  finish_report(r);
  return r;
}

namespace {

BoundCheckReport epoch_bound_check(const FiniteSumProblem& p,
                                   const Eigen::VectorXd& y_k, double eta,
                                   int trials, std::uint64_t seed, bool quadratic) {
  check_trials(trials);
  if (!(eta >= 0.0 && eta <= 2.0 / p.L))
    throw std::invalid_argument("epoch bound check: need 0 <= eta <= 2/L");

  PermutationStream perms(p.n, seed);
  Moments next_dist;
  double max_radius = (y_k - p.x_star).norm();
  for (int t = 0; t < trials; ++t) {
    const std::vector<int> perm = perms.next();
    Eigen::VectorXd x = y_k;
    for (int j = 0; j < p.n; ++j) {
      x -= eta * p.component_gradient(perm[j], x);
      max_radius = std::max(max_radius, (x - p.x_star).norm());
    }
    next_dist.add((x - p.x_star).squaredNorm());
  }

  const double G = effective_lipschitz_G(p, max_radius);
  const double n = p.n, L = p.L, mu = p.mu, kappa = p.kappa;
  const double d0 = (y_k - p.x_star).squaredNorm();
  BoundCheckReport r;
  r.G_used = G;
  r.max_radius = max_radius;
  r.locality_breach = max_radius > p.radius;
  r.lhs_mean = next_dist.mean;
  r.lhs_sigma = next_dist.sigma_of_mean();
  if (!quadratic) {
    const double sub = p.suboptimality(y_k);
    r.rhs_mean = (1.0 - 0.75 * n * eta * mu + n * n * eta * eta * L * L) * d0 -
                 2.0 * n * eta * (1.0 - 4.0 * n * eta * kappa * L) * sub +
                 20.0 * n * n * std::pow(eta, 3.0) * kappa * L * G * G +
                 5.0 * std::pow(n, 3.0) * std::pow(eta, 4.0) * L * L * G * G;
  } else {
    r.rhs_mean = (1.0 - 1.5 * n * eta * mu + 5.0 * n * n * eta * eta * L * L +
                  8.0 * std::pow(n, 3.0) * std::pow(eta, 3.0) * kappa * L * L * L) *
                     d0 +
                 10.0 * std::pow(n, 3.0) * std::pow(eta, 4.0) * L * L * G * G +
                 40.0 * std::pow(n, 4.0) * std::pow(eta, 5.0) * kappa * L * L * L *
                     G * G +
                 32.0 * n * std::pow(eta, 3.0) * kappa * L * G * G;
  }
  r.rhs_sigma = 0.0;  // y_k fixed, RHS deterministic
  finish_report(r);
  return r;
}

}  // namespace

BoundCheckReport check_per_epoch_bound(const FiniteSumProblem& p,
                                       const Eigen::VectorXd& y_k, double eta,
                                       int trials, std::uint64_t seed) {
  return epoch_bound_check(p, y_k, eta, trials, seed, /*quadratic=*/false);
}

BoundCheckReport check_quadratic_epoch_bound(const FiniteSumProblem& p,
                                             const Eigen::VectorXd& y_k, double eta,
                                             int trials, std::uint64_t seed) {
  if (p.family != Family::kQuadratic)
    throw std::invalid_argument("check_quadratic_epoch_bound: problem is not quadratic");
  return epoch_bound_check(p, y_k, eta, trials, seed, /*quadratic=*/true);
}

namespace {

RateFit least_squares_loglog(const std::vector<std::pair<double, double>>& pts) {
  const int n = static_cast<int>(pts.size());
  double sx = 0, sy = 0;
  for (const auto& [x, y] : pts) {
    sx += x;
    sy += y;
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  if (sxx <= 0.0) throw std::invalid_argument("fit_rate: degenerate scales");
  RateFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r_squared = syy <= 0.0 ? 1.0 : std::min(1.0, (sxy * sxy) / (sxx * syy));
  f.points = pts;
  return f;
}

}  // namespace

RateFit fit_rate(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3) throw std::invalid_argument("fit_rate: need >= 3 points");
  std::vector<std::pair<double, double>> logs;
  logs.reserve(points.size());
  for (const auto& [scale, value] : points) {
    if (!(scale > 0.0) || !(value > 0.0))
      throw std::invalid_argument("fit_rate: scales and values must be positive");
    logs.emplace_back(std::log(scale), std::log(value));
  }
  std::sort(logs.begin(), logs.end());
  RateFit f = least_squares_loglog(logs);
  // Small-scale head can mix transient regimes; drop it once when the fit is
  // poor and there are points to spare.
  if (f.r_squared < 0.95 && logs.size() >= 4) {
    std::vector<std::pair<double, double>> tail(logs.begin() + 1, logs.end());
    f = least_squares_loglog(tail);
    f.dropped_head = true;
  }
  return f;
}

void validate(const SweepConfig& config) {
  std::ostringstream err;
  if (!(config.mu > 0.0 && std::isfinite(config.mu))) err << "mu must be positive; ";
  if (!(config.L >= config.mu && std::isfinite(config.L)))
    err << "L must be finite and >= mu; ";
  if (config.d < 1) err << "d must be >= 1; ";
  if (config.n_grid.empty()) err << "n_grid is empty; ";
  for (int n : config.n_grid)
    if (n < 1) err << "n_grid entries must be >= 1; ";
  if (config.K_grid.empty()) err << "K_grid is empty; ";
  for (int K : config.K_grid)
    if (K < 1) err << "K_grid entries must be >= 1; ";
  if (config.schedules.empty()) err << "schedules is empty; ";
  if (config.trials < 30) err << "trials must be >= 30; ";
  const std::string msg = err.str();
  if (!msg.empty()) throw std::invalid_argument("invalid sweep config: " + msg);
}

std::vector<SweepRow> sweep(const SweepConfig& config, int threads) {
  validate(config);

  struct Cell {
    int schedule_idx, n, K;
  };
  std::vector<Cell> cells;
  for (std::size_t si = 0; si < config.schedules.size(); ++si)
    for (int n : config.n_grid)
      for (int K : config.K_grid) cells.push_back({static_cast<int>(si), n, K});

  std::vector<SweepRow> rows(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= cells.size()) return;
      const Cell& cell = cells[idx];
      // Problem and x0 depend only on (master_seed, family, n): cells that
      // share n share the instance.
      const std::uint64_t prob_seed =
          Rng::derive(config.master_seed, 0x9000 + cell.n).next_u64();
      const FiniteSumProblem problem =
          config.family == Family::kQuadratic
              ? make_random_quadratic(cell.n, config.d, config.mu, config.L, prob_seed)
              : make_random_logcosh(cell.n, config.d, config.mu, config.L, prob_seed);
      const Eigen::VectorXd x0 = default_x0(problem, prob_seed);
      const std::uint64_t cell_seed =
          Rng::derive(config.master_seed,
                      0x5eed0000ULL + idx)  // stable per cell index
              .next_u64();
      const StepSchedule& sched = config.schedules[cell.schedule_idx];
      const McRunStats stats =
          mc_distance_sq_stats(problem, sched, x0, cell.K, config.trials, cell_seed);
      rows[idx] = SweepRow{family_name(config.family),
                           schedule_variant_name(sched),
                           schedule_alpha_or_eta(sched),
                           cell.n,
                           cell.K,
                           config.trials,
                           stats.estimate.mean,
                           stats.estimate.half_width,
                           stats.exited_frac,
                           cell_seed};
    }
  };

  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return rows;
}

}  // namespace rrsgd
