#include "rrsgd/engine.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "rrsgd/rng.hpp"

namespace rrsgd {

namespace {

constexpr double kDivergenceRadius = 1e12;

ProblemConstants consts_for(const FiniteSumProblem& p, int K) {
  return ProblemConstants{p.mu, p.L, p.kappa, p.n, K};
}

void assert_step_safety(const FiniteSumProblem& p, const StepSchedule& s, int K) {
  const double m = max_step(s, consts_for(p, K), K);
  if (m > 2.0 / p.L)
    throw std::invalid_argument("schedule violates the step safety bound 2/L: max step " +
                                std::to_string(m));
}

void check_iterate(const Eigen::VectorXd& x, int k, int i) {
  if (!x.allFinite() || x.norm() > kDivergenceRadius) throw DivergenceError(k, i);
}

}  // namespace

PermutationStream::PermutationStream(int n, std::uint64_t seed)
    : n_(n), seed_(seed) {
  if (n < 1) throw std::invalid_argument("PermutationStream: n must be >= 1");
}

std::vector<int> PermutationStream::draw_at(std::uint64_t index) const {
  Rng rng = Rng::derive(seed_, index);
  std::vector<int> perm(n_);
  std::iota(perm.begin(), perm.end(), 0);
  // Fisher-Yates
  for (int i = n_ - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(i) + 1));
    std::swap(perm[i], perm[j]);
  }
  return perm;
}

std::vector<int> PermutationStream::next() { return draw_at(draw_index_++); }

DivergenceError::DivergenceError(int k, int i)
    : std::runtime_error("diverged at epoch " + std::to_string(k) + ", iteration " +
                         std::to_string(i)),
      epoch(k),
      iteration(i) {}

Eigen::VectorXd default_x0(const FiniteSumProblem& p, std::uint64_t seed) {
  Rng rng = Rng::derive(seed, 0xd00d);
  Eigen::VectorXd v(p.d);
  do {
    for (int i = 0; i < p.d; ++i) v[i] = rng.normal();
  } while (v.norm() < 1e-12);
  return p.x_star + (p.radius / 2.0) * v / v.norm();
}

RunResult run_without_replacement(const FiniteSumProblem& p, const StepSchedule& s,
                                  const Eigen::VectorXd& x0, int K,
                                  std::uint64_t seed, bool record_iterates) {
  if (K < 1) throw std::invalid_argument("run_without_replacement: K must be >= 1");
  if (!x0.allFinite()) throw std::invalid_argument("run_without_replacement: non-finite x0");
  assert_step_safety(p, s, K);

  const ProblemConstants consts = consts_for(p, K);
  PermutationStream perms(p.n, seed);

  RunResult r;
  r.seed = seed;
  r.y.reserve(K + 1);
  r.dist_sq.reserve(K + 1);
  Eigen::VectorXd x = x0;
  r.y.push_back(x);
  r.dist_sq.push_back((x - p.x_star).squaredNorm());
  r.max_radius = (x - p.x_star).norm();
  if (record_iterates) r.iterates.push_back(x);

  for (int k = 1; k <= K; ++k) {
    const std::vector<int> perm = perms.next();
    for (int i = 1; i <= p.n; ++i) {
      const double eta = step_size(s, consts, k, i);
      x -= eta * p.component_gradient(perm[i - 1], x);
      check_iterate(x, k, i);
      ++r.grad_evals;
      const double rad = (x - p.x_star).norm();
      r.max_radius = std::max(r.max_radius, rad);
      if (rad > p.radius) r.exited_ball = true;
      if (record_iterates) r.iterates.push_back(x);
    }
    r.y.push_back(x);
    r.dist_sq.push_back((x - p.x_star).squaredNorm());
  }
  return r;
}

RunResult run_with_replacement(const FiniteSumProblem& p, const StepSchedule& s,
                               const Eigen::VectorXd& x0, int K, std::uint64_t seed) {
  if (K < 1) throw std::invalid_argument("run_with_replacement: K must be >= 1");
  if (!x0.allFinite()) throw std::invalid_argument("run_with_replacement: non-finite x0");
  assert_step_safety(p, s, K);

  const ProblemConstants consts = consts_for(p, K);

  RunResult r;
  r.seed = seed;
  Eigen::VectorXd x = x0;
  r.y.push_back(x);
  r.dist_sq.push_back((x - p.x_star).squaredNorm());
  r.max_radius = (x - p.x_star).norm();

  for (int k = 1; k <= K; ++k) {
    Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(k));
    for (int i = 1; i <= p.n; ++i) {
      const double eta = step_size(s, consts, k, i);
      const int idx = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(p.n)));
      x -= eta * p.component_gradient(idx, x);
      check_iterate(x, k, i);
      ++r.grad_evals;
      const double rad = (x - p.x_star).norm();
      r.max_radius = std::max(r.max_radius, rad);
      if (rad > p.radius) r.exited_ball = true;
    }
    r.y.push_back(x);
    r.dist_sq.push_back((x - p.x_star).squaredNorm());
  }
  return r;
}

std::pair<double, double> epoch_gradient_deviation(const FiniteSumProblem& p,
                                                   const Eigen::VectorXd& x_start,
                                                   const std::vector<int>& perm,
                                                   const StepSchedule& s, int k) {
  if (static_cast<int>(perm.size()) != p.n)
    throw std::invalid_argument("epoch_gradient_deviation: permutation size != n");
  std::vector<bool> seen(p.n, false);
  for (int idx : perm) {
    if (idx < 0 || idx >= p.n || seen[idx])
      throw std::invalid_argument("epoch_gradient_deviation: not a permutation of {0..n-1}");
    seen[idx] = true;
  }

  const ProblemConstants consts = consts_for(p, k);
  Eigen::VectorXd x = x_start;
  Eigen::VectorXd grad_sum = Eigen::VectorXd::Zero(p.d);
  double bound = 0.0;
  for (int i = 1; i <= p.n; ++i) {
    bound += p.L * (x - x_start).norm();
    const Eigen::VectorXd g = p.component_gradient(perm[i - 1], x);
    grad_sum += g;
    x -= step_size(s, consts, k, i) * g;
  }
  const double deviation = (grad_sum - p.n * p.full_gradient(x_start)).norm();
  if (deviation > bound + 1e-9)
    throw std::logic_error("epoch_gradient_deviation: smoothness bound violated");
  return {deviation, bound};
}

}  // namespace rrsgd
