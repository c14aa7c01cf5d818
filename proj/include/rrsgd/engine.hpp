#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "rrsgd/problems.hpp"
#include "rrsgd/schedules.hpp"

namespace rrsgd {

// Reproducible stream of uniform permutations of {0..n-1}; draw j is derived
// from (seed, j) only, so single epochs can be resampled independently.
class PermutationStream {
 public:
  PermutationStream(int n, std::uint64_t seed);

  std::vector<int> next();
  std::vector<int> draw_at(std::uint64_t index) const;

  int n() const { return n_; }

 private:
  int n_;
  std::uint64_t seed_;
  std::uint64_t draw_index_ = 0;
};

struct DivergenceError : std::runtime_error {
  DivergenceError(int k, int i);
  int epoch;
  int iteration;
};

struct RunResult {
  std::vector<Eigen::VectorXd> y;  // epoch outputs, y[0] = x0, size K+1
  std::vector<double> dist_sq;     // ||y_k - x_star||^2
  long grad_evals = 0;
  bool exited_ball = false;
  std::uint64_t seed = 0;
  double max_radius = 0.0;  // max ||x_{k,i} - x_star|| over all iterates
  std::vector<Eigen::VectorXd> iterates;  // filled only when requested
};

// Default start: uniform on the sphere of radius problem.radius / 2 around
// x_star, keeping the certification ball meaningful.
Eigen::VectorXd default_x0(const FiniteSumProblem& p, std::uint64_t seed);

RunResult run_without_replacement(const FiniteSumProblem& p, const StepSchedule& s,
                                  const Eigen::VectorXd& x0, int K,
                                  std::uint64_t seed, bool record_iterates = false);

// Budget-parity baseline: K "epochs" of n i.i.d. uniform index draws.
RunResult run_with_replacement(const FiniteSumProblem& p, const StepSchedule& s,
                               const Eigen::VectorXd& x0, int K, std::uint64_t seed);

// Simulates epoch k from x_start under the given permutation and returns
// (deviation, bound) where
//   deviation = || sum_i grad f_{perm(i)}(x_{k,i-1}) - n grad F(x_start) ||
//   bound     = L * sum_i ||x_{k,i-1} - x_start||.
// deviation <= bound + 1e-9 is asserted on every call.
std::pair<double, double> epoch_gradient_deviation(const FiniteSumProblem& p,
                                                   const Eigen::VectorXd& x_start,
                                                   const std::vector<int>& perm,
                                                   const StepSchedule& s, int k);

}  // namespace rrsgd
