#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace rrsgd {

// f_i(x) = 1/2 x'Hx - b'x
struct QuadraticComponent {
  Eigen::MatrixXd hessian;
  Eigen::VectorXd linear;
};

// f_i(x) = quad_weight/2 ||x||^2 + scale * log cosh(direction'x)
// grad f_i(x) = quad_weight * x + scale * tanh(direction'x) * direction
struct LogCoshComponent {
  double quad_weight;
  Eigen::VectorXd direction;
  double scale;
};

enum class Family { kQuadratic, kLogCosh };

std::string family_name(Family f);
Family family_from_name(const std::string& name);

// Finite-sum objective F(x) = (1/n) sum_i f_i(x) with certified constants:
// F is mu-strongly convex and every f_i is convex and L-smooth. The gradient
// bound G holds on the ball B(x_star, radius); a global G-Lipschitz assumption
// is incompatible with strong convexity, so G is certified locally.
class FiniteSumProblem {
 public:
  Family family;
  int n = 0;
  int d = 0;
  double mu = 0.0;
  double L = 0.0;
  double kappa = 0.0;
  Eigen::VectorXd x_star;
  double radius = 0.0;
  double G = 0.0;
  std::uint64_t seed = 0;

  std::vector<QuadraticComponent> quadratics;
  std::vector<LogCoshComponent> logcoshes;

  double component_value(int i, const Eigen::VectorXd& x) const;
  Eigen::VectorXd component_gradient(int i, const Eigen::VectorXd& x) const;
  Eigen::MatrixXd component_hessian(int i, const Eigen::VectorXd& x) const;

  double cost(const Eigen::VectorXd& x) const;
  Eigen::VectorXd full_gradient(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd full_hessian(const Eigen::VectorXd& x) const;

  // F(x) - F(x_star); >= -1e-12 by certification of x_star.
  double suboptimality(const Eigen::VectorXd& x) const;

  // Recertify G on the ball B(x_star, R).
  void set_radius(double R);
};

FiniteSumProblem make_random_quadratic(int n, int d, double mu, double L,
                                       std::uint64_t seed);
FiniteSumProblem make_random_logcosh(int n, int d, double mu, double L,
                                     std::uint64_t seed);

// Quadratic: direct solve of the mean linear system. LogCosh: damped Newton
// until ||grad F|| <= tol; throws after 10^4 iterations.
Eigen::VectorXd solve_optimum(const FiniteSumProblem& p, double tol);

// Certified upper bound on max_i sup_{x in B(x_star,R)} ||grad f_i(x)||.
double effective_lipschitz_G(const FiniteSumProblem& p, double R);

}  // namespace rrsgd
