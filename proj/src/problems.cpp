#include "rrsgd/problems.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "rrsgd/rng.hpp"

namespace rrsgd {

namespace {

// log cosh(t) without overflow for large |t|.
double log_cosh(double t) {
  const double a = std::abs(t);
  return a + std::log1p(std::exp(-2.0 * a)) - M_LN2;
}

Eigen::VectorXd draw_normal_vector(Rng& rng, int d) {
  Eigen::VectorXd v(d);
  for (int i = 0; i < d; ++i) v[i] = rng.normal();
  return v;
}

Eigen::MatrixXd draw_symmetric(Rng& rng, int d, double scale) {
  Eigen::MatrixXd m(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) m(r, c) = rng.normal();
  return scale * 0.5 * (m + m.transpose());
}

void check_common_args(int n, int d, double mu, double L) {
  if (n < 1) throw std::invalid_argument("problem generator: n must be >= 1");
  if (d < 1) throw std::invalid_argument("problem generator: d must be >= 1");
  if (!std::isfinite(mu) || !std::isfinite(L) || mu <= 0.0)
    throw std::invalid_argument("problem generator: need finite L >= mu > 0");
}

}  // namespace

std::string family_name(Family f) {
  return f == Family::kQuadratic ? "quadratic" : "logcosh";
}

Family family_from_name(const std::string& name) {
  if (name == "quadratic") return Family::kQuadratic;
  if (name == "logcosh") return Family::kLogCosh;
  throw std::invalid_argument("unknown problem family: " + name);
}

double FiniteSumProblem::component_value(int i, const Eigen::VectorXd& x) const {
  if (i < 0 || i >= n) throw std::out_of_range("component index out of range");
  if (family == Family::kQuadratic) {
    const auto& c = quadratics[i];
    return 0.5 * x.dot(c.hessian * x) - c.linear.dot(x);
  }
  const auto& c = logcoshes[i];
  return 0.5 * c.quad_weight * x.squaredNorm() +
         c.scale * log_cosh(c.direction.dot(x));
}

Eigen::VectorXd FiniteSumProblem::component_gradient(int i,
                                                     const Eigen::VectorXd& x) const {
  if (i < 0 || i >= n) throw std::out_of_range("component index out of range");
  if (!x.allFinite()) throw std::invalid_argument("component_gradient: non-finite x");
  if (family == Family::kQuadratic) {
    const auto& c = quadratics[i];
    return c.hessian * x - c.linear;
  }
  const auto& c = logcoshes[i];
  return c.quad_weight * x + c.scale * std::tanh(c.direction.dot(x)) * c.direction;
}

Eigen::MatrixXd FiniteSumProblem::component_hessian(int i,
                                                    const Eigen::VectorXd& x) const {
  if (i < 0 || i >= n) throw std::out_of_range("component index out of range");
  if (family == Family::kQuadratic) return quadratics[i].hessian;
  const auto& c = logcoshes[i];
  const double t = std::tanh(c.direction.dot(x));
  const double sech2 = 1.0 - t * t;
  Eigen::MatrixXd h = c.scale * sech2 * (c.direction * c.direction.transpose());
  h.diagonal().array() += c.quad_weight;
  return h;
}

double FiniteSumProblem::cost(const Eigen::VectorXd& x) const {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += component_value(i, x);
  return s / n;
}

Eigen::VectorXd FiniteSumProblem::full_gradient(const Eigen::VectorXd& x) const {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(d);
  for (int i = 0; i < n; ++i) g += component_gradient(i, x);
  return g / n;
}

Eigen::MatrixXd FiniteSumProblem::full_hessian(const Eigen::VectorXd& x) const {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < n; ++i) h += component_hessian(i, x);
  return h / n;
}

double FiniteSumProblem::suboptimality(const Eigen::VectorXd& x) const {
  return cost(x) - cost(x_star);
}

void FiniteSumProblem::set_radius(double R) {
  if (!(R > 0.0)) throw std::invalid_argument("set_radius: R must be positive");
  radius = R;
  G = effective_lipschitz_G(*this, R);
}

FiniteSumProblem make_random_quadratic(int n, int d, double mu, double L,
                                       std::uint64_t seed) {
  check_common_args(n, d, mu, L);
  if (L < mu) throw std::invalid_argument("make_random_quadratic: L < mu");
  if (d == 1 && L != mu)
    throw std::invalid_argument(
        "make_random_quadratic: d=1 cannot attain both spectrum endpoints "
        "unless L == mu");

  Rng rng = Rng::derive(seed, 0x71ad);

  // Mean Hessian with prescribed spectrum [mu, L], extremes attained.
  Eigen::VectorXd eigs(d);
  for (int i = 0; i < d; ++i)
    eigs[i] = d == 1 ? mu : mu + (L - mu) * static_cast<double>(i) / (d - 1);
  Eigen::MatrixXd gauss(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) gauss(r, c) = rng.normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(gauss);
  Eigen::MatrixXd Q = qr.householderQ();
  Eigen::MatrixXd mean_h = Q * eigs.asDiagonal() * Q.transpose();
  mean_h = 0.5 * (mean_h + mean_h.transpose()).eval();

  // Zero-sum Hessian perturbations. The extreme eigendirections of the mean
  // are projected out so the spectrum endpoints stay attained exactly, then
  // the whole set is halved until every component is PSD with top eig <= L.
  std::vector<Eigen::MatrixXd> perts(n, Eigen::MatrixXd::Zero(d, d));
  if (n > 1 && L > mu) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mean_h);
    const Eigen::VectorXd v_lo = es.eigenvectors().col(0);
    const Eigen::VectorXd v_hi = es.eigenvectors().col(d - 1);
    Eigen::MatrixXd proj = Eigen::MatrixXd::Identity(d, d) -
                           v_lo * v_lo.transpose() - v_hi * v_hi.transpose();
    Eigen::MatrixXd mean_pert = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i < n; ++i) {
      perts[i] = draw_symmetric(rng, d, 0.25 * (L - mu));
      mean_pert += perts[i] / n;
    }
    for (int i = 0; i < n; ++i)
      perts[i] = (proj * (perts[i] - mean_pert) * proj).eval();
    // Tolerance: the projection pins the top eigenvalue at exactly L, so an
    // exact <= L test can be defeated by roundoff no matter how small the
    // perturbations get.
    const double tol = 64.0 * std::numeric_limits<double>::epsilon() * L;
    for (int halvings = 0;; ++halvings) {
      bool ok = true;
      for (int i = 0; i < n && ok; ++i) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ces(mean_h + perts[i],
                                                           Eigen::EigenvaluesOnly);
        const auto& w = ces.eigenvalues();
        ok = w[0] >= -tol && w[d - 1] <= L + tol;
      }
      if (ok) break;
      if (halvings >= 200) {  // perturbations are numerically zero by now
        for (auto& e : perts) e.setZero();
        break;
      }
      for (auto& e : perts) e *= 0.5;
    }
  }

  // Linear terms: mean picks the optimum, zero-sum spread adds gradient noise
  // at x_star so components genuinely disagree there.
  Eigen::VectorXd x_target = draw_normal_vector(rng, d);
  Eigen::VectorXd mean_b = mean_h * x_target;
  std::vector<Eigen::VectorXd> lin(n);
  Eigen::VectorXd mean_c = Eigen::VectorXd::Zero(d);
  for (int i = 0; i < n; ++i) {
    lin[i] = mu * draw_normal_vector(rng, d);
    mean_c += lin[i] / n;
  }

  FiniteSumProblem p;
  p.family = Family::kQuadratic;
  p.n = n;
  p.d = d;
  p.mu = mu;
  p.L = L;
  p.kappa = L / mu;
  p.seed = seed;
  p.quadratics.resize(n);
  for (int i = 0; i < n; ++i) {
    p.quadratics[i].hessian = mean_h + perts[i];
    p.quadratics[i].linear = n == 1 ? mean_b : mean_b + lin[i] - mean_c;
  }
  p.x_star = solve_optimum(p, 1e-12);
  p.set_radius(2.0);
  return p;
}

FiniteSumProblem make_random_logcosh(int n, int d, double mu, double L,
                                     std::uint64_t seed) {
  check_common_args(n, d, mu, L);
  if (L <= mu)
    throw std::invalid_argument(
        "make_random_logcosh: need L > mu to leave room for logcosh curvature");

  Rng rng = Rng::derive(seed, 0x10c0);

  FiniteSumProblem p;
  p.family = Family::kLogCosh;
  p.n = n;
  p.d = d;
  p.mu = mu;
  p.L = L;
  p.kappa = L / mu;
  p.seed = seed;
  p.logcoshes.resize(n);

  // Curvature budgets scale_i * ||dir_i||^2 <= L - mu, maximum attained, all
  // scales strictly positive.
  std::vector<double> raw(n);
  double max_budget = 0.0;
  for (int i = 0; i < n; ++i) {
    p.logcoshes[i].quad_weight = mu;
    p.logcoshes[i].direction = draw_normal_vector(rng, d);
    raw[i] = 0.2 + 0.8 * rng.uniform();
    max_budget = std::max(max_budget, raw[i] * p.logcoshes[i].direction.squaredNorm());
  }
  for (int i = 0; i < n; ++i)
    p.logcoshes[i].scale = raw[i] * (L - mu) / max_budget;

  p.x_star = solve_optimum(p, 1e-12);
  p.set_radius(2.0);
  return p;
}

Eigen::VectorXd solve_optimum(const FiniteSumProblem& p, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("solve_optimum: tol must be positive");
  if (p.family == Family::kQuadratic) {
    Eigen::MatrixXd mean_h = Eigen::MatrixXd::Zero(p.d, p.d);
    Eigen::VectorXd mean_b = Eigen::VectorXd::Zero(p.d);
    for (const auto& c : p.quadratics) {
      mean_h += c.hessian / p.n;
      mean_b += c.linear / p.n;
    }
    return mean_h.ldlt().solve(mean_b);
  }

  // Damped Newton, halving the step on non-decrease.
  Eigen::VectorXd x = Eigen::VectorXd::Zero(p.d);
  constexpr int kMaxIters = 10000;
  for (int iter = 0; iter < kMaxIters; ++iter) {
    Eigen::VectorXd g = p.full_gradient(x);
    if (g.norm() <= tol) return x;
    Eigen::VectorXd step = p.full_hessian(x).ldlt().solve(g);
    double f0 = p.cost(x);
    double t = 1.0;
    while (t > 1e-12 && p.cost(x - t * step) >= f0) t *= 0.5;
    x -= t * step;
  }
  throw std::runtime_error("solve_optimum: Newton did not reach tol in 10^4 iterations");
}

double effective_lipschitz_G(const FiniteSumProblem& p, double R) {
  if (!(R >= 0.0)) throw std::invalid_argument("effective_lipschitz_G: R must be >= 0");
  double g = 0.0;
  if (p.family == Family::kQuadratic) {
    for (const auto& c : p.quadratics) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c.hessian,
                                                        Eigen::EigenvaluesOnly);
      const double top = es.eigenvalues()[p.d - 1];
      g = std::max(g, (c.hessian * p.x_star - c.linear).norm() + R * top);
    }
  } else {
    for (const auto& c : p.logcoshes) {
      g = std::max(g, c.quad_weight * (p.x_star.norm() + R) +
                          std::abs(c.scale) * c.direction.norm());
    }
  }
  return g;
}

}  // namespace rrsgd
