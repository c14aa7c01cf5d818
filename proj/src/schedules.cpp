#include "rrsgd/schedules.hpp"

#include <cmath>
#include <stdexcept>

namespace rrsgd {

namespace {

void require_finite_positive(double v, const char* what) {
  if (!std::isfinite(v) || v <= 0.0)
    throw std::invalid_argument(std::string(what) + " must be finite and positive");
}

void check_consts(const ProblemConstants& c) {
  require_finite_positive(c.mu, "mu");
  require_finite_positive(c.L, "L");
  require_finite_positive(c.kappa, "kappa");
  if (c.n < 1) throw std::invalid_argument("n must be >= 1");
}

void check_indices(const ProblemConstants& c, int k, int i) {
  if (k < 1) throw std::invalid_argument("epoch index k must be >= 1");
  if (i < 1 || i > c.n)
    throw std::invalid_argument("iteration index i must be in [1, n]");
}

}  // namespace

StepSchedule constant_step(double eta) {
  // eta = 0 allowed (zero-step degeneracy used by tests)
  if (!std::isfinite(eta) || eta < 0.0)
    throw std::invalid_argument("eta must be finite and >= 0");
  return ConstantStep{eta};
}

StepSchedule epoch_log_constant_step(double alpha) {
  if (!std::isfinite(alpha) || alpha <= 3.0)
    throw std::invalid_argument("EpochLogConstant requires alpha > 3");
  return EpochLogConstantStep{alpha};
}

StepSchedule per_iteration_step(double alpha) {
  if (!std::isfinite(alpha) || alpha <= 1.0)
    throw std::invalid_argument("PerIteration requires alpha > 1");
  return PerIterationStep{alpha};
}

StepSchedule epoch_only_decay_step(double alpha) {
  if (!std::isfinite(alpha) || alpha <= 2.0)
    throw std::invalid_argument("EpochOnlyDecay requires alpha > 2");
  return EpochOnlyDecayStep{alpha};
}

StepSchedule ahn_sra_step(double alpha) {
  if (!std::isfinite(alpha) || alpha <= 2.0)
    throw std::invalid_argument("AhnSra requires alpha > 2");
  return AhnSraStep{alpha};
}

std::string schedule_variant_name(const StepSchedule& s) {
  struct Visitor {
    std::string operator()(const ConstantStep&) const { return "constant"; }
    std::string operator()(const EpochLogConstantStep&) const {
      return "epoch_log_constant";
    }
    std::string operator()(const PerIterationStep&) const { return "per_iteration"; }
    std::string operator()(const EpochOnlyDecayStep&) const {
      return "epoch_only_decay";
    }
    std::string operator()(const AhnSraStep&) const { return "ahn_sra"; }
  };
  return std::visit(Visitor{}, s);
}

double schedule_alpha_or_eta(const StepSchedule& s) {
  struct Visitor {
    double operator()(const ConstantStep& v) const { return v.eta; }
    double operator()(const EpochLogConstantStep& v) const { return v.alpha; }
    double operator()(const PerIterationStep& v) const { return v.alpha; }
    double operator()(const EpochOnlyDecayStep& v) const { return v.alpha; }
    double operator()(const AhnSraStep& v) const { return v.alpha; }
  };
  return std::visit(Visitor{}, s);
}

double step_size(const StepSchedule& s, const ProblemConstants& c, int k, int i) {
  check_consts(c);
  check_indices(c, k, i);
  struct Visitor {
    const ProblemConstants& c;
    int k, i;
    double operator()(const ConstantStep& v) const { return v.eta; }
    double operator()(const EpochLogConstantStep& v) const {
      if (c.K_total < 1)
        throw std::invalid_argument("EpochLogConstant needs K_total set up front");
      const double nK = static_cast<double>(c.n) * c.K_total;
      return 2.0 * v.alpha * std::log(nK) / (c.mu * nK);
    }
    double operator()(const PerIterationStep& v) const {
      const double k0 = v.alpha * c.kappa;
      return (2.0 * v.alpha / c.mu) / (k0 + static_cast<double>(c.n) * (k - 1) + i);
    }
    double operator()(const EpochOnlyDecayStep& v) const {
      const double k0 = v.alpha * c.kappa;
      return (2.0 * v.alpha / c.mu) / (k0 + static_cast<double>(c.n) * k);
    }
    double operator()(const AhnSraStep& v) const {
      const double k0 = v.alpha * c.kappa;
      if (k == 1) return (2.0 * v.alpha / c.mu) / (k0 + i);
      return (2.0 * v.alpha / c.mu) / (k0 + static_cast<double>(c.n) * k);
    }
  };
  return std::visit(Visitor{c, k, i}, s);
}

double max_step(const StepSchedule& s, const ProblemConstants& c, int K) {
  check_consts(c);
  if (K < 1) throw std::invalid_argument("max_step: K must be >= 1");
  double m = 0.0;
  for (int k = 1; k <= K; ++k)
    for (int i = 1; i <= c.n; ++i) m = std::max(m, step_size(s, c, k, i));
  return m;
}

}  // namespace rrsgd
