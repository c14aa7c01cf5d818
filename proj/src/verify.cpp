#include "rrsgd/verify.hpp"

#include <cmath>

#include "rrsgd/engine.hpp"

namespace rrsgd {

namespace {

double log_uniform(Rng& rng, double lo_exp, double hi_exp) {
  return std::pow(10.0, lo_exp + (hi_exp - lo_exp) * rng.uniform());
}

double rel_slack(double bound, double oracle) {
  return (bound - oracle) / std::max(oracle, 1e-300);
}

}  // namespace

ChungParams random_chung_params(Rng& rng) {
  ChungParams p;
  p.k0 = log_uniform(rng, -2.0, 2.0);
  p.alpha = log_uniform(rng, std::log10(0.05), 1.0);
  p.beta = p.alpha * (0.01 + 0.98 * rng.uniform());
  p.A = log_uniform(rng, -3.0, 2.0);
  p.xi0 = log_uniform(rng, -3.0, 2.0);
  return p;
}

VariantParams random_variant_params(Rng& rng, bool extended) {
  VariantParams p;
  p.k0 = log_uniform(rng, -2.0, 2.0);
  p.alpha = log_uniform(rng, std::log10(0.05), 1.0);
  p.beta = p.alpha * (0.01 + 0.98 * rng.uniform());
  p.epsilon = log_uniform(rng, -2.0, 0.7);
  p.A1 = log_uniform(rng, -3.0, 1.0);
  p.A2 = log_uniform(rng, -3.0, 1.0);
  p.n = 1 + static_cast<int>(rng.bounded(64));
  p.xi0 = log_uniform(rng, -3.0, 2.0);
  if (extended)
    p.extension = VariantExtension{log_uniform(rng, -3.0, 1.0),
                                   p.alpha * (0.01 + 0.98 * rng.uniform())};
  return p;
}

std::vector<RecurrenceCheckRow> verify_recurrences(int draws, std::uint64_t seed,
                                                   int K_max) {
  std::vector<RecurrenceCheckRow> rows;
  rows.reserve(static_cast<std::size_t>(draws) * 4);
  for (int draw = 0; draw < draws; ++draw) {
    Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(draw));

    {
      const ChungParams p = random_chung_params(rng);
      // One incremental pass of the equality recursion covers every K.
      double xi = p.xi0;
      for (int K = 1; K <= K_max; ++K) {
        const double denom = p.k0 + K;
        xi = std::exp(-p.alpha / denom) * xi + p.A / std::pow(denom, p.beta + 1.0);
        const double tight = chung_bound_tight(p, K);
        const double loose = chung_bound(p, K);
        rows.push_back({draw, "chung_tight", K, xi, tight, rel_slack(tight, xi)});
        rows.push_back({draw, "chung", K, tight, loose, rel_slack(loose, tight)});
      }
    }

    for (const bool extended : {false, true}) {
      const VariantParams p = random_variant_params(rng, extended);
      const char* lemma = extended ? "extended" : "variant";
      double xi =
          std::exp(-p.alpha * inverse_linear_sum(p.k0, 0.0, p.n)) * p.xi0 + p.A1;
      for (int K = 1; K <= K_max; ++K) {
        const double bound =
            extended ? extended_variant_bound(p, K) : variant_bound(p, K);
        rows.push_back({draw, lemma, K, xi, bound, rel_slack(bound, xi)});
        // advance the equality recursion to the next K
        const double s =
            inverse_linear_sum(p.k0, static_cast<double>(p.n) * K, p.n);
        const double D = p.k0 + static_cast<double>(p.n) * (K + 1.0);
        xi = std::exp(-p.alpha * s + p.epsilon / (static_cast<double>(K) * K)) * xi +
             p.A2 / std::pow(D, p.beta + 1.0);
        if (p.extension)
          xi += p.extension->A3 / std::pow(D, p.extension->gamma + 1.0);
      }
    }
  }
  return rows;
}

std::vector<ProgressCheckRow> verify_progress_bounds(const SweepConfig& config,
                                                     std::uint64_t seed) {
  validate(config);
  std::vector<ProgressCheckRow> rows;
  int instance_id = 0;
  for (int n : config.n_grid) {
    const std::uint64_t prob_seed =
        Rng::derive(seed, 0xb0000 + instance_id++).next_u64();
    const FiniteSumProblem p =
        config.family == Family::kQuadratic
            ? make_random_quadratic(n, config.d, config.mu, config.L, prob_seed)
            : make_random_logcosh(n, config.d, config.mu, config.L, prob_seed);
    const Eigen::VectorXd x0 = default_x0(p, prob_seed);
    const std::string fam = family_name(config.family);

    int check_id = 0;
    for (const double eta : {1.0 / (2.0 * p.L), 1.0 / (4.0 * p.L)}) {
      for (const int i : {0, n / 2, n - 1}) {
        const auto r = check_per_iteration_bound(
            p, x0, 1, i, eta, config.trials,
            Rng::derive(prob_seed, 0xc0 + check_id++).next_u64());
        rows.push_back({fam, prob_seed, "per_iteration", i, eta, r.lhs_mean,
                        r.rhs_mean, r.holds_within_ci, r.confirmed_violation,
                        r.inconclusive});
      }
    }
    {
      const double eta = 1.0 / (8.0 * n * p.kappa * p.L);
      const auto r = check_per_epoch_bound(
          p, x0, eta, config.trials, Rng::derive(prob_seed, 0xe0).next_u64());
      rows.push_back({fam, prob_seed, "per_epoch", 0, eta, r.lhs_mean, r.rhs_mean,
                      r.holds_within_ci, r.confirmed_violation, r.inconclusive});
    }
    if (config.family == Family::kQuadratic) {
      const double eta = 1.0 / (16.0 * n * p.kappa * p.L);
      const auto r = check_quadratic_epoch_bound(
          p, x0, eta, config.trials, Rng::derive(prob_seed, 0xe1).next_u64());
      rows.push_back({fam, prob_seed, "quadratic_epoch", 0, eta, r.lhs_mean,
                      r.rhs_mean, r.holds_within_ci, r.confirmed_violation,
                      r.inconclusive});
    }
  }
  return rows;
}

}  // namespace rrsgd
