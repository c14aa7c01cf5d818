#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rrsgd/analysis.hpp"
#include "rrsgd/recurrences.hpp"
#include "rrsgd/rng.hpp"

namespace rrsgd {

// Random valid parameter draws for the recurrence soundness suite. Ranges are
// log-uniform and stay inside each lemma's admissible region (alpha > beta > 0,
// alpha > gamma > 0 for the extension).
ChungParams random_chung_params(Rng& rng);
VariantParams random_variant_params(Rng& rng, bool extended);

struct RecurrenceCheckRow {
  int draw_id;
  std::string lemma;  // chung | chung_tight | variant | extended
  int K;
  double oracle;
  double bound;
  double slack;  // (bound - oracle) / max(oracle, tiny)
};

// For each draw, compares the closed-form bound against the equality-recursion
// oracle at every K in [1, K_max]. slack < -1e-12 marks a soundness failure.
std::vector<RecurrenceCheckRow> verify_recurrences(int draws, std::uint64_t seed,
                                                   int K_max = 64);

struct ProgressCheckRow {
  std::string family;
  std::uint64_t problem_seed;
  std::string check;  // per_iteration | per_epoch | quadratic_epoch
  int index;          // iteration i for per_iteration rows, else 0
  double eta;
  double lhs;
  double rhs;
  bool holds_within_ci;
  bool confirmed_violation;
  bool inconclusive;
};

// Monte Carlo verification of the three progress inequalities on generated
// instances: one instance per n in config.n_grid, per-iteration checks at
// eta in {1/(2L), 1/(4L)}, per-epoch checks at eta = 1/(8 n kappa L), and the
// quadratic refinement at eta = 1/(16 n kappa L) for quadratic families.
std::vector<ProgressCheckRow> verify_progress_bounds(const SweepConfig& config,
                                                     std::uint64_t seed);

}  // namespace rrsgd
