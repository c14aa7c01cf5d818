#pragma once

#include <string>
#include <variant>

namespace rrsgd {

// Step-size rules, all evaluated as eta(k, i) for epoch k >= 1 and
// within-epoch iteration i in [1, n]. The decaying variants use the initial
// index k0 = alpha * kappa, which keeps every emitted step below 2/L.
struct ConstantStep {
  double eta;
};

// eta == 2 * alpha * log(nK) / (mu * n * K); needs the epoch budget K known
// up front, and refuses to evaluate without it.
struct EpochLogConstantStep {
  double alpha;  // > 3
};

// eta_{k,i} = (2 alpha / mu) / (k0 + n(k-1) + i), decaying in the global
// iteration counter.
struct PerIterationStep {
  double alpha;  // > 1
};

// eta_{k,i} = (2 alpha / mu) / (k0 + nk) from epoch 1 on. Kept with
// k0 = alpha * kappa (not the simplified k0 = 0 form) so the 2/L safety
// precondition still holds; used for contrast experiments.
struct EpochOnlyDecayStep {
  double alpha;  // > 2
};

// Epoch 1: eta_{1,i} = (2 alpha / mu) / (k0 + i), strictly decreasing in i;
// epochs k >= 2: eta_{k,i} = (2 alpha / mu) / (k0 + nk), constant within the
// epoch.
struct AhnSraStep {
  double alpha;  // > 2
};

using StepSchedule = std::variant<ConstantStep, EpochLogConstantStep,
                                  PerIterationStep, EpochOnlyDecayStep, AhnSraStep>;

// Validating factories; each throws std::invalid_argument outside the
// admissible alpha range.
StepSchedule constant_step(double eta);
StepSchedule epoch_log_constant_step(double alpha);
StepSchedule per_iteration_step(double alpha);
StepSchedule epoch_only_decay_step(double alpha);
StepSchedule ahn_sra_step(double alpha);

std::string schedule_variant_name(const StepSchedule& s);
double schedule_alpha_or_eta(const StepSchedule& s);

struct ProblemConstants {
  double mu;
  double L;
  double kappa;  // = L / mu
  int n;
  int K_total = 0;  // needed only by EpochLogConstantStep; 0 = unset
};

double step_size(const StepSchedule& s, const ProblemConstants& c, int k, int i);

// Maximum step over k in [1, K], i in [1, n]; the engine asserts this is
// <= 2/L before running.
double max_step(const StepSchedule& s, const ProblemConstants& c, int K);

}  // namespace rrsgd
