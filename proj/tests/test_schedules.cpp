#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "rrsgd/schedules.hpp"

using namespace rrsgd;

namespace {

ProblemConstants consts(double mu, double kappa, int n, int K_total = 0) {
  return {mu, mu * kappa, kappa, n, K_total};
}

}  // namespace

TEST_CASE("factory validation") {
  CHECK_NOTHROW(constant_step(0.0));
  CHECK_THROWS_AS(constant_step(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(constant_step(std::nan("")), std::invalid_argument);

  CHECK_NOTHROW(epoch_log_constant_step(3.5));
  CHECK_THROWS_AS(epoch_log_constant_step(3.0), std::invalid_argument);

  CHECK_NOTHROW(per_iteration_step(1.5));
  CHECK_THROWS_AS(per_iteration_step(1.0), std::invalid_argument);

  CHECK_NOTHROW(epoch_only_decay_step(2.5));
  CHECK_THROWS_AS(epoch_only_decay_step(2.0), std::invalid_argument);

  CHECK_NOTHROW(ahn_sra_step(2.5));
  CHECK_THROWS_AS(ahn_sra_step(2.0), std::invalid_argument);
}

TEST_CASE("variant names and parameter accessor") {
  CHECK(schedule_variant_name(constant_step(0.1)) == "constant");
  CHECK(schedule_variant_name(epoch_log_constant_step(4.0)) == "epoch_log_constant");
  CHECK(schedule_variant_name(per_iteration_step(2.0)) == "per_iteration");
  CHECK(schedule_variant_name(epoch_only_decay_step(3.0)) == "epoch_only_decay");
  CHECK(schedule_variant_name(ahn_sra_step(3.0)) == "ahn_sra");
  CHECK(schedule_alpha_or_eta(constant_step(0.1)) == 0.1);
  CHECK(schedule_alpha_or_eta(ahn_sra_step(3.0)) == 3.0);
}

TEST_CASE("constant schedule ignores indices") {
  const auto s = constant_step(0.05);
  const auto c = consts(1.0, 2.0, 4);
  CHECK(step_size(s, c, 1, 1) == 0.05);
  CHECK(step_size(s, c, 7, 3) == 0.05);
  CHECK(max_step(s, c, 10) == 0.05);
}

TEST_CASE("epoch-log-constant closed form and K requirement") {
  const auto s = epoch_log_constant_step(4.0);
  auto c = consts(2.0, 3.0, 8, 16);
  const double expected = 2.0 * 4.0 * std::log(8.0 * 16.0) / (2.0 * 8.0 * 16.0);
  CHECK(step_size(s, c, 3, 5) == doctest::Approx(expected).epsilon(1e-15));
  c.K_total = 0;
  CHECK_THROWS_AS(step_size(s, c, 1, 1), std::invalid_argument);
}

TEST_CASE("per-iteration schedule pinned values") {
  const auto s = per_iteration_step(2.0);
  const auto c = consts(1.0, 1.0, 4);  // k0 = alpha * kappa = 2
  CHECK(step_size(s, c, 1, 1) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(step_size(s, c, 1, 2) == doctest::Approx(1.0).epsilon(1e-15));
  // global counter: k=2, i=1 continues right after k=1, i=4
  CHECK(step_size(s, c, 2, 1) == doctest::Approx(4.0 / 7.0).epsilon(1e-15));
}

TEST_CASE("epoch-only-decay is constant within an epoch") {
  const auto s = epoch_only_decay_step(3.0);
  const auto c = consts(1.0, 2.0, 5);  // k0 = 6
  const double e1 = step_size(s, c, 1, 1);
  CHECK(e1 == doctest::Approx(6.0 / 11.0).epsilon(1e-15));
  for (int i = 2; i <= 5; ++i) CHECK(step_size(s, c, 1, i) == e1);
  CHECK(step_size(s, c, 2, 3) == doctest::Approx(6.0 / 16.0).epsilon(1e-15));
}

TEST_CASE("ahn-sra schedule pinned values") {
  const auto s = ahn_sra_step(3.0);
  const auto c = consts(1.0, 2.0, 5);  // k0 = 6
  // first epoch decays per iteration
  CHECK(step_size(s, c, 1, 1) == doctest::Approx(6.0 / 7.0).epsilon(1e-15));
  CHECK(step_size(s, c, 1, 5) == doctest::Approx(6.0 / 11.0).epsilon(1e-15));
  // later epochs are flat: eta = (2*3/1) / (6 + 5*2) = 0.375
  for (int i = 1; i <= 5; ++i)
    CHECK(step_size(s, c, 2, i) == doctest::Approx(0.375).epsilon(1e-15));
  CHECK(step_size(s, c, 3, 2) == doctest::Approx(6.0 / 21.0).epsilon(1e-15));
}

TEST_CASE("decaying schedules are non-increasing and respect 2/L") {
  const auto c = consts(1.0, 4.0, 8);
  for (const auto& s : {per_iteration_step(2.0), epoch_only_decay_step(3.0),
                        ahn_sra_step(3.0)}) {
    double prev = 2.0 / c.L + 1e-15;
    for (int k = 1; k <= 20; ++k)
      for (int i = 1; i <= c.n; ++i) {
        const double eta = step_size(s, c, k, i);
        CHECK(eta > 0.0);
        CHECK(eta <= prev + 1e-15);
        prev = eta;
      }
    CHECK(max_step(s, c, 20) == step_size(s, c, 1, 1));
    CHECK(max_step(s, c, 20) <= 2.0 / c.L + 1e-15);
  }
}

TEST_CASE("step_size rejects out-of-range indices") {
  const auto s = ahn_sra_step(3.0);
  const auto c = consts(1.0, 2.0, 5);
  CHECK_THROWS_AS(step_size(s, c, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(step_size(s, c, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(step_size(s, c, 1, 6), std::invalid_argument);
}
