#include <doctest.h>

#include <cmath>

#include "beamcap/oracle.hpp"
#include "beamcap/strategy.hpp"

using namespace beamcap;

TEST_CASE("dp_optimal_rate worked examples") {
  const DpSolution a = dp_optimal_rate(ModelParams(16, 2, 2));
  CHECK(a.rate == doctest::Approx(0.5931390622295664).epsilon(1e-12));
  CHECK(a.a_star(1, 16) == 2);

  const DpSolution b = dp_optimal_rate(ModelParams(16, 3, 8));
  CHECK(b.rate == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(b.a_star(1, 16) == 8);

  const DpSolution c = dp_optimal_rate(ModelParams(2, 1, 1));
  CHECK(c.rate == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c.a_star(1, 2) == 1);
}

TEST_CASE("dp value table is monotone in j and B") {
  // Note: V_j(u) is NOT monotone in the pool size u. At the last use,
  // V_L(2) = H(1/2) = 1 exceeds V_L(3) = H(1/3): an even pool halves
  // exactly while an odd one cannot. Monotonicity holds in the remaining
  // horizon and in the budget.
  const ModelParams params(12, 5, 3);
  const DpSolution sol = dp_optimal_rate(params);
  for (int j = 1; j <= params.block_length; ++j)
    for (int u = 1; u <= params.num_beams; ++u)
      CHECK(sol.value_at(j, u) >= sol.value_at(j + 1, u) - 1e-12);
  CHECK(sol.value_at(params.block_length, 3) < sol.value_at(params.block_length, 2));
  const DpSolution more_budget = dp_optimal_rate(ModelParams(12, 5, 4));
  for (int j = 1; j <= params.block_length; ++j)
    for (int u = 1; u <= params.num_beams; ++u)
      CHECK(more_budget.value_at(j, u) >= sol.value_at(j, u) - 1e-12);
}

TEST_CASE("dp equals capacity at integral schedules and reproduces the root path") {
  for (int m : {2, 4, 8, 16}) {
    for (int b = 1; b <= m; ++b) {
      for (int l = 1; l <= 6; ++l) {
        const ModelParams params(m, l, b);
        const CostSchedule sched = cost_schedule(params);
        const DpSolution sol = dp_optimal_rate(params);
        const double cap = capacity(params).bits_per_use;
        CHECK(sol.rate <= cap + 1e-10);
        if (!sched.integral()) continue;
        CHECK(std::abs(sol.rate - cap) <= 1e-10);
        int pool = m;
        for (int j = 1; j <= l; ++j) {
          const int a = sol.a_star(j, pool);
          CHECK(Rational(a) == sched.values[j - 1]);
          pool -= a;
        }
      }
    }
  }
}

TEST_CASE("dp never beats the formula on fractional schedules either") {
  for (int m : {3, 5, 6, 7, 9, 16}) {
    for (int b = 0; b <= m; ++b) {
      for (int l = 1; l <= 6; ++l) {
        const ModelParams params(m, l, b);
        CHECK(dp_optimal_rate(params).rate <= capacity(params).bits_per_use + 1e-10);
      }
    }
  }
}

TEST_CASE("brute force worked examples") {
  CHECK(brute_force_small(ModelParams(2, 1, 1)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(brute_force_small(ModelParams(4, 1, 1)) ==
        doctest::Approx(0.8112781244591328).epsilon(1e-12));  // H(1/4)
  CHECK(std::abs(brute_force_small(ModelParams(4, 2, 2)) -
                 dp_optimal_rate(ModelParams(4, 2, 2)).rate) <= 1e-12);
}

TEST_CASE("brute force equals dp across its admissible domain") {
  for (int m = 1; m <= 8; ++m)
    for (int b = 0; b <= m; ++b)
      for (int l = 1; l <= 4; ++l)
        CHECK(std::abs(brute_force_small(ModelParams(m, l, b)) -
                       dp_optimal_rate(ModelParams(m, l, b)).rate) <= 1e-12);
}

TEST_CASE("brute force guards its instance size") {
  CHECK_THROWS_AS(brute_force_small(ModelParams(9, 2, 2)), guard_error);
  CHECK_THROWS_AS(brute_force_small(ModelParams(4, 5, 2)), guard_error);
}

TEST_CASE("mc_entropy_estimate is deterministic under a fixed seed") {
  const ModelParams params(16, 4, 2);
  const RateReport a = mc_entropy_estimate(params, 20000, 99);
  const RateReport b = mc_entropy_estimate(params, 20000, 99);
  CHECK(a.bits_per_use == b.bits_per_use);
  CHECK(*a.half_width == *b.half_width);
  CHECK(a.provenance == Provenance::monte_carlo);
  REQUIRE(a.per_use_terms.size() == 4);
}

TEST_CASE("mc_entropy_estimate agrees with capacity within 3 half-widths") {
  const ModelParams params(16, 4, 2);
  const RateReport est = mc_entropy_estimate(params, 100000, 1234);
  const double cap = capacity(params).bits_per_use;
  REQUIRE(est.half_width.has_value());
  CHECK(std::abs(est.bits_per_use - cap) <= 3.0 * *est.half_width);
}

TEST_CASE("mc_entropy_estimate stays under the entropy ceiling") {
  const RateReport est = mc_entropy_estimate(ModelParams(16, 4, 8), 20000, 5);
  CHECK(est.bits_per_use <= 1.0 + 1e-9);
}

TEST_CASE("mc half-width shrinks like one over sqrt(blocks)") {
  const ModelParams params(16, 4, 2);
  const double hw_small = *mc_entropy_estimate(params, 10000, 77).half_width;
  const double hw_large = *mc_entropy_estimate(params, 100000, 77).half_width;
  const double ratio = hw_small / hw_large;
  const double root10 = std::sqrt(10.0);
  CHECK(ratio >= root10 / 2.0);
  CHECK(ratio <= root10 * 2.0);
}

TEST_CASE("mc guards") {
  CHECK_THROWS_AS(mc_entropy_estimate(ModelParams(4, 25, 2), 10000, 1), guard_error);
  CHECK_THROWS_AS(mc_entropy_estimate(ModelParams(4, 2, 2), 999, 1), guard_error);
}

TEST_CASE("trapping soundness: zero violations on the guarded domain") {
  // The full M <= 8, L <= 4 sweep is the acceptance suite's job; spot-check
  // representative corners here.
  CHECK(trapping_soundness_violations(ModelParams(4, 4, 2)) == 0);
  CHECK(trapping_soundness_violations(ModelParams(6, 3, 6)) == 0);
  CHECK(trapping_soundness_violations(ModelParams(8, 2, 3)) == 0);
  CHECK_THROWS_AS(trapping_soundness_violations(ModelParams(9, 4, 2)), guard_error);
}
