#include "doctest.h"
#include "ssp/duality.hpp"
#include "ssp/random.hpp"

using namespace ssp;

TEST_CASE("superharmonic vectors") {
  const SspInstance inst = make_instance({{0.3, 0.8}, {0.5}}, {{{0.2, 0.3}, {0.0, 0.1}}, {{0.4, 0.4}}});
  const Vec j = value_iteration(inst, 1e-13).values;
  CHECK(check_superharmonic(inst, {0.0, 0.0}));
  CHECK(check_superharmonic(inst, j));
  CHECK_FALSE(check_superharmonic(inst, {j[0] + 0.1, j[1] + 0.1}));
}

TEST_CASE("superharmonic vectors lie below the optimal values") {
  Rng rng(33);
  for (int i = 0; i < 100; ++i) {
    const SspInstance inst = random_instance(rng, 4, 3);
    const Vec j = value_iteration(inst, 1e-13).values;
    Vec x = j;
    const double shrink = uniform01(rng);
    for (double& v : x) v *= shrink;
    REQUIRE(check_superharmonic(inst, x));
    for (int s = 0; s < inst.num_states; ++s) CHECK(x[s] <= j[s] + 1e-9);
  }
}

TEST_CASE("occupancy measures") {
  const SspInstance one = make_instance({{0.5}}, {{{0.5}}});
  const OccupancyMeasure q = occupancy_from_policy(one, {0});
  CHECK(q[0][0] == doctest::Approx(2.0));
  CHECK(dual_objective(one, q) == doctest::Approx(1.0));
  CHECK(flow_residual(one, q) <= 1e-12);

  const SspInstance chain = make_instance({{1.0}, {1.0}}, {{{0.0, 1.0}}, {{0.0, 0.0}}});
  const OccupancyMeasure qc = occupancy_from_policy(chain, {0, 0});
  CHECK(qc[0][0] == doctest::Approx(1.0));
  CHECK(qc[1][0] == doctest::Approx(2.0));
  CHECK(dual_objective(chain, qc) == doctest::Approx(3.0));

  // Total occupancy 4 with self-loop mass 0.75 satisfies the flow constraint.
  const SspInstance loop = make_instance({{0.5, 0.9}}, {{{0.75}, {0.75}}});
  const StochasticPolicy mixed = occupancy_to_policy(loop, {{2.0, 2.0}});
  CHECK(mixed[0][0] == doctest::Approx(0.5));
  CHECK(mixed[0][1] == doctest::Approx(0.5));
  const SspInstance two = make_instance({{0.5, 0.9}}, {{{0.5}, {0.0}}});
  const StochasticPolicy pure = occupancy_to_policy(two, occupancy_from_policy(two, {1}));
  CHECK(pure[0][0] == doctest::Approx(0.0));
  CHECK(pure[0][1] == doctest::Approx(1.0));
  try {
    occupancy_to_policy(two, {{5.0, 5.0}});
    FAIL("expected InvalidOccupancy");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::InvalidOccupancy);
  }
}

TEST_CASE("duality gap for known models") {
  const DualityReport r = duality_gap(make_instance({{0.5}}, {{{0.5}}}));
  CHECK(r.primal == doctest::Approx(1.0));
  CHECK(r.dual == doctest::Approx(1.0));
  CHECK(r.gap <= 1e-9);
  Rng rng(31);
  for (int i = 0; i < 50; ++i) CHECK(duality_gap(random_instance(rng, 4, 3)).gap <= 1e-6);
}

TEST_CASE("duality gap for l1 confidence sets") {
  Rng rng(32);
  for (int i = 0; i < 50; ++i) {
    SspInstance inst = random_instance(rng, 2, 2);
    while (inst.num_states != 2) inst = random_instance(rng, 2, 2);
    const ConfidenceSet conf = make_confidence_set(DivergenceKind::L1, inst.trans, uniform_radius(inst, 0.5 * uniform01(rng)));
    CHECK(duality_gap(inst, conf).gap <= 1e-6);
  }
}

TEST_CASE("sandwich: optimistic values sit below the centre values") {
  const SspInstance inst = make_instance({{0.01}, {0.01}}, {{{0.1, 0.89}}, {{0.89, 0.1}}});
  const ConfidenceSet conf = make_confidence_set(DivergenceKind::L1, inst.trans, {{0.1}, {0.9}});
  const SandwichReport r = sandwich_check(inst, conf);
  CHECK(r.upper_holds);
  CHECK(r.optimistic[0] <= r.upper[0]);
  // J* plus the most negative bonus evaluated at J* is not a lower bound:
  // here it lands near (0.95, 0.55) while the optimistic values are ~0.02.
  CHECK_FALSE(r.lower_holds);
  CHECK_FALSE(r.holds);
  CHECK(r.lower[0] > r.optimistic[0]);
}
