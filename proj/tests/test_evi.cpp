#include "doctest.h"
#include "ssp/evi.hpp"
#include "ssp/random.hpp"

using namespace ssp;

namespace {

SspInstance two_state(double p11, double p12, double p21, double p22, double c1, double c2) {
  return make_instance({{c1}, {c2}}, {{{p11, p12}}, {{p21, p22}}});
}

}  // namespace

TEST_CASE("optimistic operator limits") {
  Rng rng(41);
  for (int i = 0; i < 20; ++i) {
    const SspInstance inst = random_instance(rng, 3, 3);
    const Vec x{1.0, 2.0, 0.5};
    const Vec xs(x.begin(), x.begin() + inst.num_states);
    const ConfidenceSet exact = make_confidence_set(DivergenceKind::L1, inst.trans, uniform_radius(inst, 0.0));
    CHECK(sup_dist(apply_U_hat(inst, exact, xs).values, apply_U(inst, xs).values) <= 1e-12);
    const ConfidenceSet wide = make_confidence_set(DivergenceKind::L1, inst.trans, uniform_radius(inst, 3.0));
    CHECK(sup_dist(apply_U_hat(inst, wide, xs).values, inst.min_cost_vector()) <= 1e-12);

    EviOptions opts;
    opts.tol = 1e-12;
    CHECK(sup_dist(extended_value_iteration(inst, exact, opts).values, value_iteration(inst, 1e-12).values) <= 1e-9);
    CHECK(sup_dist(extended_value_iteration(inst, wide, opts).values, inst.min_cost_vector()) <= 1e-12);
  }
}

TEST_CASE("optimistic values shrink as the radius grows") {
  Rng rng(42);
  for (int i = 0; i < 20; ++i) {
    const SspInstance inst = random_instance(rng, 3, 2);
    Vec prev = value_iteration(inst, 1e-12).values;
    for (double eps : {0.05, 0.1, 0.2, 0.4, 0.8}) {
      const ConfidenceSet conf = make_confidence_set(DivergenceKind::L1, inst.trans, uniform_radius(inst, eps));
      const Vec v = extended_value_iteration(inst, conf).values;
      for (int s = 0; s < inst.num_states; ++s) CHECK(v[s] <= prev[s] + 1e-9);
      prev = v;
    }
  }
}

TEST_CASE("clamped operator is not monotone") {
  const SspInstance inst = two_state(0.45, 0.45, 0.45, 0.45, 0.5, 0.5);
  const ConfidenceSet conf = make_confidence_set(DivergenceKind::L1, inst.trans, uniform_radius(inst, 0.5));
  const Vec lo = apply_dagger0(inst, conf, BoundVariant::L1Dagger, {1.0, 0.9});
  const Vec hi = apply_dagger0(inst, conf, BoundVariant::L1Dagger, {1.0, 2.0});
  CHECK(lo[0] == doctest::Approx(0.855));
  CHECK(lo[1] == doctest::Approx(0.855));
  CHECK(hi[0] == doctest::Approx(0.85));
  CHECK(hi[1] == doctest::Approx(0.85));

  const ConfidenceSet wide = make_confidence_set(DivergenceKind::L1, inst.trans, uniform_radius(inst, 1.0));
  CHECK(sup_dist(apply_dagger0(inst, wide, BoundVariant::L1Dagger, {3.0, 7.0}), {0.5, 0.5}) <= 1e-12);
  const ConfidenceSet none = make_confidence_set(DivergenceKind::L1, inst.trans, uniform_radius(inst, 0.0));
  CHECK(sup_dist(apply_dagger0(inst, none, BoundVariant::L1Dagger, {3.0, 7.0}), apply_U(inst, {3.0, 7.0}).values) <=
        1e-12);
}

TEST_CASE("iterating the clamped operator") {
  DaggerOptions opts;
  opts.tol = 1e-13;

  const SspInstance a = two_state(0.1, 0.89, 0.89, 0.1, 0.01, 0.01);
  const FixedPointResult ra =
      iterate_dagger0(a, make_confidence_set(DivergenceKind::L1, a.trans, {{0.1}, {0.9}}), BoundVariant::L1Dagger,
                      {0.0, 0.0}, opts);
  CHECK(ra.status == FixedPointStatus::Converged);
  CHECK(sup_dist(ra.point, {0.019694135768511, 0.010892287380350}) <= 1e-9);

  const SspInstance b = two_state(0.00001, 0.999, 0.999, 0.00001, 0.01, 0.01);
  const FixedPointResult rb =
      iterate_dagger0(b, make_confidence_set(DivergenceKind::L1, b.trans, {{0.01}, {0.01}}), BoundVariant::L1Dagger,
                      {0.0, 0.0}, opts);
  CHECK(rb.status == FixedPointStatus::Converged);
  CHECK(sup_dist(rb.point, {0.90991810737, 0.90991810737}) <= 1e-8);

  const SspInstance c = two_state(0.00001, 0.999, 0.999, 0.00001, 0.3, 0.1);
  const FixedPointResult rc =
      iterate_dagger0(c, make_confidence_set(DivergenceKind::L1, c.trans, {{0.2}, {0.1}}), BoundVariant::L1Dagger,
                      {0.3, 0.363367}, opts);
  CHECK(rc.status == FixedPointStatus::Oscillating);
  REQUIRE(rc.cycle.size() == 2);
  const bool first = sup_dist(rc.cycle[0], {0.3, 1.3124}) <= 1e-4 && sup_dist(rc.cycle[1], {1.34862, 0.26847}) <= 1e-4;
  const bool second = sup_dist(rc.cycle[1], {0.3, 1.3124}) <= 1e-4 && sup_dist(rc.cycle[0], {1.34862, 0.26847}) <= 1e-4;
  CHECK((first || second));
}

TEST_CASE("policy-restricted operator and greedy policy") {
  const SspInstance inst = make_instance({{0.5, 0.9}}, {{{0.5}, {0.0}}});
  const ConfidenceSet conf = make_confidence_set(DivergenceKind::L1, inst.trans, uniform_radius(inst, 0.0));
  CHECK(apply_dagger0(inst, conf, BoundVariant::L1Dagger, {1.0}, Policy{1})[0] == doctest::Approx(0.9));
  CHECK(dagger_greedy(inst, conf, BoundVariant::L1Dagger, {1.0})[0] == 1);
}
