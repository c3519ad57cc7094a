#include "doctest.h"
#include "ssp/planning.hpp"
#include "ssp/random.hpp"

using namespace ssp;

TEST_CASE("Bellman operators") {
  const SspInstance inst = make_instance({{1.0}, {1.0}}, {{{0.0, 0.5}}, {{0.0, 0.0}}});
  const Vec y = apply_L_pi(inst, {0, 0}, {1.0, 1.0});
  CHECK(y[0] == doctest::Approx(1.5));
  CHECK(y[1] == doctest::Approx(1.0));
  CHECK(apply_L_pi(inst, {0, 0}, {0.0, 0.0}) == Vec{1.0, 1.0});

  const SspInstance two = make_instance({{0.5, 0.9}}, {{{0.5}, {0.0}}});
  const GreedyResult g = apply_U(two, {0.0});
  CHECK(g.values[0] == doctest::Approx(0.5));
  CHECK(g.policy[0] == 0);
}

TEST_CASE("value iteration") {
  const SspInstance one = make_instance({{0.5}}, {{{0.5}}});
  CHECK(value_iteration(one, 1e-12).values[0] == doctest::Approx(1.0).epsilon(1e-11));
  const SspInstance iterating = make_instance({{0.01}, {0.01}}, {{{0.1, 0.89}}, {{0.89, 0.1}}});
  const Vec j = value_iteration(iterating, 1e-12).values;
  CHECK(std::abs(j[0] - 1.0) <= 1e-6);
  CHECK(std::abs(j[1] - 1.0) <= 1e-6);
  try {
    value_iteration(iterating, 1e-12, 5);
    FAIL("expected MaxIterExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::MaxIterExceeded);
  }
}

TEST_CASE("policy iteration on the two-action example") {
  // Actions (c=0.5, p=0.5) and (c=0.9, p=0): values 1.0 and 0.9, so the
  // second action is optimal.
  const SspInstance two = make_instance({{0.5, 0.9}}, {{{0.5}, {0.0}}});
  const PlanResult pi = policy_iteration(two, {0});
  CHECK(pi.values[0] == doctest::Approx(0.9));
  CHECK(pi.policy[0] == 1);
  const PlanResult single = policy_iteration(make_instance({{0.5}}, {{{0.5}}}), {0});
  CHECK(single.iterations == 1);
  CHECK(single.values[0] == doctest::Approx(1.0));
}

TEST_CASE("planners agree and policy iteration is exhaustively optimal") {
  Rng rng(21);
  const double tol = 1e-10;
  for (int i = 0; i < 100; ++i) {
    const SspInstance inst = random_instance(rng, 4, 3);
    const PlanResult vi = value_iteration(inst, tol);
    const PlanResult pi = policy_iteration(inst, find_proper_policy(inst));
    CHECK(sup_dist(vi.values, pi.values) <= 10 * tol);
    if (inst.num_states > 3) continue;
    for (const Policy& other : enumerate_policies(inst)) {
      const Vec v = cost_to_go(inst, other);
      for (int s = 0; s < inst.num_states; ++s) CHECK(pi.values[s] <= v[s] + 1e-9);
      const Vec u = apply_U(inst, v).values;
      const Vec l = apply_L_pi(inst, other, v);
      for (int s = 0; s < inst.num_states; ++s) CHECK(u[s] <= l[s] + 1e-12);
    }
  }
}

TEST_CASE("proper policy search") {
  const SspInstance inst = make_instance({{1.0, 1.0}, {1.0}}, {{{1.0, 0.0}, {0.0, 1.0}}, {{0.0, 0.5}}});
  const Policy pi = find_proper_policy(inst);
  CHECK(pi[0] == 1);
  CHECK(is_proper(inst, pi));
  const SspInstance trap = make_instance({{1.0}}, {{{1.0}}});
  try {
    find_proper_policy(trap);
    FAIL("expected NoProperPolicy");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NoProperPolicy);
  }
}

TEST_CASE("contraction certificate") {
  const SspInstance half = make_instance({{1.0}, {1.0}}, {{{0.5, 0.0}}, {{0.0, 0.5}}});
  const ContractionCertificate cert = contraction_certificate(half);
  CHECK(cert.eta == doctest::Approx(0.5));
  CHECK(cert.gamma == doctest::Approx(2.0 / 3.0));
  CHECK(cert.omega[0] == doctest::Approx(0.75));
  CHECK(cert.omega[1] == doctest::Approx(0.75));
  CHECK_FALSE(cert.eta_clamped);

  const SspInstance chain = make_instance({{1.0}}, {{{0.0}}});
  CHECK(contraction_certificate(chain).eta_clamped);

  Rng rng(5);
  for (int i = 0; i < 30; ++i) {
    const SspInstance inst = random_instance(rng, 4, 3);
    const ContractionCertificate c = contraction_certificate(inst);
    CHECK(c.gamma < 1.0);
    Vec x(inst.num_states), y(inst.num_states);
    for (int s = 0; s < inst.num_states; ++s) {
      x[s] = 5.0 * uniform01(rng);
      y[s] = 5.0 * uniform01(rng);
    }
    Vec ux = apply_U(inst, x).values, uy = apply_U(inst, y).values;
    Vec d1(inst.num_states), d0(inst.num_states);
    for (int s = 0; s < inst.num_states; ++s) {
      d1[s] = ux[s] - uy[s];
      d0[s] = x[s] - y[s];
    }
    CHECK(weighted_sup_norm(d1, c.omega) <= c.gamma * weighted_sup_norm(d0, c.omega) + 1e-12);
  }

  const SspInstance improper = make_instance({{1.0, 1.0}}, {{{1.0}, {0.0}}});
  try {
    contraction_certificate(improper);
    FAIL("expected NotAllProper");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotAllProper);
  }
}
