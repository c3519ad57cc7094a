#include <cmath>

#include "doctest.h"
#include "ssp/learning.hpp"

using namespace ssp;

namespace {

// Optimal values (0.46, 0.4); the cheap actions loop before reaching the goal.
SspInstance benchmark() {
  return make_instance({{0.1, 0.5}, {0.1, 0.4}}, {{{0.0, 0.9}, {0.0, 0.0}}, {{0.5, 0.45}, {0.0, 0.0}}});
}

double mean(const Vec& v, std::size_t from, std::size_t to) {
  double s = 0.0;
  for (std::size_t i = from; i < to; ++i) s += v[i];
  return s / static_cast<double>(to - from);
}

}  // namespace

TEST_CASE("counts and empirical model") {
  const SspInstance inst = make_instance({{1.0}, {1.0}}, {{{0.5, 0.25}}, {{0.0, 0.0}}});
  CountsTable counts = CountsTable::zeros(inst);
  const Tensor empty = empirical_model(counts);
  CHECK(empty[0][0] == Vec{0.0, 0.0});
  counts.record(0, 0, 0);
  counts.record(0, 0, 0);
  counts.record(0, 0, 1);
  counts.record(0, 0, -1);
  CHECK(counts.consistent());
  CHECK(counts.n_sa[0][0] == 4);
  const Tensor p = empirical_model(counts);
  CHECK(p[0][0][0] == doctest::Approx(0.5));
  CHECK(p[0][0][1] == doctest::Approx(0.25));
}

TEST_CASE("default radius schedule") {
  const SspInstance inst = benchmark();
  LearnerConfig cfg;
  CountsTable counts = CountsTable::zeros(inst);
  const SaTable at_zero = epsilon_schedule(inst, counts, cfg);
  CHECK(at_zero[0][0] == doctest::Approx(2.0));
  double prev = 2.0;
  for (double n = 10; n <= 1e9; n *= 10) {
    const double e = default_l1_radius(n, 2, 2, 0.1);
    CHECK(e <= prev);
    prev = e;
  }
  CHECK(prev < 1e-3);
  const double n = 1e4, inner = 2.0 * 3.0 * std::log(2.0 * 4.0 * n / 0.1) / n;
  CHECK(default_l1_radius(n, 2, 2, 0.1) == doctest::Approx(std::sqrt(inner)));

  cfg.epsilon_schedule = "zero";
  CHECK(epsilon_schedule(inst, counts, cfg)[1][1] == 0.0);
  cfg.epsilon_schedule = "bogus";
  CHECK_THROWS_AS(validate_config(cfg), Error);
  LearnerConfig bad;
  bad.delta = 1.5;
  CHECK_THROWS_AS(validate_config(bad), Error);
}

TEST_CASE("learner with the exact model plays the optimal policy") {
  const SspInstance inst = benchmark();
  LearnerConfig cfg;
  cfg.num_episodes = 500;
  cfg.fixed_epsilon = 0.0;
  cfg.use_star = false;
  CountsTable counts = CountsTable::zeros(inst);
  for (int s = 0; s < 2; ++s)
    for (int k = 0; k < 2; ++k) {
      const Vec& row = inst.trans[s][k];
      const long scale = 1000000;
      long used = 0;
      for (int t = 0; t < 2; ++t) {
        const long c = std::lround(row[t] * scale);
        counts.n_sas[s][k][t] = c;
        used += c;
      }
      counts.n_sas[s][k][2] = scale - used;
      counts.n_sa[s][k] = scale;
    }
  cfg.initial_counts = counts;
  const LearnerResult r = run_evi_learner(inst, cfg);
  const Vec& cost = r.trace.per_episode_cost;
  const double m = mean(cost, 0, cost.size());
  double var = 0.0;
  for (double c : cost) var += (c - m) * (c - m);
  const double se = std::sqrt(var / (cost.size() - 1) / cost.size());
  CHECK(r.trace.optimal_value == doctest::Approx(0.46));
  CHECK(std::abs(m - 0.46) <= 3.0 * se);
}

TEST_CASE("learner makes progress and is deterministic") {
  const SspInstance inst = benchmark();
  LearnerConfig cfg;
  cfg.num_episodes = 2000;
  cfg.seed = 5;
  const LearnerResult a = run_evi_learner(inst, cfg);
  const Vec& cost = a.trace.per_episode_cost;
  const double opt = a.trace.optimal_value;
  CHECK(mean(cost, 1000, 2000) - opt < mean(cost, 0, 1000) - opt);
  CHECK(a.counts.consistent());
  CHECK(a.trace.cumulative_regret.back() ==
        doctest::Approx(mean(cost, 0, 2000) * 2000 - 2000 * opt).epsilon(1e-9));

  const LearnerResult b = run_evi_learner(inst, cfg);
  CHECK(a.trace.per_episode_cost == b.trace.per_episode_cost);
  CHECK(a.trace.cumulative_regret == b.trace.cumulative_regret);
  CHECK(a.trace.episode_lengths == b.trace.episode_lengths);

  LearnerConfig dagger = cfg;
  dagger.num_episodes = 200;
  dagger.planner = LearnerPlanner::Dagger;
  CHECK(run_evi_learner(inst, dagger).trace.per_episode_cost.size() == 200);
}

TEST_CASE("greedy baseline") {
  const SspInstance single = make_instance({{0.5}}, {{{0.5}}});
  const RegretTrace s = run_greedy_baseline(single, 0.3, 2000, 3);
  CHECK(std::abs(mean(s.per_episode_cost, 0, 2000) - 1.0) <= 0.1);

  // Cheapest actions are optimal: no regret without exploration.
  const SspInstance cheap = make_instance({{0.1, 0.9}}, {{{0.0}, {0.0}}});
  CHECK(run_greedy_baseline(cheap, 0.0, 100, 3).cumulative_regret.back() == doctest::Approx(0.0));

  // Cheap actions bounce between the states; the direct exit costs 0.3.
  const SspInstance trap = make_instance({{0.1, 0.3}, {0.1, 0.3}}, {{{0.0, 0.9}, {0.0, 0.0}}, {{0.9, 0.0}, {0.0, 0.0}}});
  const RegretTrace g = run_greedy_baseline(trap, 0.0, 2000, 3);
  const double r1 = g.cumulative_regret[999] / 1000.0;
  const double r2 = g.cumulative_regret.back() / 2000.0;
  CHECK(r2 > 0.1);
  CHECK(std::abs(r2 - r1) <= 0.1 * r2);
}
