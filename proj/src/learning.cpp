#include "ssp/learning.hpp"

#include <cmath>

#include "ssp/planning.hpp"

namespace ssp {

CountsTable CountsTable::zeros(const SspInstance& inst) {
  CountsTable c;
  c.n_sas.resize(inst.num_states);
  c.n_sa.resize(inst.num_states);
  for (int s = 0; s < inst.num_states; ++s) {
    c.n_sas[s].assign(inst.num_actions(s), std::vector<long>(inst.num_states + 1, 0));
    c.n_sa[s].assign(inst.num_actions(s), 0);
  }
  return c;
}

void CountsTable::record(int s, int k, int next_state) {
  auto& row = n_sas[s][k];
  ++row[next_state < 0 ? row.size() - 1 : static_cast<std::size_t>(next_state)];
  ++n_sa[s][k];
}

bool CountsTable::consistent() const {
  for (std::size_t s = 0; s < n_sa.size(); ++s)
    for (std::size_t k = 0; k < n_sa[s].size(); ++k) {
      long total = 0;
      for (long v : n_sas[s][k]) total += v;
      if (total != n_sa[s][k]) return false;
    }
  return true;
}

SaTable CountsTable::visits() const {
  SaTable v(n_sa.size());
  for (std::size_t s = 0; s < n_sa.size(); ++s)
    for (long n : n_sa[s]) v[s].push_back(static_cast<double>(n));
  return v;
}

Tensor empirical_model(const CountsTable& counts) {
  Tensor p(counts.n_sas.size());
  for (std::size_t s = 0; s < counts.n_sas.size(); ++s)
    for (std::size_t k = 0; k < counts.n_sas[s].size(); ++k) {
      const auto& row = counts.n_sas[s][k];
      const double denom = static_cast<double>(std::max<long>(counts.n_sa[s][k], 1));
      Vec r(row.size() - 1);
      for (std::size_t t = 0; t + 1 < row.size(); ++t) r[t] = static_cast<double>(row[t]) / denom;
      p[s].push_back(std::move(r));
    }
  return p;
}

void validate_config(const LearnerConfig& config) {
  if (!(config.delta > 0.0 && config.delta < 1.0)) fail(Errc::Validation, "delta must lie in (0,1)");
  if (config.num_episodes < 1) fail(Errc::Validation, "num_episodes must be at least 1");
  if (!(config.b_star > 0.0)) fail(Errc::Validation, "b_star must be positive");
  if (config.epsilon_schedule != "l1-default" && config.epsilon_schedule != "zero")
    fail(Errc::Validation, "unknown epsilon schedule '" + config.epsilon_schedule + "'");
}

double default_l1_radius(double visits, int num_states, int num_actions, double delta) {
  const double n = std::max(1.0, visits);
  const double r = std::sqrt(2.0 * (num_states + 1) * std::log(2.0 * num_states * num_actions * n / delta) / n);
  return std::min(r, 2.0);
}

SaTable epsilon_schedule(const SspInstance& shape, const CountsTable& counts, const LearnerConfig& config) {
  SaTable eps(shape.num_states);
  for (int s = 0; s < shape.num_states; ++s)
    for (int k = 0; k < shape.num_actions(s); ++k) {
      double e = 0.0;
      if (config.fixed_epsilon) {
        e = *config.fixed_epsilon;
      } else if (config.epsilon_schedule == "l1-default") {
        e = default_l1_radius(static_cast<double>(counts.n_sa[s][k]), shape.num_states, shape.max_actions(),
                              config.delta);
      }
      eps[s].push_back(e);
    }
  return eps;
}

double optimal_initial_value(const SspInstance& truth) {
  return policy_iteration(truth, find_proper_policy(truth)).values[truth.initial_state];
}

namespace {

Policy plan(const SspInstance& truth, const CountsTable& counts, const LearnerConfig& config, long episode) {
  const Tensor p_hat = empirical_model(counts);
  const SaTable eps = epsilon_schedule(truth, counts, config);
  const ConfidenceSet conf =
      config.use_star ? make_confidence_set(DivergenceKind::L1, p_hat, eps, Modification::Star, counts.visits())
                      : make_confidence_set(DivergenceKind::L1, p_hat, eps);
  try {
    if (config.planner == LearnerPlanner::ExactEvi) {
      EviOptions opts;
      opts.tol = config.evi_tol;
      opts.value_cap = config.b_star;
      return extended_value_iteration(truth, conf, opts).policy;
    }
    DaggerOptions opts;
    opts.tol = config.evi_tol;
    const FixedPointResult fp = iterate_dagger0(truth, conf, BoundVariant::L1Dagger, Vec(truth.num_states, 0.0), opts);
    Vec x = fp.point;
    for (double& v : x) v = std::min(v, config.b_star);
    return dagger_greedy(truth, conf, BoundVariant::L1Dagger, x);
  } catch (const Error& err) {
    fail(Errc::PlanningFailed, "planning failed in episode " + std::to_string(episode) + ": " + err.what());
  }
}

void push_episode(RegretTrace& trace, double cost, long length) {
  const double prev = trace.cumulative_regret.empty() ? 0.0 : trace.cumulative_regret.back();
  trace.per_episode_cost.push_back(cost);
  trace.episode_lengths.push_back(length);
  trace.cumulative_regret.push_back(prev + cost - trace.optimal_value);
}

}  // namespace

LearnerResult run_evi_learner(const SspInstance& truth, const LearnerConfig& config) {
  validate_config(config);
  LearnerResult out;
  out.trace.optimal_value = optimal_initial_value(truth);
  out.counts = config.initial_counts ? *config.initial_counts : CountsTable::zeros(truth);
  Rng rng(config.seed);
  std::vector<std::vector<long>> at_plan = out.counts.n_sa;
  Policy pi = plan(truth, out.counts, config, 0);
  ++out.trace.replans;
  for (long episode = 0; episode < config.num_episodes; ++episode) {
    int s = truth.initial_state;
    double cost = 0.0;
    long steps = 0;
    for (;;) {
      if (steps >= config.episode_step_cap) {
        ++out.trace.cap_hits;
        break;
      }
      const int k = pi[s];
      const StepOutcome step = simulate_step(truth, s, k, rng);
      out.counts.record(s, k, step.next_state);
      cost += step.cost;
      ++steps;
      if (step.next_state < 0) break;
      if (out.counts.n_sa[s][k] >= 2 * std::max<long>(1, at_plan[s][k])) {
        at_plan = out.counts.n_sa;
        pi = plan(truth, out.counts, config, episode);
        ++out.trace.replans;
      }
      s = step.next_state;
    }
    push_episode(out.trace, cost, steps);
    at_plan = out.counts.n_sa;
    pi = plan(truth, out.counts, config, episode + 1);
    ++out.trace.replans;
  }
  out.final_policy = pi;
  return out;
}

RegretTrace run_greedy_baseline(const SspInstance& truth, double epsilon_explore, long num_episodes,
                                std::uint64_t seed, long episode_step_cap) {
  if (!(epsilon_explore >= 0.0 && epsilon_explore < 1.0))
    fail(Errc::Validation, "epsilon_explore must lie in [0,1)");
  try {
    contraction_certificate(truth);
  } catch (const Error&) {
    fail(Errc::ImproperRisk, "greedy baseline needs every policy to be proper");
  }
  RegretTrace trace;
  trace.optimal_value = optimal_initial_value(truth);
  Rng rng(seed);
  for (long episode = 0; episode < num_episodes; ++episode) {
    int s = truth.initial_state;
    double cost = 0.0;
    long steps = 0;
    for (;;) {
      if (steps >= episode_step_cap) {
        ++trace.cap_hits;
        break;
      }
      int k = 0;
      if (uniform01(rng) < epsilon_explore) {
        k = std::min(static_cast<int>(uniform01(rng) * truth.num_actions(s)), truth.num_actions(s) - 1);
      } else {
        for (int j = 1; j < truth.num_actions(s); ++j)
          if (truth.cost[s][j] < truth.cost[s][k]) k = j;
      }
      const StepOutcome step = simulate_step(truth, s, k, rng);
      cost += step.cost;
      ++steps;
      if (step.next_state < 0) break;
      s = step.next_state;
    }
    push_episode(trace, cost, steps);
  }
  return trace;
}

}  // namespace ssp
