#pragma once

#include <optional>
#include <string>

#include "ssp/evi.hpp"

namespace ssp {

struct CountsTable {
  // Next-state counts per (s,a); the last slot counts arrivals at the goal.
  std::vector<std::vector<std::vector<long>>> n_sas;
  std::vector<std::vector<long>> n_sa;

  static CountsTable zeros(const SspInstance& inst);
  void record(int s, int k, int next_state);  // next_state -1 is the goal
  bool consistent() const;
  SaTable visits() const;
};

Tensor empirical_model(const CountsTable& counts);

enum class LearnerPlanner { ExactEvi, Dagger };

struct LearnerConfig {
  double delta = 0.1;
  double b_star = 10.0;
  long num_episodes = 100;
  LearnerPlanner planner = LearnerPlanner::ExactEvi;
  std::string epsilon_schedule = "l1-default";
  std::uint64_t seed = 1;
  bool use_star = true;
  double evi_tol = 1e-8;
  long episode_step_cap = 1000000;
  std::optional<CountsTable> initial_counts;
  std::optional<double> fixed_epsilon;  // overrides the schedule when set
};

void validate_config(const LearnerConfig& config);

// Registered schedules: "l1-default", "zero".
SaTable epsilon_schedule(const SspInstance& shape, const CountsTable& counts, const LearnerConfig& config);
double default_l1_radius(double visits, int num_states, int num_actions, double delta);

struct RegretTrace {
  Vec per_episode_cost;
  Vec cumulative_regret;
  std::vector<long> episode_lengths;
  double optimal_value = 0.0;
  long cap_hits = 0;
  long replans = 0;
};

struct LearnerResult {
  RegretTrace trace;
  Policy final_policy;
  CountsTable counts;
};

double optimal_initial_value(const SspInstance& truth);

LearnerResult run_evi_learner(const SspInstance& truth, const LearnerConfig& config);
RegretTrace run_greedy_baseline(const SspInstance& truth, double epsilon_explore, long num_episodes,
                                std::uint64_t seed, long episode_step_cap = 1000000);

}  // namespace ssp
