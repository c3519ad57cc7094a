#pragma once

#include <Eigen/Dense>
#include <random>

#include "ssp/common.hpp"

namespace ssp {

// Finite SSP with an implicit goal: each transition row is substochastic and
// the missing mass goes to the goal. Actions are referred to internally by
// their local index k into actions[s]; action_ids carries the external labels.
struct SspInstance {
  int num_states = 0;
  int initial_state = 0;
  std::vector<std::vector<int>> action_ids;
  SaTable cost;
  Tensor trans;

  int num_actions(int s) const { return static_cast<int>(action_ids[s].size()); }
  int max_actions() const;
  int total_pairs() const;
  double goal_mass(int s, int k) const;
  int local_index(int s, int action_id) const;  // -1 when absent
  double min_cost(int s) const;
  Vec min_cost_vector() const;

  // Throws Errc::Validation describing the first violated invariant.
  void validate() const;

  bool operator==(const SspInstance&) const = default;
};

// Builds and validates an instance where every state has actions 0..A(s)-1.
SspInstance make_instance(const SaTable& cost, const Tensor& trans, int initial_state = 0);

// Local action index per state.
using Policy = std::vector<int>;

struct PolicyMatrices {
  Eigen::MatrixXd p_matrix;
  Eigen::VectorXd c_vector;
};

constexpr double kProperTol = 1e-12;
constexpr double kMinCost = 1e-9;

PolicyMatrices policy_matrices(const SspInstance& inst, const Policy& pi);
void check_policy(const SspInstance& inst, const Policy& pi);

bool is_proper(const SspInstance& inst, const Policy& pi);
Vec cost_to_go(const SspInstance& inst, const Policy& pi);
double spectral_radius(const Eigen::MatrixXd& m);

// Explicit-goal view of a row: the states followed by the goal entry.
Vec with_goal(const Vec& row);

using Rng = std::mt19937_64;
double uniform01(Rng& rng);

struct StepOutcome {
  int next_state;  // -1 means the goal was reached
  double cost;
};
StepOutcome simulate_step(const SspInstance& inst, int s, int k, Rng& rng);

// Every stationary deterministic policy, in lexicographic order.
std::vector<Policy> enumerate_policies(const SspInstance& inst);

}  // namespace ssp
