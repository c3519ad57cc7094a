#pragma once

#include "ssp/mdp_core.hpp"

namespace ssp {

struct GreedyResult {
  Vec values;
  Policy policy;
};

struct PlanResult {
  Vec values;
  Policy policy;
  long iterations = 0;
};

struct ContractionCertificate {
  double eta = 0.0;
  double gamma = 0.0;
  Vec omega;
  std::vector<std::vector<int>> partition;  // layers S_1..S_r, goal excluded
  bool eta_clamped = false;
};

Vec apply_L_pi(const SspInstance& inst, const Policy& pi, const Vec& x);

// Minimum over actions with ties going to the lowest local index.
GreedyResult apply_U(const SspInstance& inst, const Vec& x);

constexpr long kDefaultViMaxIter = 1000000;

PlanResult value_iteration(const SspInstance& inst, double tol, long max_iter = kDefaultViMaxIter);
PlanResult policy_iteration(const SspInstance& inst, const Policy& initial);

// A proper policy built by backward reachability from the goal.
Policy find_proper_policy(const SspInstance& inst);

ContractionCertificate contraction_certificate(const SspInstance& inst);
double weighted_sup_norm(const Vec& x, const Vec& omega);

}  // namespace ssp
