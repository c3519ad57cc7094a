#include "ssp/planning.hpp"

#include <cmath>
#include <set>

namespace ssp {

Vec apply_L_pi(const SspInstance& inst, const Policy& pi, const Vec& x) {
  check_policy(inst, pi);
  Vec y(inst.num_states);
  for (int s = 0; s < inst.num_states; ++s) y[s] = inst.cost[s][pi[s]] + dot(inst.trans[s][pi[s]], x);
  return y;
}

GreedyResult apply_U(const SspInstance& inst, const Vec& x) {
  GreedyResult r{Vec(inst.num_states), Policy(inst.num_states, 0)};
  for (int s = 0; s < inst.num_states; ++s) {
    double best = 0.0;
    for (int k = 0; k < inst.num_actions(s); ++k) {
      const double q = inst.cost[s][k] + dot(inst.trans[s][k], x);
      if (k == 0 || q < best) {
        best = q;
        r.policy[s] = k;
      }
    }
    r.values[s] = best;
  }
  return r;
}

PlanResult value_iteration(const SspInstance& inst, double tol, long max_iter) {
  if (!(tol > 0.0)) fail(Errc::InvalidArgument, "tol must be positive");
  Vec x(inst.num_states, 0.0);
  for (long it = 1; it <= max_iter; ++it) {
    GreedyResult g = apply_U(inst, x);
    const double change = sup_dist(g.values, x);
    x = std::move(g.values);
    if (change <= tol) return {x, apply_U(inst, x).policy, it};
  }
  fail(Errc::MaxIterExceeded, "value iteration hit max_iter=" + std::to_string(max_iter));
}

PlanResult policy_iteration(const SspInstance& inst, const Policy& initial) {
  check_policy(inst, initial);
  if (!is_proper(inst, initial)) fail(Errc::ImproperPolicy, "initial policy is improper");
  Policy pi = initial;
  Vec x = cost_to_go(inst, pi);
  std::set<Policy> seen{pi};
  for (long it = 1;; ++it) {
    GreedyResult g = apply_U(inst, x);
    // Keep the incumbent action on exact ties so the iteration cannot flip
    // between equally good actions.
    for (int s = 0; s < inst.num_states; ++s) {
      const double incumbent = inst.cost[s][pi[s]] + dot(inst.trans[s][pi[s]], x);
      if (incumbent <= g.values[s] + 1e-15) g.policy[s] = pi[s];
    }
    const Vec y = cost_to_go(inst, g.policy);
    if (sup_dist(y, x) <= 1e-12) return {y, g.policy, it};
    if (!seen.insert(g.policy).second)
      fail(Errc::CycleDetected, "policy iteration revisited a policy without improving");
    pi = g.policy;
    x = y;
  }
}

Policy find_proper_policy(const SspInstance& inst) {
  const int n = inst.num_states;
  Policy pi(n, -1);
  std::vector<bool> reached(n, false);
  bool grew = true;
  while (grew) {
    grew = false;
    for (int s = 0; s < n; ++s) {
      if (reached[s]) continue;
      for (int k = 0; k < inst.num_actions(s) && !reached[s]; ++k) {
        bool ok = inst.goal_mass(s, k) > kProperTol;
        for (int t = 0; t < n && !ok; ++t) ok = reached[t] && inst.trans[s][k][t] > kProperTol;
        if (ok) {
          pi[s] = k;
          reached[s] = true;
          grew = true;
        }
      }
    }
  }
  for (int s = 0; s < n; ++s)
    if (!reached[s]) fail(Errc::NoProperPolicy, "state " + std::to_string(s) + " cannot reach the goal");
  return pi;
}

ContractionCertificate contraction_certificate(const SspInstance& inst) {
  const int n = inst.num_states;
  ContractionCertificate cert;
  std::vector<int> layer_of(n, 0);  // 0 = unassigned; the goal is layer 0
  std::vector<bool> earlier(n, false);
  int assigned = 0;
  while (assigned < n) {
    std::vector<int> layer;
    for (int s = 0; s < n; ++s) {
      if (layer_of[s] != 0) continue;
      bool all_actions = true;
      for (int k = 0; k < inst.num_actions(s) && all_actions; ++k) {
        bool ok = inst.goal_mass(s, k) > 0.0;
        for (int t = 0; t < n && !ok; ++t) ok = earlier[t] && inst.trans[s][k][t] > 0.0;
        all_actions = ok;
      }
      if (all_actions) layer.push_back(s);
    }
    if (layer.empty()) fail(Errc::NotAllProper, "layer construction stalled: some policy is improper");
    const int q = static_cast<int>(cert.partition.size()) + 1;
    for (int s : layer) {
      layer_of[s] = q;
      earlier[s] = true;
    }
    assigned += static_cast<int>(layer.size());
    cert.partition.push_back(std::move(layer));
  }

  double eta = 1.0;
  for (int s = 0; s < n; ++s)
    for (int k = 0; k < inst.num_actions(s); ++k) {
      for (double p : inst.trans[s][k])
        if (p > 0.0) eta = std::min(eta, p);
      const double g = inst.goal_mass(s, k);
      if (g > 0.0) eta = std::min(eta, g);
    }
  if (eta >= 1.0) {
    eta = 1.0 - 1e-9;
    cert.eta_clamped = true;
  }
  const int r = static_cast<int>(cert.partition.size());
  cert.eta = eta;
  cert.gamma = (1.0 - std::pow(eta, 2 * r - 1)) / (1.0 - std::pow(eta, 2 * r));
  cert.omega.assign(n, 0.0);
  for (int s = 0; s < n; ++s) cert.omega[s] = 1.0 - std::pow(eta, 2 * layer_of[s]);
  return cert;
}

double weighted_sup_norm(const Vec& x, const Vec& omega) {
  double m = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i]) / omega[i]);
  return m;
}

}  // namespace ssp
