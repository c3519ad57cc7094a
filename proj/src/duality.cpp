#include "ssp/duality.hpp"

#include <cmath>

#include "ssp/evi.hpp"

namespace ssp {

bool check_superharmonic(const SspInstance& inst, const Vec& x, const std::optional<ConfidenceSet>& conf) {
  if (conf && !has_exact_cb_min(conf->kind))
    fail(Errc::UnsupportedDivergence, "superharmonic check needs an exact CB_min for " + to_string(conf->kind));
  for (int s = 0; s < inst.num_states; ++s)
    for (int k = 0; k < inst.num_actions(s); ++k) {
      const Vec& row = conf ? conf->center[s][k] : inst.trans[s][k];
      const double bonus = conf ? cb_min_exact(*conf, s, k, x).value : 0.0;
      if (x[s] > inst.cost[s][k] + dot(row, x) + bonus + 1e-9) return false;
    }
  return true;
}

OccupancyMeasure occupancy_from_policy(const SspInstance& inst, const Policy& pi) {
  if (!is_proper(inst, pi)) fail(Errc::ImproperPolicy, "occupancy measure needs a proper policy");
  const PolicyMatrices pm = policy_matrices(inst, pi);
  const int n = inst.num_states;
  const Eigen::MatrixXd a = (Eigen::MatrixXd::Identity(n, n) - pm.p_matrix).transpose();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible()) fail(Errc::SingularSystem, "I - P_pi is singular");
  const Eigen::VectorXd visits = lu.solve(Eigen::VectorXd::Ones(n));
  OccupancyMeasure q(n);
  for (int s = 0; s < n; ++s) {
    q[s].assign(inst.num_actions(s), 0.0);
    q[s][pi[s]] = visits(s);
  }
  return q;
}

double flow_residual(const SspInstance& inst, const OccupancyMeasure& q) {
  double worst = 0.0;
  for (int s = 0; s < inst.num_states; ++s) {
    double inflow = 1.0;
    for (int t = 0; t < inst.num_states; ++t)
      for (int k = 0; k < inst.num_actions(t); ++k) inflow += q[t][k] * inst.trans[t][k][s];
    worst = std::max(worst, std::abs(sum_of(q[s]) - inflow));
  }
  return worst;
}

StochasticPolicy occupancy_to_policy(const SspInstance& inst, const OccupancyMeasure& q) {
  if (q.size() != static_cast<std::size_t>(inst.num_states))
    fail(Errc::InvalidOccupancy, "occupancy measure has the wrong shape");
  for (int s = 0; s < inst.num_states; ++s) {
    if (q[s].size() != static_cast<std::size_t>(inst.num_actions(s)))
      fail(Errc::InvalidOccupancy, "occupancy measure has the wrong shape");
    for (double v : q[s])
      if (v < 0.0) fail(Errc::InvalidOccupancy, "occupancy entries must be nonnegative");
  }
  if (flow_residual(inst, q) > 1e-6) fail(Errc::InvalidOccupancy, "flow constraints violated");
  StochasticPolicy pi(inst.num_states);
  for (int s = 0; s < inst.num_states; ++s) {
    const double total = sum_of(q[s]);
    for (double v : q[s]) pi[s].push_back(v / total);
  }
  return pi;
}

double dual_objective(const SspInstance& inst, const OccupancyMeasure& q) {
  double v = 0.0;
  for (int s = 0; s < inst.num_states; ++s) v += dot(q[s], inst.cost[s]);
  return v;
}

DualityReport duality_gap(const SspInstance& inst, const std::optional<ConfidenceSet>& conf) {
  DualityReport r;
  SspInstance model = inst;
  if (!conf) {
    const PlanResult vi = value_iteration(inst, 1e-12);
    r.values = vi.values;
    r.policy = vi.policy;
  } else {
    if (!has_exact_cb_min(conf->kind))
      fail(Errc::UnsupportedDivergence, "duality gap needs an exact CB_min for " + to_string(conf->kind));
    EviOptions opts;
    opts.tol = 1e-12;
    const PlanResult evi = extended_value_iteration(inst, *conf, opts);
    r.values = evi.values;
    // The optimistic model fixes every row at its minimiser for the optimum.
    const OptimisticStep step = apply_U_hat(inst, *conf, evi.values);
    r.policy = step.policy;
    model.trans = step.rows;
  }
  r.primal = sum_of(r.values);
  r.dual = dual_objective(model, occupancy_from_policy(model, r.policy));
  r.gap = std::abs(r.primal - r.dual);
  return r;
}

SandwichReport sandwich_check(const SspInstance& inst, const ConfidenceSet& conf, double tol) {
  SandwichReport r;
  const SspInstance centre = with_center(inst, conf);
  r.upper = value_iteration(centre, tol).values;
  EviOptions opts;
  opts.tol = tol;
  r.optimistic = extended_value_iteration(inst, conf, opts).values;
  r.lower = r.upper;
  for (int s = 0; s < inst.num_states; ++s) {
    double most_negative = 0.0;
    for (int k = 0; k < inst.num_actions(s); ++k)
      most_negative = std::min(most_negative, cb_min_exact(conf, s, k, r.upper).value);
    r.lower[s] += most_negative;
  }
  const double slack = 1e-8;
  r.upper_holds = r.lower_holds = true;
  for (int s = 0; s < inst.num_states; ++s) {
    if (r.lower[s] > r.optimistic[s] + slack) r.lower_holds = false;
    if (r.optimistic[s] > r.upper[s] + slack) r.upper_holds = false;
  }
  r.holds = r.upper_holds && r.lower_holds;
  return r;
}

}  // namespace ssp
