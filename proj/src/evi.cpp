#include "ssp/evi.hpp"

#include <cmath>
#include <unordered_map>

namespace ssp {

SspInstance with_center(const SspInstance& inst, const ConfidenceSet& conf) {
  SspInstance out = inst;
  out.trans = conf.center;
  return out;
}

OptimisticStep apply_U_hat(const SspInstance& inst, const ConfidenceSet& conf, const Vec& x) {
  OptimisticStep r{Vec(inst.num_states), Policy(inst.num_states, 0), Tensor(inst.num_states)};
  for (int s = 0; s < inst.num_states; ++s) {
    double best = 0.0;
    for (int k = 0; k < inst.num_actions(s); ++k) {
      const CbResult cb = cb_min_exact(conf, s, k, x);
      const double q = inst.cost[s][k] + dot(conf.center[s][k], x) + cb.value;
      r.rows[s].push_back(cb.row);
      if (k == 0 || q < best) {
        best = q;
        r.policy[s] = k;
      }
    }
    r.values[s] = best;
  }
  return r;
}

PlanResult extended_value_iteration(const SspInstance& inst, const ConfidenceSet& conf, const EviOptions& opts) {
  if (!(opts.tol > 0.0)) fail(Errc::InvalidArgument, "tol must be positive");
  Vec x(inst.num_states, 0.0);
  for (long it = 1; it <= opts.max_iter; ++it) {
    OptimisticStep step = apply_U_hat(inst, conf, x);
    if (opts.value_cap)
      for (double& v : step.values) v = std::min(v, *opts.value_cap);
    const double change = sup_dist(step.values, x);
    x = std::move(step.values);
    if (change <= opts.tol) return {x, apply_U_hat(inst, conf, x).policy, it};
  }
  fail(Errc::MaxIterExceeded, "extended value iteration hit max_iter=" + std::to_string(opts.max_iter));
}

namespace {

double dagger_q(const SspInstance& inst, const ConfidenceSet& conf, BoundVariant variant, const Vec& x, int s,
                int k, Floor floor) {
  const double px = dot(conf.center[s][k], x);
  const double bound = cb_bound(variant, conf, s, k, x);
  if (floor == Floor::Cost) return inst.cost[s][k] + std::max(px + bound, 0.0);
  return std::max(inst.cost[s][k] + px + bound, 0.0);
}

}  // namespace

Vec apply_dagger0(const SspInstance& inst, const ConfidenceSet& conf, BoundVariant variant, const Vec& x,
                  const std::optional<Policy>& policy, Floor floor) {
  if (static_cast<int>(x.size()) != inst.num_states) fail(Errc::InvalidArgument, "x has the wrong length");
  for (double v : x)
    if (!std::isfinite(v)) fail(Errc::InvalidArgument, "x must be finite");
  if (policy) check_policy(inst, *policy);
  Vec y(inst.num_states);
  for (int s = 0; s < inst.num_states; ++s) {
    if (policy) {
      y[s] = dagger_q(inst, conf, variant, x, s, (*policy)[s], floor);
      continue;
    }
    double best = 0.0;
    for (int k = 0; k < inst.num_actions(s); ++k) {
      const double q = dagger_q(inst, conf, variant, x, s, k, floor);
      if (k == 0 || q < best) best = q;
    }
    y[s] = best;
  }
  return y;
}

Policy dagger_greedy(const SspInstance& inst, const ConfidenceSet& conf, BoundVariant variant, const Vec& x,
                     Floor floor) {
  Policy pi(inst.num_states, 0);
  for (int s = 0; s < inst.num_states; ++s) {
    double best = 0.0;
    for (int k = 0; k < inst.num_actions(s); ++k) {
      const double q = dagger_q(inst, conf, variant, x, s, k, floor);
      if (k == 0 || q < best) {
        best = q;
        pi[s] = k;
      }
    }
  }
  return pi;
}

std::string to_string(FixedPointStatus status) {
  switch (status) {
    case FixedPointStatus::Converged: return "Converged";
    case FixedPointStatus::Oscillating: return "Oscillating";
    case FixedPointStatus::MaxIter: return "MaxIter";
  }
  return "?";
}

namespace {

constexpr double kQuantum = 1e-9;

struct VecHash {
  std::size_t operator()(const std::vector<long long>& v) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (long long e : v) h = (h ^ static_cast<std::size_t>(e)) * 1099511628211ull;
    return h;
  }
};

std::vector<long long> quantize(const Vec& x) {
  std::vector<long long> q(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) q[i] = std::llround(x[i] / kQuantum);
  return q;
}

}  // namespace

FixedPointResult iterate_dagger0(const SspInstance& inst, const ConfidenceSet& conf, BoundVariant variant,
                                 const Vec& x0, const DaggerOptions& opts) {
  FixedPointResult r;
  const double match_tol = std::max(opts.tol, kQuantum);
  std::vector<Vec> history{x0};  // history[t] is the t-th iterate
  std::unordered_map<std::vector<long long>, long, VecHash> last_seen;
  last_seen[quantize(x0)] = 0;
  if (opts.keep_trace) r.trace.push_back(x0);
  Vec x = x0;
  for (long t = 1; t <= opts.max_iter; ++t) {
    Vec y = apply_dagger0(inst, conf, variant, x, opts.policy, opts.floor);
    if (opts.keep_trace) r.trace.push_back(y);
    r.iterations = t;
    if (sup_dist(y, x) <= opts.tol) {
      r.status = FixedPointStatus::Converged;
      r.point = y;
      return r;
    }
    const auto key = quantize(y);
    auto it = last_seen.find(key);
    if (it != last_seen.end()) {
      const long j = it->second;
      const long period = t - j;
      if (period >= 2 && period <= opts.cycle_window && sup_dist(y, history[j]) <= match_tol) {
        r.status = FixedPointStatus::Oscillating;
        r.cycle.assign(history.begin() + j, history.end());
        r.point = y;
        return r;
      }
    }
    last_seen[key] = t;
    history.push_back(y);
    x = std::move(y);
  }
  r.status = FixedPointStatus::MaxIter;
  r.point = x;
  return r;
}

}  // namespace ssp
