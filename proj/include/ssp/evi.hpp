#pragma once

#include <optional>

#include "ssp/divergence.hpp"
#include "ssp/planning.hpp"

namespace ssp {

struct OptimisticStep {
  Vec values;
  Policy policy;
  Tensor rows;  // minimising row per (s,a)
};

OptimisticStep apply_U_hat(const SspInstance& inst, const ConfidenceSet& conf, const Vec& x);

struct EviOptions {
  double tol = 1e-10;
  long max_iter = 1000000;
  std::optional<double> value_cap;  // clip iterates from above
};

PlanResult extended_value_iteration(const SspInstance& inst, const ConfidenceSet& conf,
                                    const EviOptions& opts = {});

enum class Floor { Cost, Zero };

// Clamped optimistic operator; a policy restricts it to that policy's actions.
Vec apply_dagger0(const SspInstance& inst, const ConfidenceSet& conf, BoundVariant variant, const Vec& x,
                  const std::optional<Policy>& policy = std::nullopt, Floor floor = Floor::Cost);

// Greedy policy of the dagger operator at x.
Policy dagger_greedy(const SspInstance& inst, const ConfidenceSet& conf, BoundVariant variant, const Vec& x,
                     Floor floor = Floor::Cost);

enum class FixedPointStatus { Converged, Oscillating, MaxIter };
std::string to_string(FixedPointStatus status);

struct FixedPointResult {
  FixedPointStatus status = FixedPointStatus::MaxIter;
  Vec point;
  std::vector<Vec> cycle;
  long iterations = 0;
  std::vector<Vec> trace;
};

struct DaggerOptions {
  double tol = 1e-10;
  long max_iter = 100000;
  int cycle_window = 64;
  bool keep_trace = false;
  Floor floor = Floor::Cost;
  std::optional<Policy> policy;
};

FixedPointResult iterate_dagger0(const SspInstance& inst, const ConfidenceSet& conf, BoundVariant variant,
                                 const Vec& x0, const DaggerOptions& opts = {});

// Instance whose rows are the confidence-set centre.
SspInstance with_center(const SspInstance& inst, const ConfidenceSet& conf);

}  // namespace ssp
