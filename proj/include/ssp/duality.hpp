#pragma once

#include <optional>

#include "ssp/divergence.hpp"
#include "ssp/planning.hpp"

namespace ssp {

// q(s,a) indexed [state][local action index].
using OccupancyMeasure = SaTable;
// pi(a|s) indexed [state][local action index].
using StochasticPolicy = SaTable;

constexpr double kFlowTol = 1e-8;

bool check_superharmonic(const SspInstance& inst, const Vec& x,
                         const std::optional<ConfidenceSet>& conf = std::nullopt);

OccupancyMeasure occupancy_from_policy(const SspInstance& inst, const Policy& pi);
double flow_residual(const SspInstance& inst, const OccupancyMeasure& q);
StochasticPolicy occupancy_to_policy(const SspInstance& inst, const OccupancyMeasure& q);
double dual_objective(const SspInstance& inst, const OccupancyMeasure& q);

struct DualityReport {
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
  Vec values;
  Policy policy;
};

DualityReport duality_gap(const SspInstance& inst, const std::optional<ConfidenceSet>& conf = std::nullopt);

struct SandwichReport {
  Vec lower;      // J* plus the most negative bonus at J*
  Vec optimistic; // fixed point of the optimistic operator
  Vec upper;      // J* at the centre
  bool upper_holds = false;  // optimistic <= upper
  bool lower_holds = false;  // lower <= optimistic; fails in general, reported for inspection
  bool holds = false;        // both
};

SandwichReport sandwich_check(const SspInstance& inst, const ConfidenceSet& conf, double tol = 1e-10);

}  // namespace ssp
