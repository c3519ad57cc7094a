#pragma once

#include <functional>

#include "ssp/divergence.hpp"
#include "ssp/evi.hpp"
#include "ssp/two_state.hpp"

namespace ssp {

struct RegionPattern {
  std::vector<int> positive_set;  // U: states strictly above their cost floor
  std::vector<int> floor_set;     // V: states sitting on their cost floor
  int argmax_state = 0;
  std::vector<std::vector<bool>> clamp_active;  // per (s,a)
};

struct ProgramSolution {
  Vec x;
  double objective = 0.0;
  RegionPattern region;
  std::vector<Vec> tied_maximizers;
  long patterns = 0;
  long vertices_checked = 0;
  bool used_grid_fallback = false;
};

constexpr long kVertexCapPerPattern = 100000;

ProgramSolution solve_dagger_program(const SspInstance& inst, const ConfidenceSet& conf, double tol = 1e-9);
double grid_program_oracle(const SspInstance& inst, const ConfidenceSet& conf, int resolution);

// Checks the clamped superharmonic constraints at x.
bool dagger_program_feasible(const SspInstance& inst, const ConfidenceSet& conf, const Vec& x, double tol);

using TwoStateSampler = std::function<TwoStateParams(Rng&)>;
TwoStateParams sample_two_state(Rng& rng);

enum class ConjectureOutcome { ConvergedAgree, OscillatingFixedPointAgrees, Disagreement };
std::string to_string(ConjectureOutcome outcome);

struct ConjectureEntry {
  TwoStateParams params;
  ConjectureOutcome outcome;
  FixedPointStatus status;
  std::string detail;
};

struct ConjectureSummary {
  long count = 0;
  long converged_agree = 0;
  long oscillating_fp_agree = 0;
  long disagreement = 0;
  long oscillating = 0;
  long max_iter = 0;
  std::vector<ConjectureEntry> disagreements;
  double oscillation_frequency() const { return count ? static_cast<double>(oscillating) / count : 0.0; }
};

ConjectureEntry evaluate_conjecture(const TwoStateParams& p);
ConjectureSummary conjecture_report(const TwoStateSampler& sampler, long count, std::uint64_t seed);

ConfidenceSet two_state_confidence(const TwoStateParams& p);

}  // namespace ssp
