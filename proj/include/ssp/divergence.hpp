#pragma once

#include <optional>
#include <string>

#include "ssp/mdp_core.hpp"

namespace ssp {

enum class DivergenceKind { L1, SupNorm, KL, ReverseKL, ChiSquared, VarWeightedLinf };
enum class Modification { None, Star, Plus, PlusWithGoal };
enum class BoundVariant {
  L1Dagger,
  L1GoalSpan,
  SupDagger,
  KLPinsker,
  KLCumulant,
  KLHoeffding,
  ReverseKL,
  ChiSquared,
  VarWeightedLinf,
};

using Mask = std::vector<std::vector<std::vector<bool>>>;

struct ConfidenceSet {
  DivergenceKind kind = DivergenceKind::L1;
  Tensor center;
  SaTable radius;
  Modification modification = Modification::None;
  std::optional<SaTable> counts;
  // States whose unmodified centre entry was zero, per (s,a). Empty unless a
  // Plus modification produced the centre.
  Mask zero_mask;
  // Measure l1 distance over the states plus the goal entry.
  bool l1_goal_inclusive = false;

  bool is_plus() const {
    return modification == Modification::Plus || modification == Modification::PlusWithGoal;
  }
  bool operator==(const ConfidenceSet&) const = default;
};

struct ModifiedCenter {
  Tensor center;
  std::vector<std::vector<int>> zero_counts;
  Mask zero_mask;
};

ModifiedCenter modify_center(const Tensor& p_hat, const SaTable& counts, Modification mode);

double star_radius(double eps, double n);
double plus_l1_radius(double eps, double n, int z);
double plus_chi2_radius(double eps, double n, int z);

// Builds a confidence set around p_hat, applying the centre modification and
// the radius adjustment that belongs to the divergence kind.
ConfidenceSet make_confidence_set(DivergenceKind kind, const Tensor& p_hat, const SaTable& eps,
                                  Modification mode = Modification::None,
                                  const std::optional<SaTable>& counts = std::nullopt);

// Same radius everywhere.
SaTable uniform_radius(const SspInstance& inst, double eps);

struct CbResult {
  double value;
  Vec row;  // minimising transition row over the states
};

CbResult cb_min_exact(const ConfidenceSet& conf, int s, int k, const Vec& x);
double cb_min_grid_oracle(const ConfidenceSet& conf, int s, int k, const Vec& x, int resolution = 0);
int default_grid_resolution(int num_states);

double cb_bound(BoundVariant variant, const ConfidenceSet& conf, int s, int k, const Vec& x);
double clamp_dagger0(double bound_value, const Vec& p_hat_row, const Vec& x);

struct BoundDiagnostics {
  double mean = 0.0;
  double variance_plus = 0.0;
  double span_centered = 0.0;
  double sup_centered = 0.0;
  double threshold_f = 0.0;
  bool degenerate = false;
};

// Computed over the explicit-goal view (goal value 0, residual mass).
BoundDiagnostics bound_diagnostics(const ConfidenceSet& conf, int s, int k, const Vec& x);

bool has_exact_cb_min(DivergenceKind kind);
DivergenceKind variant_kind(BoundVariant variant);
bool variant_needs_plus(BoundVariant variant);
std::vector<BoundVariant> variants_for(DivergenceKind kind);

std::string to_string(DivergenceKind kind);
std::string to_string(Modification mode);
std::string to_string(BoundVariant variant);
DivergenceKind parse_divergence_kind(const std::string& text);
Modification parse_modification(const std::string& text);
BoundVariant parse_bound_variant(const std::string& text);

}  // namespace ssp
