#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>

#include "ssp/common.hpp"
#include "ssp/mdp_core.hpp"

namespace ssp {

// A 2-state, single-action instance with per-row l1 radii.
struct TwoStateParams {
  double p11 = 0.0, p12 = 0.0, p21 = 0.0, p22 = 0.0;
  double eps1 = 0.0, eps2 = 0.0;
  double c1 = 0.0, c2 = 0.0;
};

enum class PieceLabel { P0, P1, P2, P11, P12, P21, P22 };
std::string to_string(PieceLabel label);

using Mat2 = std::array<std::array<double, 2>, 2>;
using Pt2 = std::array<double, 2>;

struct ActivePiece {
  PieceLabel label = PieceLabel::P0;
  Mat2 matrix{};
  std::optional<Pt2> fixed_point;
  std::array<std::complex<double>, 2> eigenvalues{};
  double spectral_radius = 0.0;
  bool is_contraction = false;
  bool in_active_region = false;
};

std::vector<ActivePiece> enumerate_pieces(const TwoStateParams& p);
bool contraction_violation(const TwoStateParams& p);

struct Discarded {
  PieceLabel label;
  std::string reason;
};

struct ProcedureResult {
  PieceLabel label = PieceLabel::P0;
  Pt2 candidate{};
  std::vector<Discarded> discarded;
  bool ambiguous = false;
  std::vector<PieceLabel> tied;
  Pt2 upper{};  // value of the fixed policy at the centre
};

ProcedureResult fixed_point_procedure(const TwoStateParams& p);
bool pair_exclusivity_check(const TwoStateParams& p);

// The single-action instance and matching l1 confidence set, as SSP objects.
SspInstance two_state_instance(const TwoStateParams& p);
Pt2 apply_two_state_dagger(const TwoStateParams& p, const Pt2& x);

}  // namespace ssp
