#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "ssp/program.hpp"
#include "ssp/two_state.hpp"

using namespace ssp;

namespace {

const TwoStateParams kIterating{0.1, 0.89, 0.89, 0.1, 0.1, 0.9, 0.01, 0.01};
const TwoStateParams kOscillating{0.00001, 0.999, 0.999, 0.00001, 0.2, 0.1, 0.3, 0.1};

const ActivePiece& piece(const std::vector<ActivePiece>& pieces, PieceLabel label) {
  return *std::find_if(pieces.begin(), pieces.end(), [&](const ActivePiece& p) { return p.label == label; });
}

bool eigen_pair(const ActivePiece& p, double a, double b, double tol) {
  const double e0 = p.eigenvalues[0].real(), e1 = p.eigenvalues[1].real();
  return (std::abs(e0 - a) <= tol && std::abs(e1 - b) <= tol) || (std::abs(e0 - b) <= tol && std::abs(e1 - a) <= tol);
}

}  // namespace

TEST_CASE("pieces of the iterating example") {
  const std::vector<ActivePiece> pieces = enumerate_pieces(kIterating);
  CHECK(pieces.size() == 7);
  const ActivePiece& p2 = piece(pieces, PieceLabel::P2);
  CHECK(eigen_pair(p2, 0.6016, -1.3016, 1e-3));
  CHECK_FALSE(p2.is_contraction);
  CHECK(contraction_violation(kIterating));
  CHECK(pair_exclusivity_check(kIterating));
  CHECK(piece(pieces, PieceLabel::P1).in_active_region != p2.in_active_region);
}

TEST_CASE("pieces of the oscillation example") {
  const std::vector<ActivePiece> pieces = enumerate_pieces(kOscillating);
  // Under the labelling that makes P2 the expanding piece of the iterating
  // example, the expanding piece here is P1.
  CHECK(eigen_pair(piece(pieces, PieceLabel::P1), -1.0529, 0.85295, 1e-3));
  CHECK(piece(pieces, PieceLabel::P1).spectral_radius > 1.0);
}

TEST_CASE("zero radius pieces coincide with the centre") {
  const TwoStateParams p{0.2, 0.3, 0.4, 0.1, 0.0, 0.0, 0.5, 0.7};
  const std::vector<ActivePiece> pieces = enumerate_pieces(p);
  const ActivePiece& a = piece(pieces, PieceLabel::P1);
  const ActivePiece& b = piece(pieces, PieceLabel::P2);
  CHECK(a.matrix == b.matrix);
  CHECK(a.matrix[0][0] == doctest::Approx(0.2));
  CHECK(a.matrix[1][0] == doctest::Approx(0.4));
  CHECK(a.is_contraction);
  CHECK(b.is_contraction);
  CHECK_FALSE(contraction_violation({0.1, 0.89, 0.89, 0.1, 0.5, 0.2, 0.01, 0.01}));
}

TEST_CASE("fixed point procedure") {
  const ProcedureResult a = fixed_point_procedure(kIterating);
  CHECK(std::abs(a.candidate[0] - 0.019694135768511) <= 1e-9);
  CHECK(std::abs(a.candidate[1] - 0.010892287380350) <= 1e-9);

  const ProcedureResult wide = fixed_point_procedure({0.2, 0.3, 0.4, 0.1, 1.0, 1.5, 0.5, 0.7});
  CHECK(wide.label == PieceLabel::P0);
  CHECK(wide.candidate[0] == doctest::Approx(0.5));
  CHECK(wide.candidate[1] == doctest::Approx(0.7));

  const ProcedureResult osc = fixed_point_procedure(kOscillating);
  const Pt2 image = apply_two_state_dagger(kOscillating, osc.candidate);
  CHECK(std::abs(image[0] - osc.candidate[0]) <= 1e-8);
  CHECK(std::abs(image[1] - osc.candidate[1]) <= 1e-8);
}

TEST_CASE("symmetric instance has a diagonal fixed point") {
  const TwoStateParams p{0.3, 0.4, 0.4, 0.3, 0.2, 0.2, 0.5, 0.5};
  const ProcedureResult r = fixed_point_procedure(p);
  CHECK(r.candidate[0] == doctest::Approx(r.candidate[1]));
  CHECK(pair_exclusivity_check(p));
}

TEST_CASE("pair exclusivity over random draws") {
  Rng rng(51);
  long failures = 0;
  for (int i = 0; i < 10000; ++i) failures += !pair_exclusivity_check(sample_two_state(rng));
  CHECK(failures == 0);
}
