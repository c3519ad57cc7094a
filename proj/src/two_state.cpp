#include "ssp/two_state.hpp"

#include <cmath>

namespace ssp {

namespace {

constexpr double kBoxSlack = 1e-9;
constexpr double kRegionTol = 1e-9;

struct PieceShape {
  PieceLabel label;
  int argmax;                    // state holding max(x), or -1 for P0
  std::array<bool, 2> clamped;   // rows sent to zero by the max{., 0}
};

constexpr std::array<PieceShape, 7> kShapes{{
    {PieceLabel::P0, -1, {true, true}},
    {PieceLabel::P1, 0, {false, false}},
    {PieceLabel::P2, 1, {false, false}},
    {PieceLabel::P11, 0, {false, true}},
    {PieceLabel::P12, 0, {true, false}},
    {PieceLabel::P21, 1, {false, true}},
    {PieceLabel::P22, 1, {true, false}},
}};

Mat2 centre(const TwoStateParams& p) { return {{{p.p11, p.p12}, {p.p21, p.p22}}}; }

// Row s of the linear map x -> P x - eps_s x_m.
std::array<double, 2> shifted_row(const TwoStateParams& p, int s, int m) {
  const Mat2 c = centre(p);
  std::array<double, 2> row = c[s];
  row[m] -= s == 0 ? p.eps1 : p.eps2;
  return row;
}

Mat2 piece_matrix(const TwoStateParams& p, const PieceShape& shape) {
  Mat2 m{};
  if (shape.argmax < 0) return m;
  for (int s = 0; s < 2; ++s)
    if (!shape.clamped[s]) m[s] = shifted_row(p, s, shape.argmax);
  return m;
}

std::optional<Pt2> solve_fixed_point(const Mat2& m, const Pt2& c) {
  const double a = 1.0 - m[0][0], b = -m[0][1], cc = -m[1][0], d = 1.0 - m[1][1];
  const double det = a * d - b * cc;
  if (std::abs(det) < 1e-14) return std::nullopt;
  return Pt2{(d * c[0] - b * c[1]) / det, (a * c[1] - cc * c[0]) / det};
}

double pre_clamp(const TwoStateParams& p, int s, const Pt2& x) {
  const Mat2 c = centre(p);
  const double eps = s == 0 ? p.eps1 : p.eps2;
  return c[s][0] * x[0] + c[s][1] * x[1] - eps * std::max(x[0], x[1]);
}

bool in_region(const TwoStateParams& p, const PieceShape& shape, const Pt2& x) {
  if (shape.argmax >= 0 && x[shape.argmax] < x[1 - shape.argmax] - kRegionTol) return false;
  for (int s = 0; s < 2; ++s) {
    const double r = pre_clamp(p, s, x);
    if (shape.clamped[s] ? r > kRegionTol : r < -kRegionTol) return false;
  }
  return true;
}

}  // namespace

std::string to_string(PieceLabel label) {
  switch (label) {
    case PieceLabel::P0: return "P0";
    case PieceLabel::P1: return "P1";
    case PieceLabel::P2: return "P2";
    case PieceLabel::P11: return "P11";
    case PieceLabel::P12: return "P12";
    case PieceLabel::P21: return "P21";
    case PieceLabel::P22: return "P22";
  }
  return "?";
}

std::vector<ActivePiece> enumerate_pieces(const TwoStateParams& p) {
  const Pt2 c{p.c1, p.c2};
  std::vector<ActivePiece> out;
  for (const PieceShape& shape : kShapes) {
    ActivePiece piece;
    piece.label = shape.label;
    piece.matrix = piece_matrix(p, shape);
    const Mat2& m = piece.matrix;
    const double tr = m[0][0] + m[1][1];
    const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    const std::complex<double> root = std::sqrt(std::complex<double>(tr * tr / 4.0 - det, 0.0));
    piece.eigenvalues = {std::complex<double>(tr / 2.0) + root, std::complex<double>(tr / 2.0) - root};
    piece.spectral_radius = std::max(std::abs(piece.eigenvalues[0]), std::abs(piece.eigenvalues[1]));
    piece.is_contraction = piece.spectral_radius < 1.0 - 1e-12;
    piece.fixed_point = solve_fixed_point(m, c);
    piece.in_active_region = piece.fixed_point && in_region(p, shape, *piece.fixed_point);
    out.push_back(piece);
  }
  return out;
}

bool contraction_violation(const TwoStateParams& p) {
  return p.p11 + p.p22 < p.eps2 &&
         1.0 + p.p11 * (p.p22 - p.eps2) + p.p11 + p.p22 - p.eps2 < (p.p12 - p.eps1) * p.p21;
}

ProcedureResult fixed_point_procedure(const TwoStateParams& p) {
  ProcedureResult r;
  const auto upper = solve_fixed_point(centre(p), Pt2{p.c1, p.c2});
  if (!upper) fail(Errc::SingularSystem, "the centre policy has no finite value");
  r.upper = *upper;
  struct Survivor {
    PieceLabel label;
    Pt2 x;
  };
  std::vector<Survivor> survivors;
  for (const ActivePiece& piece : enumerate_pieces(p)) {
    if (!piece.fixed_point) {
      r.discarded.push_back({piece.label, "singular"});
      continue;
    }
    const Pt2& x = *piece.fixed_point;
    const bool in_box = x[0] >= p.c1 - kBoxSlack && x[1] >= p.c2 - kBoxSlack && x[0] <= r.upper[0] + kBoxSlack &&
                        x[1] <= r.upper[1] + kBoxSlack;
    if (!in_box) {
      r.discarded.push_back({piece.label, "outside box"});
      continue;
    }
    if (!piece.in_active_region) {
      r.discarded.push_back({piece.label, "not in active region"});
      continue;
    }
    survivors.push_back({piece.label, x});
  }
  if (survivors.empty()) fail(Errc::NoCandidate, "every piece was discarded");

  std::vector<Survivor> pool;
  for (const Survivor& sv : survivors)
    if (sv.label == PieceLabel::P1 || sv.label == PieceLabel::P2) pool.push_back(sv);
  if (pool.empty()) pool = survivors;
  const Survivor* best = &pool.front();
  for (const Survivor& sv : pool)
    if (sv.x[0] + sv.x[1] > best->x[0] + best->x[1]) best = &sv;
  r.label = best->label;
  r.candidate = best->x;
  for (const Survivor& sv : pool) {
    if (std::abs((sv.x[0] + sv.x[1]) - (best->x[0] + best->x[1])) > 1e-9) continue;
    r.tied.push_back(sv.label);
    if (std::abs(sv.x[0] - best->x[0]) > 1e-9 || std::abs(sv.x[1] - best->x[1]) > 1e-9) r.ambiguous = true;
  }
  if (pool.size() == 2 && pool[0].label != pool[1].label &&
      (std::abs(pool[0].x[0] - pool[1].x[0]) > 1e-9 || std::abs(pool[0].x[1] - pool[1].x[1]) > 1e-9) &&
      (pool[0].label == PieceLabel::P1 || pool[0].label == PieceLabel::P2) &&
      (pool[1].label == PieceLabel::P1 || pool[1].label == PieceLabel::P2))
    r.ambiguous = true;
  return r;
}

bool pair_exclusivity_check(const TwoStateParams& p) {
  const auto pieces = enumerate_pieces(p);
  auto find = [&](PieceLabel l) -> const ActivePiece& {
    for (const auto& piece : pieces)
      if (piece.label == l) return piece;
    return pieces.front();
  };
  const std::array<std::pair<PieceLabel, PieceLabel>, 3> pairs{{{PieceLabel::P1, PieceLabel::P2},
                                                               {PieceLabel::P11, PieceLabel::P21},
                                                               {PieceLabel::P12, PieceLabel::P22}}};
  for (const auto& [a, b] : pairs) {
    const ActivePiece& pa = find(a);
    const ActivePiece& pb = find(b);
    if (!pa.fixed_point || !pb.fixed_point) continue;
    if (!(pa.in_active_region && pb.in_active_region)) continue;
    auto on_diagonal = [](const Pt2& x) { return std::abs(x[0] - x[1]) <= 1e-9; };
    if (!(on_diagonal(*pa.fixed_point) && on_diagonal(*pb.fixed_point))) return false;
  }
  return true;
}

SspInstance two_state_instance(const TwoStateParams& p) {
  return make_instance({{p.c1}, {p.c2}}, {{{p.p11, p.p12}}, {{p.p21, p.p22}}});
}

Pt2 apply_two_state_dagger(const TwoStateParams& p, const Pt2& x) {
  return {p.c1 + std::max(pre_clamp(p, 0, x), 0.0), p.c2 + std::max(pre_clamp(p, 1, x), 0.0)};
}

}  // namespace ssp
