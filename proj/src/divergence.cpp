#include "ssp/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ssp/math_kernels.hpp"

namespace ssp {

namespace {

constexpr double kZero = 1e-15;
constexpr double kFeasTol = 1e-12;

std::vector<int> states_by_value_desc(const Vec& x) {
  std::vector<int> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return x[a] > x[b]; });
  return order;
}

// Removes up to `amount` of mass from the states in decreasing-x order,
// skipping `except`; returns the amount actually removed.
double remove_mass(Vec& row, const Vec& x, double amount, int except) {
  double removed = 0.0;
  for (int i : states_by_value_desc(x)) {
    if (i == except || removed >= amount) continue;
    const double take = std::min(row[i], amount - removed);
    row[i] -= take;
    removed += take;
  }
  return removed;
}

CbResult l1_exact(const ConfidenceSet& conf, const Vec& p, double eps, const Vec& x) {
  const int n = static_cast<int>(p.size());
  const double base = dot(p, x);
  // Goal sink: mass leaves the states for the goal.
  Vec best_row = p;
  remove_mass(best_row, x, conf.l1_goal_inclusive ? eps / 2.0 : eps, -1);
  double best = dot(best_row, x) - base;
  // State sinks: mass moves onto state j from the others (or from the goal).
  const double goal = std::max(0.0, 1.0 - sum_of(p));
  for (int j = 0; j < n; ++j) {
    double delta = std::min(eps / 2.0, 1.0 - p[j]);
    if (delta <= 0.0) continue;
    Vec row = p;
    const double removed = remove_mass(row, x, delta, j);
    const double from_goal = std::min(delta - removed, goal);
    delta = removed + from_goal;
    row[j] += delta;
    const double v = dot(row, x) - base;
    if (v < best) {
      best = v;
      best_row = row;
    }
  }
  return {std::min(best, 0.0), best_row};
}

CbResult sup_exact(const Vec& p, double eps, const Vec& x) {
  CbResult r{0.0, p};
  for (std::size_t i = 0; i < p.size(); ++i) {
    r.row[i] = std::max(p[i] - eps, 0.0);
    r.value += std::max(-eps * x[i], -p[i] * x[i]);
  }
  return r;
}

// min <q,x> over KL(q || p) <= eps via the one-dimensional dual
// sup_lambda -lambda log E_p exp(-x/lambda) - lambda eps on the explicit-goal view.
CbResult kl_exact(const Vec& p_row, double eps, const Vec& x_states) {
  const Vec p = with_goal(p_row);
  Vec x = x_states;
  x.push_back(0.0);
  const double base = dot(p, x);
  double m = std::numeric_limits<double>::infinity();
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] > 0.0) {
      m = std::min(m, x[i]);
      top = std::max(top, x[i]);
    }
  if (eps <= 0.0 || top - m <= 0.0) return {0.0, p_row};

  auto dual = [&](double t) {
    const double lambda = std::exp(t);
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
      if (p[i] > 0.0) acc += p[i] * std::exp(-(x[i] - m) / lambda);
    return m - lambda * std::log(acc) - lambda * eps;
  };
  double lo = -30.0, hi = 30.0;
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = hi - phi * (hi - lo), b = lo + phi * (hi - lo);
  double fa = dual(a), fb = dual(b);
  for (int it = 0; it < 200 && hi - lo > 1e-10; ++it) {
    if (fa < fb) {
      lo = a;
      a = b;
      fa = fb;
      b = lo + phi * (hi - lo);
      fb = dual(b);
    } else {
      hi = b;
      b = a;
      fb = fa;
      a = hi - phi * (hi - lo);
      fa = dual(a);
    }
  }
  double t_best = (lo + hi) / 2.0;
  double v_best = dual(t_best);
  for (double t : {-30.0, 30.0}) {
    const double v = dual(t);
    if (v > v_best) {
      v_best = v;
      t_best = t;
    }
  }
  const double lambda = std::exp(t_best);
  Vec tilt(p.size(), 0.0);
  double z = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] > 0.0) {
      tilt[i] = p[i] * std::exp(-(x[i] - m) / lambda);
      z += tilt[i];
    }
  Vec row(p_row.size());
  for (std::size_t i = 0; i < row.size(); ++i) row[i] = tilt[i] / z;
  return {std::min(v_best - base, 0.0), row};
}

double kl_div(const Vec& q, const Vec& p) {
  double d = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] <= 0.0) continue;
    if (p[i] <= 0.0) return std::numeric_limits<double>::infinity();
    d += q[i] * std::log(q[i] / p[i]);
  }
  return d;
}

void check_index(const ConfidenceSet& conf, int s, int k, const Vec& x) {
  if (s < 0 || s >= static_cast<int>(conf.center.size()) || k < 0 ||
      k >= static_cast<int>(conf.center[s].size()))
    fail(Errc::InvalidArgument, "state-action pair out of range");
  if (x.size() != conf.center[s][k].size()) fail(Errc::InvalidArgument, "x has the wrong length");
}

}  // namespace

ModifiedCenter modify_center(const Tensor& p_hat, const SaTable& counts, Modification mode) {
  ModifiedCenter out{p_hat, {}, {}};
  out.zero_counts.resize(p_hat.size());
  out.zero_mask.resize(p_hat.size());
  for (std::size_t s = 0; s < p_hat.size(); ++s) {
    for (std::size_t k = 0; k < p_hat[s].size(); ++k) {
      const Vec& row = p_hat[s][k];
      const double n = counts.at(s).at(k);
      if (n < 0.0) fail(Errc::InvalidArgument, "counts must be nonnegative");
      Vec& dst = out.center[s][k];
      const double goal = 1.0 - sum_of(row);
      std::vector<bool> mask(row.size(), false);
      int z = 0;
      if (mode == Modification::Star) {
        if (goal <= kZero) {
          z = 1;
          for (double& v : dst) v *= n / (n + 1.0);
        }
      } else if (mode == Modification::Plus || mode == Modification::PlusWithGoal) {
        for (std::size_t i = 0; i < row.size(); ++i)
          if (row[i] <= kZero) {
            mask[i] = true;
            ++z;
          }
        if (mode == Modification::PlusWithGoal && goal <= kZero) ++z;
        if (z > 0) {
          if (n <= 0.0) fail(Errc::ZeroCounts, "Plus modification needs n(s,a) >= 1");
          for (std::size_t i = 0; i < row.size(); ++i)
            dst[i] = mask[i] ? 1.0 / (n + z) : row[i] * n / (n + z);
        }
      }
      out.zero_counts[s].push_back(z);
      out.zero_mask[s].push_back(mask);
    }
  }
  return out;
}

double star_radius(double eps, double n) { return eps + 1.0 / (1.0 + n); }

double plus_l1_radius(double eps, double n, int z) {
  if (z == 0) return eps;
  return eps + (2.0 * z - 1.0) / (z + n);
}

double plus_chi2_radius(double eps, double n, int z) {
  if (z == 0) return eps;
  if (n <= 0.0) fail(Errc::ZeroCounts, "chi-squared radius needs n(s,a) >= 1");
  return (1.0 + z / n) * eps + (n + z) / (n * n) + static_cast<double>(z) * z / (n * (n + z)) +
         static_cast<double>(z) / (n + z);
}

ConfidenceSet make_confidence_set(DivergenceKind kind, const Tensor& p_hat, const SaTable& eps,
                                  Modification mode, const std::optional<SaTable>& counts) {
  ConfidenceSet conf;
  conf.kind = kind;
  conf.center = p_hat;
  conf.radius = eps;
  conf.modification = mode;
  conf.counts = counts;
  for (const auto& r : eps)
    for (double e : r)
      if (!(e >= 0.0)) fail(Errc::Validation, "radius must be nonnegative");
  if (mode == Modification::None) return conf;
  if (!counts) fail(Errc::Validation, "a centre modification needs counts");
  const ModifiedCenter mc = modify_center(p_hat, *counts, mode);
  conf.center = mc.center;
  if (conf.is_plus()) conf.zero_mask = mc.zero_mask;
  for (std::size_t s = 0; s < p_hat.size(); ++s)
    for (std::size_t k = 0; k < p_hat[s].size(); ++k) {
      const double n = (*counts)[s][k];
      const int z = mc.zero_counts[s][k];
      double& e = conf.radius[s][k];
      if (mode == Modification::Star) {
        e = star_radius(e, n);
      } else if (kind == DivergenceKind::L1 || kind == DivergenceKind::SupNorm) {
        e = plus_l1_radius(e, n, z);
      } else if (kind == DivergenceKind::ChiSquared) {
        e = plus_chi2_radius(e, n, z);
      }
    }
  return conf;
}

SaTable uniform_radius(const SspInstance& inst, double eps) {
  SaTable r(inst.num_states);
  for (int s = 0; s < inst.num_states; ++s) r[s].assign(inst.num_actions(s), eps);
  return r;
}

bool has_exact_cb_min(DivergenceKind kind) {
  return kind == DivergenceKind::L1 || kind == DivergenceKind::SupNorm || kind == DivergenceKind::KL;
}

CbResult cb_min_exact(const ConfidenceSet& conf, int s, int k, const Vec& x) {
  check_index(conf, s, k, x);
  if (!has_exact_cb_min(conf.kind))
    fail(Errc::UnsupportedDivergence, to_string(conf.kind) + " has no exact CB_min; use the grid oracle");
  for (double v : x)
    if (v < 0.0) fail(Errc::NonNegativityViolated, "cb_min_exact needs x >= 0");
  const Vec& p = conf.center[s][k];
  const double eps = conf.radius[s][k];
  if (eps <= 0.0) return {0.0, p};
  switch (conf.kind) {
    case DivergenceKind::L1: return l1_exact(conf, p, eps, x);
    case DivergenceKind::SupNorm: return sup_exact(p, eps, x);
    default: return kl_exact(p, eps, x);
  }
}

int default_grid_resolution(int num_states) { return num_states <= 2 ? 200 : 60; }

double cb_min_grid_oracle(const ConfidenceSet& conf, int s, int k, const Vec& x, int resolution) {
  check_index(conf, s, k, x);
  const int n = static_cast<int>(x.size());
  if (n > 3) fail(Errc::TooManyStates, "grid oracle supports at most 3 states");
  const int res = resolution > 0 ? resolution : default_grid_resolution(n);
  const Vec& p = conf.center[s][k];
  const double eps = conf.radius[s][k];
  const Vec pg = with_goal(p);
  const double base = dot(p, x);
  const bool aux = conf.is_plus() && conf.counts && !conf.zero_mask.empty();
  const double n_visits = aux ? (*conf.counts)[s][k] : 0.0;
  const std::vector<bool> no_mask(n, false);
  const std::vector<bool>& s0 = aux ? conf.zero_mask[s][k] : no_mask;

  auto feasible = [&](const Vec& q) {
    switch (conf.kind) {
      case DivergenceKind::L1: {
        double d = 0.0;
        for (int i = 0; i < n; ++i) d += std::abs(q[i] - p[i]);
        if (conf.l1_goal_inclusive) d += std::abs((1.0 - sum_of(q)) - pg[n]);
        return d <= eps + kFeasTol;
      }
      case DivergenceKind::SupNorm:
        for (int i = 0; i < n; ++i)
          if (std::abs(q[i] - p[i]) > eps + kFeasTol) return false;
        return true;
      case DivergenceKind::KL: return kl_div(with_goal(q), pg) <= eps + kFeasTol;
      case DivergenceKind::ReverseKL: return kl_div(pg, with_goal(q)) <= eps + kFeasTol;
      case DivergenceKind::ChiSquared:
      case DivergenceKind::VarWeightedLinf: {
        double total = 0.0, worst = 0.0, aux_sum = 0.0;
        for (int i = 0; i < n; ++i) {
          const double diff = q[i] - p[i];
          if (p[i] <= 0.0) {
            if (q[i] > 0.0) return false;
            continue;
          }
          const double term = diff * diff / p[i];
          total += term;
          worst = std::max(worst, term);
          if (s0[i]) aux_sum += q[i] * q[i];
        }
        if (aux && n_visits > 0.0 && aux_sum > 1.0 / (n_visits * n_visits) + kFeasTol) return false;
        const double d = conf.kind == DivergenceKind::ChiSquared ? total : worst;
        return d <= eps + kFeasTol;
      }
    }
    return false;
  };

  double best = 0.0;  // the centre itself is always feasible
  Vec q(n, 0.0);
  std::vector<int> idx(n, 0);
  for (;;) {
    int used = 0;
    for (int i = 0; i < n; ++i) used += idx[i];
    if (used <= res) {
      for (int i = 0; i < n; ++i) q[i] = static_cast<double>(idx[i]) / res;
      if (feasible(q)) best = std::min(best, dot(q, x) - base);
    }
    int d = n - 1;
    while (d >= 0 && ++idx[d] > res) idx[d--] = 0;
    if (d < 0) break;
  }
  return best;
}

double clamp_dagger0(double bound_value, const Vec& p_hat_row, const Vec& x) {
  return std::max(bound_value, -dot(p_hat_row, x));
}

BoundDiagnostics bound_diagnostics(const ConfidenceSet& conf, int s, int k, const Vec& x) {
  check_index(conf, s, k, x);
  const Vec p = with_goal(conf.center[s][k]);
  Vec xg = x;
  xg.push_back(0.0);
  BoundDiagnostics d;
  d.mean = dot(p, xg);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    const double c = xg[i] - d.mean;
    d.variance_plus += p[i] * c * c;
    d.sup_centered = std::max(d.sup_centered, std::abs(c));
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  d.span_centered = (hi - lo) / 2.0;
  if (d.sup_centered <= 0.0) {
    d.degenerate = true;
    d.threshold_f = std::numeric_limits<double>::infinity();
  } else {
    d.threshold_f = d.variance_plus / (d.sup_centered * d.sup_centered);
  }
  return d;
}

DivergenceKind variant_kind(BoundVariant variant) {
  switch (variant) {
    case BoundVariant::L1Dagger:
    case BoundVariant::L1GoalSpan: return DivergenceKind::L1;
    case BoundVariant::SupDagger: return DivergenceKind::SupNorm;
    case BoundVariant::KLPinsker:
    case BoundVariant::KLCumulant:
    case BoundVariant::KLHoeffding: return DivergenceKind::KL;
    case BoundVariant::ReverseKL: return DivergenceKind::ReverseKL;
    case BoundVariant::ChiSquared: return DivergenceKind::ChiSquared;
    case BoundVariant::VarWeightedLinf: return DivergenceKind::VarWeightedLinf;
  }
  return DivergenceKind::L1;
}

bool variant_needs_plus(BoundVariant variant) {
  return variant == BoundVariant::KLCumulant || variant == BoundVariant::KLHoeffding ||
         variant == BoundVariant::ChiSquared || variant == BoundVariant::VarWeightedLinf;
}

std::vector<BoundVariant> variants_for(DivergenceKind kind) {
  std::vector<BoundVariant> out;
  for (BoundVariant v :
       {BoundVariant::L1Dagger, BoundVariant::L1GoalSpan, BoundVariant::SupDagger, BoundVariant::KLPinsker,
        BoundVariant::KLCumulant, BoundVariant::KLHoeffding, BoundVariant::ReverseKL, BoundVariant::ChiSquared,
        BoundVariant::VarWeightedLinf})
    if (variant_kind(v) == kind) out.push_back(v);
  return out;
}

double cb_bound(BoundVariant variant, const ConfidenceSet& conf, int s, int k, const Vec& x) {
  check_index(conf, s, k, x);
  if (variant_kind(variant) != conf.kind)
    fail(Errc::InvalidArgument, to_string(variant) + " does not belong to " + to_string(conf.kind));
  if (variant_needs_plus(variant) && !conf.is_plus())
    fail(Errc::MissingModification, to_string(variant) + " needs a Plus-modified centre");
  const double eps = conf.radius[s][k];
  const Vec& p = conf.center[s][k];
  switch (variant) {
    case BoundVariant::L1Dagger: return -eps * max_of(x);
    case BoundVariant::L1GoalSpan: {
      if (!conf.l1_goal_inclusive)
        fail(Errc::InvalidArgument, "L1GoalSpan is only valid for the goal-inclusive l1 ball");
      Vec xg = x;
      xg.push_back(0.0);
      return -eps * span(xg);
    }
    case BoundVariant::SupDagger: {
      double l1 = 0.0;
      for (double v : x) l1 += std::abs(v);
      return -eps * l1;
    }
    case BoundVariant::KLPinsker:
    case BoundVariant::ReverseKL: {
      double sup = 0.0;
      for (double v : x) sup = std::max(sup, std::abs(v));
      return -2.0 * sup * std::sqrt(std::log(2.0) / 2.0 * eps);
    }
    case BoundVariant::KLCumulant: {
      const BoundDiagnostics d = bound_diagnostics(conf, s, k, x);
      if (d.degenerate || eps <= d.threshold_f) return -2.0 * std::sqrt(d.variance_plus * eps);
      return -(d.variance_plus / d.sup_centered + d.sup_centered * eps);
    }
    case BoundVariant::KLHoeffding: {
      const BoundDiagnostics d = bound_diagnostics(conf, s, k, x);
      return -std::sqrt(2.0) * d.span_centered * std::sqrt(eps);
    }
    case BoundVariant::ChiSquared: {
      double second = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) second += p[i] * x[i] * x[i];
      return -std::sqrt(eps * second);
    }
    case BoundVariant::VarWeightedLinf: {
      double weighted = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) weighted += std::abs(std::sqrt(p[i]) * x[i]);
      return -weighted * std::sqrt(eps);
    }
  }
  return 0.0;
}

std::string to_string(DivergenceKind kind) {
  switch (kind) {
    case DivergenceKind::L1: return "L1";
    case DivergenceKind::SupNorm: return "SupNorm";
    case DivergenceKind::KL: return "KL";
    case DivergenceKind::ReverseKL: return "ReverseKL";
    case DivergenceKind::ChiSquared: return "ChiSquared";
    case DivergenceKind::VarWeightedLinf: return "VarWeightedLinf";
  }
  return "?";
}

std::string to_string(Modification mode) {
  switch (mode) {
    case Modification::None: return "None";
    case Modification::Star: return "Star";
    case Modification::Plus: return "Plus";
    case Modification::PlusWithGoal: return "PlusWithGoal";
  }
  return "?";
}

std::string to_string(BoundVariant variant) {
  switch (variant) {
    case BoundVariant::L1Dagger: return "L1Dagger";
    case BoundVariant::L1GoalSpan: return "L1GoalSpan";
    case BoundVariant::SupDagger: return "SupDagger";
    case BoundVariant::KLPinsker: return "KLPinsker";
    case BoundVariant::KLCumulant: return "KLCumulant";
    case BoundVariant::KLHoeffding: return "KLHoeffding";
    case BoundVariant::ReverseKL: return "ReverseKL";
    case BoundVariant::ChiSquared: return "ChiSquared";
    case BoundVariant::VarWeightedLinf: return "VarWeightedLinf";
  }
  return "?";
}

DivergenceKind parse_divergence_kind(const std::string& text) {
  for (DivergenceKind k : {DivergenceKind::L1, DivergenceKind::SupNorm, DivergenceKind::KL,
                           DivergenceKind::ReverseKL, DivergenceKind::ChiSquared, DivergenceKind::VarWeightedLinf})
    if (to_string(k) == text) return k;
  fail(Errc::Parse, "unknown divergence kind '" + text + "'");
}

Modification parse_modification(const std::string& text) {
  for (Modification m : {Modification::None, Modification::Star, Modification::Plus, Modification::PlusWithGoal})
    if (to_string(m) == text) return m;
  fail(Errc::Parse, "unknown modification '" + text + "'");
}

BoundVariant parse_bound_variant(const std::string& text) {
  for (BoundVariant v :
       {BoundVariant::L1Dagger, BoundVariant::L1GoalSpan, BoundVariant::SupDagger, BoundVariant::KLPinsker,
        BoundVariant::KLCumulant, BoundVariant::KLHoeffding, BoundVariant::ReverseKL, BoundVariant::ChiSquared,
        BoundVariant::VarWeightedLinf})
    if (to_string(v) == text) return v;
  fail(Errc::Parse, "unknown bound variant '" + text + "'");
}

}  // namespace ssp
