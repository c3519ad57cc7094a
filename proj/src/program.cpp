#include "ssp/program.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "ssp/evi.hpp"
#include "ssp/planning.hpp"

namespace ssp {

namespace {

struct Halfspace {
  Vec a;  // a . x <= b
  double b;
};

void require_l1(const ConfidenceSet& conf, int n) {
  if (conf.kind != DivergenceKind::L1) fail(Errc::InvalidArgument, "the clamped program is defined for l1 sets");
  if (n > 3) fail(Errc::TooManyStates, "the region solver supports at most 3 states");
}

Vec centre_value(const SspInstance& inst, const ConfidenceSet& conf) {
  const SspInstance centre = with_center(inst, conf);
  return policy_iteration(centre, find_proper_policy(centre)).values;
}

// Advances a 0/1 pattern; false once every pattern has been visited.
bool next_bits(std::vector<bool>& bits) {
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (!bits[i]) {
      bits[i] = true;
      return true;
    }
    bits[i] = false;
  }
  return false;
}

bool next_combination(std::vector<int>& idx, int total) {
  const int d = static_cast<int>(idx.size());
  int i = d - 1;
  while (i >= 0 && idx[i] == total - d + i) --i;
  if (i < 0) return false;
  ++idx[i];
  for (int j = i + 1; j < d; ++j) idx[j] = idx[j - 1] + 1;
  return true;
}

}  // namespace

bool dagger_program_feasible(const SspInstance& inst, const ConfidenceSet& conf, const Vec& x, double tol) {
  const double top = max_of(x);
  for (int s = 0; s < inst.num_states; ++s)
    for (int k = 0; k < inst.num_actions(s); ++k) {
      const double lin = dot(conf.center[s][k], x) - conf.radius[s][k] * top;
      if (x[s] > inst.cost[s][k] + std::max(lin, 0.0) + tol) return false;
    }
  return true;
}

ProgramSolution solve_dagger_program(const SspInstance& inst, const ConfidenceSet& conf, double tol) {
  const int n = inst.num_states;
  require_l1(conf, n);
  const Vec floor = inst.min_cost_vector();
  const Vec upper = centre_value(inst, conf);

  std::vector<std::pair<int, int>> pairs;
  for (int s = 0; s < n; ++s)
    for (int k = 0; k < inst.num_actions(s); ++k) pairs.emplace_back(s, k);

  ProgramSolution sol;
  double best = -std::numeric_limits<double>::infinity();
  std::vector<Vec> maximizers;
  auto offer = [&](const Vec& x) {
    const double v = sum_of(x);
    if (v > best + tol) {
      best = v;
      maximizers = {x};
    } else if (std::abs(v - best) <= tol) {
      for (const Vec& m : maximizers)
        if (sup_dist(m, x) <= tol) return;
      maximizers.push_back(x);
    }
  };

  std::vector<bool> in_floor(n, false);
  do {
    std::vector<int> free_states;
    for (int s = 0; s < n; ++s)
      if (!in_floor[s]) free_states.push_back(s);
    const int d = static_cast<int>(free_states.size());
    for (int m = 0; m < n; ++m) {
      std::vector<bool> linear_branch(pairs.size(), false);
      do {
        ++sol.patterns;
        std::vector<Halfspace> hs;
        for (int j = 0; j < n; ++j)
          if (j != m) {
            Vec a(n, 0.0);
            a[j] = 1.0;
            a[m] -= 1.0;
            hs.push_back({a, 0.0});
          }
        for (std::size_t i = 0; i < pairs.size(); ++i) {
          const auto [s, k] = pairs[i];
          Vec a(n, 0.0);
          a[s] = 1.0;
          if (linear_branch[i]) {
            for (int t = 0; t < n; ++t) a[t] -= conf.center[s][k][t];
            a[m] += conf.radius[s][k];
          }
          hs.push_back({a, inst.cost[s][k]});
        }
        for (int s = 0; s < n; ++s) {
          Vec lo(n, 0.0), hi(n, 0.0);
          lo[s] = -1.0;
          hi[s] = 1.0;
          hs.push_back({lo, -floor[s]});
          hs.push_back({hi, upper[s]});
        }
        // Substitute the floor states and keep the free coordinates.
        std::vector<Halfspace> reduced;
        for (const Halfspace& h : hs) {
          Halfspace r{Vec(d), h.b};
          for (int s = 0; s < n; ++s)
            if (in_floor[s]) r.b -= h.a[s] * floor[s];
          for (int i = 0; i < d; ++i) r.a[i] = h.a[free_states[i]];
          reduced.push_back(std::move(r));
        }
        auto lift = [&](const Eigen::VectorXd& y) {
          Vec x = floor;
          for (int i = 0; i < d; ++i) x[free_states[i]] = y(i);
          return x;
        };
        auto feasible = [&](const Eigen::VectorXd& y) {
          for (const Halfspace& h : reduced) {
            double lhs = 0.0;
            for (int i = 0; i < d; ++i) lhs += h.a[i] * y(i);
            if (lhs > h.b + tol) return false;
          }
          return true;
        };
        if (d == 0) {
          ++sol.vertices_checked;
          if (feasible(Eigen::VectorXd(0))) offer(floor);
          continue;
        }
        const int total = static_cast<int>(reduced.size());
        std::vector<int> idx(d);
        for (int i = 0; i < d; ++i) idx[i] = i;
        long visited = 0;
        do {
          if (++visited > kVertexCapPerPattern) break;
          ++sol.vertices_checked;
          Eigen::MatrixXd a(d, d);
          Eigen::VectorXd b(d);
          for (int r = 0; r < d; ++r) {
            for (int c = 0; c < d; ++c) a(r, c) = reduced[idx[r]].a[c];
            b(r) = reduced[idx[r]].b;
          }
          Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
          if (lu.rank() < d) continue;
          const Eigen::VectorXd y = lu.solve(b);
          if (feasible(y)) offer(lift(y));
        } while (next_combination(idx, total));
        if (visited > kVertexCapPerPattern) {
          if (n != 2) fail(Errc::TooManyStates, "vertex cap exceeded and no grid fallback for this size");
          sol.used_grid_fallback = true;
        }
      } while (next_bits(linear_branch));
    }
  } while (next_bits(in_floor));

  if (maximizers.empty()) fail(Errc::Infeasible, "no feasible vertex found");
  sol.x = maximizers.front();
  sol.objective = sum_of(sol.x);
  if (sol.used_grid_fallback) sol.objective = std::max(sol.objective, grid_program_oracle(inst, conf, 2000));
  sol.tied_maximizers = maximizers;
  const double top = max_of(sol.x);
  for (int s = 0; s < n; ++s)
    (sol.x[s] > floor[s] + tol ? sol.region.positive_set : sol.region.floor_set).push_back(s);
  for (int s = 0; s < n; ++s)
    if (sol.x[s] >= top) {
      sol.region.argmax_state = s;
      break;
    }
  sol.region.clamp_active.resize(n);
  for (int s = 0; s < n; ++s)
    for (int k = 0; k < inst.num_actions(s); ++k)
      sol.region.clamp_active[s].push_back(dot(conf.center[s][k], sol.x) - conf.radius[s][k] * top < 0.0);
  return sol;
}

double grid_program_oracle(const SspInstance& inst, const ConfidenceSet& conf, int resolution) {
  const int n = inst.num_states;
  require_l1(conf, n);
  if (n > 2) fail(Errc::TooManyStates, "the grid program oracle supports at most 2 states");
  if (resolution < 1) fail(Errc::InvalidArgument, "resolution must be positive");
  const Vec floor = inst.min_cost_vector();
  const Vec upper = centre_value(inst, conf);
  double best = -std::numeric_limits<double>::infinity();
  std::vector<int> idx(n, 0);
  Vec x(n);
  for (;;) {
    for (int s = 0; s < n; ++s) x[s] = floor[s] + (upper[s] - floor[s]) * idx[s] / resolution;
    if (dagger_program_feasible(inst, conf, x, 1e-12)) best = std::max(best, sum_of(x));
    int d = n - 1;
    while (d >= 0 && ++idx[d] > resolution) idx[d--] = 0;
    if (d < 0) break;
  }
  return best;
}

ConfidenceSet two_state_confidence(const TwoStateParams& p) {
  return make_confidence_set(DivergenceKind::L1, {{{p.p11, p.p12}}, {{p.p21, p.p22}}}, {{p.eps1}, {p.eps2}});
}

TwoStateParams sample_two_state(Rng& rng) {
  auto simplex3 = [&] {
    std::array<double, 3> e{};
    double total = 0.0;
    for (double& v : e) {
      v = -std::log(1.0 - uniform01(rng));
      total += v;
    }
    for (double& v : e) v /= total;
    return e;
  };
  TwoStateParams p;
  const auto r1 = simplex3();
  const auto r2 = simplex3();
  p.p11 = r1[0];
  p.p12 = r1[1];
  p.p21 = r2[0];
  p.p22 = r2[1];
  p.eps1 = uniform01(rng);
  p.eps2 = uniform01(rng);
  p.c1 = 0.01 + 0.99 * uniform01(rng);
  p.c2 = 0.01 + 0.99 * uniform01(rng);
  return p;
}

std::string to_string(ConjectureOutcome outcome) {
  switch (outcome) {
    case ConjectureOutcome::ConvergedAgree: return "ConvergedAgree";
    case ConjectureOutcome::OscillatingFixedPointAgrees: return "OscillatingFixedPointAgrees";
    case ConjectureOutcome::Disagreement: return "Disagreement";
  }
  return "?";
}

namespace {

std::string fmt_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

ConjectureEntry evaluate_conjecture(const TwoStateParams& p) {
  ConjectureEntry e{p, ConjectureOutcome::Disagreement, FixedPointStatus::MaxIter, ""};
  try {
    const SspInstance inst = two_state_instance(p);
    const ConfidenceSet conf = two_state_confidence(p);
    DaggerOptions opts;
    opts.tol = 1e-13;
    const FixedPointResult it = iterate_dagger0(inst, conf, BoundVariant::L1Dagger, Vec(2, 0.0), opts);
    e.status = it.status;
    const ProcedureResult fp = fixed_point_procedure(p);
    const ProgramSolution prog = solve_dagger_program(inst, conf);
    const Vec cand{fp.candidate[0], fp.candidate[1]};
    const bool objective_ok = std::abs(prog.objective - sum_of(cand)) <= 1e-6;
    if (it.status == FixedPointStatus::Converged) {
      const double gap = sup_dist(it.point, cand);
      if (gap <= 1e-7 && objective_ok) {
        e.outcome = ConjectureOutcome::ConvergedAgree;
      } else {
        e.detail = "converged point is " + std::to_string(gap) + " from the procedure's; fixed point sum " +
                   fmt_g(sum_of(cand)) + " vs program objective " + fmt_g(prog.objective);
      }
    } else {
      const Pt2 image = apply_two_state_dagger(p, fp.candidate);
      const double residual = std::max(std::abs(image[0] - cand[0]), std::abs(image[1] - cand[1]));
      if (residual <= 1e-8 && objective_ok) {
        e.outcome = ConjectureOutcome::OscillatingFixedPointAgrees;
      } else {
        e.detail = to_string(it.status) + " with procedure residual " + fmt_g(residual) + "; fixed point sum " +
                   fmt_g(sum_of(cand)) + " vs program objective " + fmt_g(prog.objective);
      }
    }
  } catch (const Error& err) {
    e.detail = std::string(errc_name(err.code())) + ": " + err.what();
  }
  return e;
}

ConjectureSummary conjecture_report(const TwoStateSampler& sampler, long count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<TwoStateParams> samples;
  samples.reserve(count);
  for (long i = 0; i < count; ++i) samples.push_back(sampler(rng));
  std::vector<ConjectureEntry> entries(count);
  parallel_for(static_cast<std::size_t>(count), [&](std::size_t i) { entries[i] = evaluate_conjecture(samples[i]); });
  ConjectureSummary sum;
  sum.count = count;
  for (const ConjectureEntry& e : entries) {
    if (e.status == FixedPointStatus::Oscillating) ++sum.oscillating;
    if (e.status == FixedPointStatus::MaxIter) ++sum.max_iter;
    switch (e.outcome) {
      case ConjectureOutcome::ConvergedAgree: ++sum.converged_agree; break;
      case ConjectureOutcome::OscillatingFixedPointAgrees: ++sum.oscillating_fp_agree; break;
      case ConjectureOutcome::Disagreement:
        ++sum.disagreement;
        sum.disagreements.push_back(e);
        break;
    }
  }
  return sum;
}

}  // namespace ssp
