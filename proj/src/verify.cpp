#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>

#include "ssp/duality.hpp"
#include "ssp/io.hpp"
#include "ssp/math_kernels.hpp"
#include "ssp/program.hpp"
#include "ssp/random.hpp"

namespace ssp {

namespace {

struct Checks {
  Json list = Json::array();
  bool all = true;
  std::string csv = "check,passed,detail\n";

  void add(const std::string& name, bool ok, const std::string& detail = "") {
    list.push_back({{"check", name}, {"passed", ok}, {"detail", detail}});
    csv += name + "," + (ok ? "1" : "0") + "," + detail + "\n";
    all = all && ok;
  }

  // Recorded for inspection without affecting the verdict.
  void note(const std::string& name, bool ok, const std::string& detail = "") {
    list.push_back({{"check", name}, {"passed", ok}, {"informational", true}, {"detail", detail}});
    csv += name + "," + (ok ? "1" : "0") + ",informational" + (detail.empty() ? "" : " " + detail) + "\n";
  }

  // Runs body and records any thrown error as a failure.
  template <typename F>
  void guarded(const std::string& name, F&& body) {
    try {
      body();
    } catch (const std::exception& err) {
      add(name, false, std::string("error: ") + err.what());
    }
  }
};

void corpus_checks(Checks& c, const std::string& dir) {
  std::vector<std::filesystem::path> files;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec))
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  if (ec) fail(Errc::Io, "cannot read corpus directory '" + dir + "'");
  std::sort(files.begin(), files.end());
  c.add("corpus_nonempty", !files.empty(), std::to_string(files.size()) + " files");
  for (const auto& path : files) {
    const std::string tag = path.stem().string();
    c.guarded(tag + ":load", [&] {
      const InstanceDocument doc = load_instance(path.string());
      c.add(tag + ":round_trip", decode_instance(encode_instance(doc)) == doc);

      const PlanResult vi = value_iteration(doc.instance, 1e-13);
      const PlanResult pi = policy_iteration(doc.instance, find_proper_policy(doc.instance));
      const double diff = sup_dist(vi.values, pi.values);
      c.add(tag + ":vi_pi_agree", diff <= 1e-9, fmt_real(diff));
      const double gap = duality_gap(doc.instance).gap;
      c.add(tag + ":known_duality_gap", gap <= 1e-6, fmt_real(gap));

      if (doc.confidence && has_exact_cb_min(doc.confidence->kind)) {
        const ConfidenceSet conf = build_confidence(doc);
        const SandwichReport sw = sandwich_check(doc.instance, conf, 1e-10);
        c.add(tag + ":optimistic_below_centre", sw.upper_holds);
        c.note(tag + ":lower_sandwich", sw.lower_holds);
        const double ugap = duality_gap(doc.instance, conf).gap;
        c.add(tag + ":unknown_duality_gap", ugap <= 1e-6, fmt_real(ugap));
      }
    });
  }
}

void planner_checks(Checks& c, std::uint64_t seed) {
  Rng rng(seed);
  int agree = 0, optimal = 0, dual = 0;
  const int count = 100;
  const double tol = 1e-10;
  for (int i = 0; i < count; ++i) {
    const SspInstance inst = random_instance(rng, 4, 3);
    const PlanResult vi = value_iteration(inst, tol);
    const PlanResult pi = policy_iteration(inst, find_proper_policy(inst));
    agree += sup_dist(vi.values, pi.values) <= 10 * tol;
    bool best = true;
    if (inst.num_states <= 3)
      for (const Policy& other : enumerate_policies(inst)) {
        if (!is_proper(inst, other)) continue;
        const Vec v = cost_to_go(inst, other);
        for (int s = 0; s < inst.num_states; ++s) best = best && pi.values[s] <= v[s] + 1e-9;
      }
    optimal += best;
    dual += duality_gap(inst).gap <= 1e-6;
  }
  c.add("random:vi_pi_agree", agree == count, std::to_string(agree) + "/" + std::to_string(count));
  c.add("random:pi_exhaustive_optimal", optimal == count, std::to_string(optimal) + "/" + std::to_string(count));
  c.add("random:known_duality_gap", dual == count, std::to_string(dual) + "/" + std::to_string(count));
}

void unknown_duality_checks(Checks& c, std::uint64_t seed) {
  Rng rng(seed);
  int ok = 0;
  const int count = 100;
  double worst = 0.0;
  for (int i = 0; i < count; ++i) {
    SspInstance inst = random_instance(rng, 2, 2);
    while (inst.num_states != 2) inst = random_instance(rng, 2, 2);
    SaTable eps(2);
    for (int s = 0; s < 2; ++s)
      for (int k = 0; k < inst.num_actions(s); ++k) eps[s].push_back(0.5 * uniform01(rng));
    const double gap = duality_gap(inst, make_confidence_set(DivergenceKind::L1, inst.trans, eps)).gap;
    worst = std::max(worst, gap);
    ok += gap <= 1e-6;
  }
  c.add("random:l1_unknown_duality_gap", ok == count, "worst " + fmt_real(worst));
}

void bound_checks(Checks& c, std::uint64_t seed, int trials) {
  Rng rng(seed);
  long checked = 0, violations = 0;
  std::string first;
  for (int t = 0; t < trials; ++t) {
    Tensor centre(2);
    for (int s = 0; s < 2; ++s) {
      const Vec full = random_simplex(rng, 3);
      centre[s].push_back({full[0], full[1]});
    }
    const SaTable eps{{0.05 + 0.45 * uniform01(rng)}, {0.05 + 0.45 * uniform01(rng)}};
    const SaTable counts{{1.0 + std::floor(50 * uniform01(rng))}, {1.0 + std::floor(50 * uniform01(rng))}};
    const Vec x{2.0 * uniform01(rng), 2.0 * uniform01(rng)};
    const int s = uniform01(rng) < 0.5 ? 0 : 1;
    for (DivergenceKind kind : {DivergenceKind::L1, DivergenceKind::SupNorm, DivergenceKind::KL,
                                DivergenceKind::ReverseKL, DivergenceKind::ChiSquared,
                                DivergenceKind::VarWeightedLinf}) {
      for (BoundVariant v : variants_for(kind)) {
        ConfidenceSet conf = variant_needs_plus(v)
                                 ? make_confidence_set(kind, centre, eps, Modification::Plus, counts)
                                 : make_confidence_set(kind, centre, eps);
        if (v == BoundVariant::L1GoalSpan) conf.l1_goal_inclusive = true;
        const double b = cb_bound(v, conf, s, 0, x);
        const double oracle = cb_min_grid_oracle(conf, s, 0, x);
        bool ok = b <= oracle + 5e-3;
        if (has_exact_cb_min(kind)) ok = ok && b <= cb_min_exact(conf, s, 0, x).value + 1e-9;
        ++checked;
        if (!ok) {
          ++violations;
          if (first.empty()) first = to_string(v) + " trial " + std::to_string(t);
        }
      }
    }
  }
  c.add("random:bound_dominance", violations == 0,
        std::to_string(checked) + " checks" + (first.empty() ? "" : "; first violation " + first));
}

void kernel_checks(Checks& c, std::uint64_t seed) {
  const MinLocation w =
      min_weighted_l1_deviation({0.3, 0.2, 0.2, 0.4}, {1, 3, 5, 6}, LambdaConstraint::Free);
  c.add("kernel:weighted_l1", w.location == 5.0 && w.value == 2.0);
  const MinLocation h = min_hyperbola(1.0, 2.0);
  c.add("kernel:hyperbola", std::abs(h.location - std::sqrt(2.0)) <= 1e-12 &&
                                std::abs(h.value - 2.0 * std::sqrt(2.0)) <= 1e-12);
  const MinLocation l = min_xlog(1.0);
  c.add("kernel:xlog", std::abs(l.location - 1.0 / std::exp(1.0)) <= 1e-12 &&
                           std::abs(l.value + 1.0 / std::exp(1.0)) <= 1e-12);
  Rng rng(seed);
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 1000; ++i) {
    const int n = 2 + static_cast<int>(uniform01(rng) * 4);
    Vec p = random_simplex(rng, n + 1);
    p.pop_back();
    if (sum_of(p) <= 0.0) continue;
    Vec x(n);
    for (double& v : x) v = 3.0 * uniform01(rng);
    const double mean = dot(p, x);
    double spread = 0.0;
    for (double v : x) spread = std::max(spread, std::abs(v - mean));
    worst = std::min(worst, cumulant_bound_margin(p, x, std::max(spread, 1e-6) * (1.0 + 3.0 * uniform01(rng))));
  }
  c.add("kernel:cumulant_margin", worst >= -1e-12, "worst " + fmt_real(worst));
  bool rearrange = true;
  for (int i = 0; i < 10000; ++i) {
    const int n = 1 + static_cast<int>(uniform01(rng) * 5);
    Vec x(n), y(n);
    for (int j = 0; j < n; ++j) {
      x[j] = 4.0 * uniform01(rng) - 2.0;
      y[j] = 4.0 * uniform01(rng) - 2.0;
    }
    rearrange = rearrange && minmax_rearrange_holds(x, y);
  }
  c.add("kernel:rearrangement", rearrange);
}

void two_state_checks(Checks& c, std::uint64_t seed) {
  const TwoStateParams iterating{0.1, 0.89, 0.89, 0.1, 0.1, 0.9, 0.01, 0.01};
  DaggerOptions dop;
  dop.tol = 1e-13;
  const FixedPointResult a = iterate_dagger0(two_state_instance(iterating), two_state_confidence(iterating),
                                             BoundVariant::L1Dagger, {0.0, 0.0}, dop);
  c.add("two_state:iterating_fixed_point",
        a.status == FixedPointStatus::Converged &&
            sup_dist(a.point, {0.019694135768511, 0.010892287380350}) <= 1e-9);

  const TwoStateParams flat{0.45, 0.45, 0.45, 0.45, 0.5, 0.5, 0.5, 0.5};
  const Pt2 lo = apply_two_state_dagger(flat, {1.0, 0.9});
  const Pt2 hi = apply_two_state_dagger(flat, {1.0, 2.0});
  c.add("two_state:non_monotone_witness", std::abs(lo[0] - 0.855) <= 1e-12 && std::abs(lo[1] - 0.855) <= 1e-12 &&
                                              std::abs(hi[0] - 0.85) <= 1e-12 && std::abs(hi[1] - 0.85) <= 1e-12);

  const TwoStateParams osc{0.00001, 0.999, 0.999, 0.00001, 0.2, 0.1, 0.3, 0.1};
  const FixedPointResult o = iterate_dagger0(two_state_instance(osc), two_state_confidence(osc),
                                             BoundVariant::L1Dagger, {0.3, 0.363367}, dop);
  c.add("two_state:oscillation_detected", o.status == FixedPointStatus::Oscillating && o.cycle.size() == 2);
  const ProcedureResult proc = fixed_point_procedure(osc);
  const Pt2 img = apply_two_state_dagger(osc, proc.candidate);
  c.add("two_state:procedure_self_map",
        std::max(std::abs(img[0] - proc.candidate[0]), std::abs(img[1] - proc.candidate[1])) <= 1e-8);

  const ConjectureSummary summary = conjecture_report(&sample_two_state, 1000, seed);
  // The conjecture is an open question and random sampling finds counterexamples,
  // so it is reported rather than gated.
  c.note("two_state:conjecture", summary.disagreement == 0,
        std::to_string(summary.disagreement) + " disagreements; oscillation frequency " +
            fmt_real(summary.oscillation_frequency()));
}

void program_checks(Checks& c, std::uint64_t seed) {
  const TwoStateParams osc{0.00001, 0.999, 0.999, 0.00001, 0.2, 0.1, 0.3, 0.1};
  const ProcedureResult proc = fixed_point_procedure(osc);
  const ProgramSolution os = solve_dagger_program(two_state_instance(osc), two_state_confidence(osc));
  c.add("program:oscillation_objective", std::abs(os.objective - (proc.candidate[0] + proc.candidate[1])) <= 1e-6,
        fmt_real(os.objective));

  Rng rng(seed);
  const int count = 50, res = 400;
  int oracle_ok = 0, below_evi = 0;
  for (int i = 0; i < count; ++i) {
    SspInstance inst = random_instance(rng, 2, 2);
    while (inst.num_states != 2) inst = random_instance(rng, 2, 2);
    SaTable eps(2);
    for (int s = 0; s < 2; ++s)
      for (int k = 0; k < inst.num_actions(s); ++k) eps[s].push_back(0.6 * uniform01(rng));
    const ConfidenceSet conf = make_confidence_set(DivergenceKind::L1, inst.trans, eps);
    const ProgramSolution sol = solve_dagger_program(inst, conf);
    const Vec floor = inst.min_cost_vector();
    const Vec upper = value_iteration(with_center(inst, conf), 1e-13).values;
    const double width = (upper[0] - floor[0]) + (upper[1] - floor[1]);
    const double grid = grid_program_oracle(inst, conf, res);
    oracle_ok += grid <= sol.objective + 1e-9 && sol.objective - grid <= 2.0 * width / res + 1e-9;
    below_evi += sol.objective <= sum_of(extended_value_iteration(inst, conf).values) + 1e-8;
  }
  c.add("program:grid_oracle_agreement", oracle_ok == count, std::to_string(oracle_ok) + "/" + std::to_string(count));
  c.add("program:below_optimistic_values", below_evi == count, std::to_string(below_evi) + "/" + std::to_string(count));
}

void learning_checks(Checks& c, std::uint64_t seed) {
  Rng rng(seed);
  SspInstance inst = random_instance(rng, 3, 2);
  LearnerConfig cfg;
  cfg.num_episodes = 40;
  cfg.seed = seed;
  const LearnerResult res = run_evi_learner(inst, cfg);
  bool identity = true;
  const RegretTrace& t = res.trace;
  for (std::size_t k = 0; k < t.per_episode_cost.size(); ++k) {
    const double prev = k ? t.cumulative_regret[k - 1] : 0.0;
    identity = identity && std::abs((t.cumulative_regret[k] - prev) - (t.per_episode_cost[k] - t.optimal_value)) <=
                               1e-9 * (1.0 + std::abs(t.cumulative_regret[k]));
  }
  c.add("learning:counts_consistent", res.counts.consistent());
  c.add("learning:regret_identity", identity);
  const LearnerResult again = run_evi_learner(inst, cfg);
  c.add("learning:deterministic", again.trace.cumulative_regret == t.cumulative_regret);
}

}  // namespace

Report verify_report(const std::string& corpus_dir, const RunOptions& opts) {
  Checks c;
  c.guarded("corpus", [&] { corpus_checks(c, corpus_dir); });
  c.guarded("planners", [&] { planner_checks(c, opts.seed); });
  c.guarded("unknown_duality", [&] { unknown_duality_checks(c, opts.seed + 1); });
  c.guarded("bounds", [&] { bound_checks(c, opts.seed + 2, 200); });
  c.guarded("kernels", [&] { kernel_checks(c, opts.seed + 3); });
  c.guarded("two_state", [&] { two_state_checks(c, opts.seed + 4); });
  c.guarded("program", [&] { program_checks(c, opts.seed + 6); });
  c.guarded("learning", [&] { learning_checks(c, opts.seed + 5); });
  Report r;
  r.passed = c.all;
  r.json["command"] = "verify";
  r.json["corpus"] = corpus_dir;
  r.json["seed"] = opts.seed;
  r.json["checks"] = c.list;
  r.json["passed"] = c.all;
  r.csv = c.csv;
  return r;
}

}  // namespace ssp
