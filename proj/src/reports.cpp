#include <cmath>
#include <sstream>

#include "ssp/duality.hpp"
#include "ssp/io.hpp"
#include "ssp/program.hpp"

namespace ssp {

namespace {

std::vector<int> policy_ids(const SspInstance& inst, const Policy& pi) {
  std::vector<int> ids;
  for (int s = 0; s < inst.num_states; ++s) ids.push_back(inst.action_ids[s][pi[s]]);
  return ids;
}

Json complex_json(std::complex<double> z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

std::string csv_row(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + cells[i];
  return out + "\n";
}

Json sample_stats(const Vec& v) {
  const double n = static_cast<double>(v.size());
  const double mean = v.empty() ? 0.0 : sum_of(v) / n;
  double ss = 0.0;
  for (double e : v) ss += (e - mean) * (e - mean);
  const double sd = v.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  return Json{{"mean", mean}, {"std_error", v.empty() ? 0.0 : sd / std::sqrt(n)}};
}

Vec regret_increments(const RegretTrace& t) {
  Vec r;
  for (double c : t.per_episode_cost) r.push_back(c - t.optimal_value);
  return r;
}

std::string trace_csv(const RegretTrace& t) {
  std::string csv = "episode,cost,length,cumulative_regret\n";
  for (std::size_t k = 0; k < t.per_episode_cost.size(); ++k)
    csv += csv_row({std::to_string(k + 1), fmt_real(t.per_episode_cost[k]), std::to_string(t.episode_lengths[k]),
                    fmt_real(t.cumulative_regret[k])});
  return csv;
}

Json trace_json(const RegretTrace& t) {
  const Vec inc = regret_increments(t);
  const std::size_t half = inc.size() / 2;
  const Vec first(inc.begin(), inc.begin() + half), second(inc.begin() + half, inc.end());
  Json j;
  j["episodes"] = t.per_episode_cost.size();
  j["optimal_value"] = t.optimal_value;
  j["episode_cost"] = sample_stats(t.per_episode_cost);
  j["first_half_regret"] = sample_stats(first);
  j["second_half_regret"] = sample_stats(second);
  j["final_regret"] = t.cumulative_regret.empty() ? 0.0 : t.cumulative_regret.back();
  j["regret_per_episode"] = t.cumulative_regret.empty() ? 0.0 : t.cumulative_regret.back() / inc.size();
  j["cap_hits"] = t.cap_hits;
  j["replans"] = t.replans;
  j["per_episode_cost"] = t.per_episode_cost;
  j["episode_lengths"] = t.episode_lengths;
  j["cumulative_regret"] = t.cumulative_regret;
  return j;
}

}  // namespace

Report plan_report(const InstanceDocument& doc, const RunOptions& opts) {
  const SspInstance& inst = doc.instance;
  const PlanResult vi = value_iteration(inst, opts.tol, opts.max_iter);
  const PlanResult pi = policy_iteration(inst, find_proper_policy(inst));
  const DualityReport dual = duality_gap(inst);
  Report r;
  r.values = pi.values;
  r.json["command"] = "plan";
  r.json["values"] = pi.values;
  r.json["policy"] = policy_ids(inst, pi.policy);
  r.json["initial_value"] = pi.values[inst.initial_state];
  r.json["value_iteration"] = {{"values", vi.values}, {"policy", policy_ids(inst, vi.policy)},
                               {"iterations", vi.iterations}};
  r.json["policy_iteration_steps"] = pi.iterations;
  r.json["vi_pi_max_difference"] = sup_dist(vi.values, pi.values);
  r.json["duality"] = {{"primal", dual.primal}, {"dual", dual.dual}, {"gap", dual.gap}};
  r.csv = "state,value_vi,value_pi,action\n";
  for (int s = 0; s < inst.num_states; ++s)
    r.csv += csv_row({std::to_string(s), fmt_real(vi.values[s]), fmt_real(pi.values[s]),
                      std::to_string(inst.action_ids[s][pi.policy[s]])});
  return r;
}

Report evi_report(const InstanceDocument& doc, const RunOptions& opts) {
  const SspInstance& inst = doc.instance;
  const ConfidenceSet conf = build_confidence(doc);
  EviOptions eo;
  eo.tol = opts.tol;
  eo.max_iter = opts.max_iter;
  const PlanResult res = extended_value_iteration(inst, conf, eo);
  const SandwichReport sw = sandwich_check(inst, conf, opts.tol);
  Report r;
  r.values = res.values;
  r.passed = sw.upper_holds;
  r.json["command"] = "evi";
  r.json["divergence"] = to_string(conf.kind);
  r.json["modification"] = to_string(conf.modification);
  r.json["values"] = res.values;
  r.json["policy"] = policy_ids(inst, res.policy);
  r.json["iterations"] = res.iterations;
  r.json["sandwich"] = {{"lower", sw.lower}, {"optimistic", sw.optimistic}, {"upper", sw.upper},
                     {"upper_holds", sw.upper_holds}, {"lower_holds", sw.lower_holds}};
  try {
    const DualityReport dual = duality_gap(inst, conf);
    r.json["duality"] = {{"primal", dual.primal}, {"dual", dual.dual}, {"gap", dual.gap}};
  } catch (const Error& err) {
    r.json["duality"] = {{"skipped", err.what()}};
  }
  r.csv = "state,optimistic_value,lower,upper,action\n";
  for (int s = 0; s < inst.num_states; ++s)
    r.csv += csv_row({std::to_string(s), fmt_real(res.values[s]), fmt_real(sw.lower[s]), fmt_real(sw.upper[s]),
                      std::to_string(inst.action_ids[s][res.policy[s]])});
  return r;
}

Report bounds_report(const InstanceDocument& doc, int state, int action_id, const Vec& x, int grid_resolution) {
  const SspInstance& inst = doc.instance;
  const ConfidenceSet conf = build_confidence(doc);
  if (state < 0 || state >= inst.num_states) fail(Errc::Validation, "state out of range");
  const int k = inst.local_index(state, action_id);
  if (k < 0) fail(Errc::Validation, "action " + std::to_string(action_id) + " is not available in this state");
  if (static_cast<int>(x.size()) != inst.num_states)
    fail(Errc::Validation, "x needs " + std::to_string(inst.num_states) + " entries");

  std::optional<double> exact, oracle;
  Json exact_json = nullptr, oracle_json = nullptr;
  if (has_exact_cb_min(conf.kind)) {
    try {
      exact = cb_min_exact(conf, state, k, x).value;
      exact_json = *exact;
    } catch (const Error& err) {
      exact_json = {{"skipped", err.what()}};
    }
  }
  if (inst.num_states <= 3) {
    oracle = cb_min_grid_oracle(conf, state, k, x, grid_resolution);
    oracle_json = *oracle;
  }
  Report r;
  r.json["command"] = "bounds";
  r.json["divergence"] = to_string(conf.kind);
  r.json["state"] = state;
  r.json["action"] = action_id;
  r.json["x"] = x;
  r.json["cb_min_exact"] = exact_json;
  r.json["cb_min_oracle"] = oracle_json;
  const BoundDiagnostics d = bound_diagnostics(conf, state, k, x);
  r.json["diagnostics"] = {{"mean", d.mean},          {"variance_plus", d.variance_plus},
                           {"span", d.span_centered}, {"sup", d.sup_centered},
                           {"threshold_f", d.threshold_f}, {"degenerate", d.degenerate}};
  r.csv = "variant,bound,clamped,cb_min_exact,cb_min_oracle,status\n";
  const std::string exact_cell = exact ? fmt_real(*exact) : "";
  const std::string oracle_cell = oracle ? fmt_real(*oracle) : "";
  Json rows = Json::array();
  for (BoundVariant v : variants_for(conf.kind)) {
    Json row;
    row["variant"] = to_string(v);
    try {
      const double b = cb_bound(v, conf, state, k, x);
      const double clamped = clamp_dagger0(b, conf.center[state][k], x);
      const bool below_oracle = !oracle || b <= *oracle + 5e-3;
      const bool below_exact = !exact || b <= *exact + 1e-9;
      r.passed = r.passed && below_oracle && below_exact;
      row["bound"] = b;
      row["clamped"] = clamped;
      row["below_oracle"] = below_oracle;
      row["below_exact"] = below_exact;
      r.values.push_back(b);
      r.csv += csv_row({to_string(v), fmt_real(b), fmt_real(clamped), exact_cell, oracle_cell,
                        below_oracle && below_exact ? "ok" : "violated"});
    } catch (const Error& err) {
      row["skipped"] = err.what();
      r.csv += csv_row({to_string(v), "", "", exact_cell, oracle_cell, std::string("skipped:") + errc_name(err.code())});
    }
    rows.push_back(row);
  }
  r.json["bounds"] = rows;
  r.json["passed"] = r.passed;
  return r;
}

ArrowGrid parse_arrow_grid(const std::string& text) {
  ArrowGrid g;
  char c1 = 0, c2 = 0;
  std::istringstream in(text);
  if (!(in >> g.lo >> c1 >> g.hi >> c2 >> g.steps) || c1 != ':' || c2 != ':' || !in.eof())
    fail(Errc::Parse, "arrow field must look like lo:hi:steps, got '" + text + "'");
  if (g.steps < 2 || !(g.hi > g.lo)) fail(Errc::Validation, "arrow field needs hi > lo and steps >= 2");
  return g;
}

Report dagger_report(const InstanceDocument& doc, const DaggerRequest& req, const RunOptions& opts) {
  const SspInstance& inst = doc.instance;
  const ConfidenceSet conf = build_confidence(doc);
  Vec x0 = req.x0.empty() ? Vec(inst.num_states, 0.0) : req.x0;
  if (static_cast<int>(x0.size()) != inst.num_states)
    fail(Errc::Validation, "x0 needs " + std::to_string(inst.num_states) + " entries");
  DaggerOptions dop;
  dop.tol = opts.tol;
  dop.max_iter = opts.max_iter;
  dop.keep_trace = req.keep_trace;
  dop.floor = req.floor;
  const FixedPointResult fp = iterate_dagger0(inst, conf, req.variant, x0, dop);

  Report r;
  r.values = fp.point;
  r.json["command"] = "dagger";
  r.json["variant"] = to_string(req.variant);
  r.json["floor"] = req.floor == Floor::Cost ? "cost" : "zero";
  r.json["x0"] = x0;
  r.json["status"] = to_string(fp.status);
  r.json["point"] = fp.point;
  r.json["iterations"] = fp.iterations;
  r.json["cycle"] = fp.cycle;
  r.json["trace"] = fp.trace;

  if (req.arrow_field) {
    if (inst.num_states != 2) fail(Errc::Validation, "arrow fields need a 2-state instance");
    const ArrowGrid& g = *req.arrow_field;
    r.csv = "x1,x2,y1,y2\n";
    Json arrows = Json::array();
    for (int i = 0; i < g.steps; ++i)
      for (int j = 0; j < g.steps; ++j) {
        const Vec x{g.lo + (g.hi - g.lo) * i / (g.steps - 1), g.lo + (g.hi - g.lo) * j / (g.steps - 1)};
        const Vec y = apply_dagger0(inst, conf, req.variant, x, std::nullopt, req.floor);
        arrows.push_back({x[0], x[1], y[0], y[1]});
        r.csv += csv_row({fmt_real(x[0]), fmt_real(x[1]), fmt_real(y[0]), fmt_real(y[1])});
      }
    r.json["arrow_grid"] = {{"lo", g.lo}, {"hi", g.hi}, {"steps", g.steps}};
    r.json["arrows"] = arrows;
  } else {
    r.csv = "iteration";
    for (int s = 0; s < inst.num_states; ++s) r.csv += ",x" + std::to_string(s + 1);
    r.csv += "\n";
    for (std::size_t i = 0; i < fp.trace.size(); ++i) {
      std::vector<std::string> cells{std::to_string(i)};
      for (double v : fp.trace[i]) cells.push_back(fmt_real(v));
      r.csv += csv_row(cells);
    }
  }
  return r;
}

DaggerPreset dagger_preset(const std::string& name) {
  const TwoStateParams iterating{0.1, 0.89, 0.89, 0.1, 0.1, 0.9, 0.01, 0.01};
  const TwoStateParams slow{0.00001, 0.999, 0.999, 0.00001, 0.01, 0.01, 0.01, 0.01};
  const TwoStateParams oscillating{0.00001, 0.999, 0.999, 0.00001, 0.2, 0.1, 0.3, 0.1};
  DaggerPreset p;
  if (name == "fig2") {
    p.params = iterating;
    p.request.arrow_field = ArrowGrid{-0.1, 1.1, 6};
  } else if (name == "fig3") {
    p.params = slow;
    p.request.arrow_field = ArrowGrid{-1.0, 11.0, 6};
  } else if (name == "fig4") {
    p.params = slow;
    p.request.x0 = {11.1, 10.468};
  } else if (name == "fig5") {
    p.params = oscillating;
    p.request.x0 = {0.3, 0.363367};
  } else {
    fail(Errc::Parse, "unknown preset '" + name + "' (expected fig2, fig3, fig4 or fig5)");
  }
  return p;
}

Report two_state_report(const TwoStateParams& p, const RunOptions& opts) {
  Report r;
  r.json["command"] = "two-state";
  r.json["params"] = {{"p11", p.p11}, {"p12", p.p12}, {"p21", p.p21}, {"p22", p.p22},
                      {"eps1", p.eps1}, {"eps2", p.eps2}, {"c1", p.c1},   {"c2", p.c2}};
  r.csv = "piece,m11,m12,m21,m22,eig1_re,eig1_im,eig2_re,eig2_im,spectral_radius,contraction,fp1,fp2,active\n";
  Json pieces = Json::array();
  for (const ActivePiece& piece : enumerate_pieces(p)) {
    Json j;
    j["label"] = to_string(piece.label);
    j["matrix"] = piece.matrix;
    j["eigenvalues"] = {complex_json(piece.eigenvalues[0]), complex_json(piece.eigenvalues[1])};
    j["spectral_radius"] = piece.spectral_radius;
    j["is_contraction"] = piece.is_contraction;
    j["fixed_point"] = piece.fixed_point ? Json(*piece.fixed_point) : Json(nullptr);
    j["in_active_region"] = piece.in_active_region;
    pieces.push_back(j);
    const auto& m = piece.matrix;
    r.csv += csv_row({to_string(piece.label), fmt_real(m[0][0]), fmt_real(m[0][1]), fmt_real(m[1][0]),
                      fmt_real(m[1][1]), fmt_real(piece.eigenvalues[0].real()),
                      fmt_real(piece.eigenvalues[0].imag()), fmt_real(piece.eigenvalues[1].real()),
                      fmt_real(piece.eigenvalues[1].imag()), fmt_real(piece.spectral_radius),
                      piece.is_contraction ? "1" : "0", piece.fixed_point ? fmt_real((*piece.fixed_point)[0]) : "",
                      piece.fixed_point ? fmt_real((*piece.fixed_point)[1]) : "", piece.in_active_region ? "1" : "0"});
  }
  r.json["pieces"] = pieces;
  r.json["contraction_violation"] = contraction_violation(p);
  r.json["pair_exclusivity"] = pair_exclusivity_check(p);

  const SspInstance inst = two_state_instance(p);
  const ConfidenceSet conf = two_state_confidence(p);
  try {
    const ProcedureResult proc = fixed_point_procedure(p);
    Json discarded = Json::array();
    for (const Discarded& d : proc.discarded) discarded.push_back({{"label", to_string(d.label)}, {"reason", d.reason}});
    std::vector<std::string> tied;
    for (PieceLabel l : proc.tied) tied.push_back(to_string(l));
    const Pt2 image = apply_two_state_dagger(p, proc.candidate);
    r.values = {proc.candidate[0], proc.candidate[1]};
    r.json["procedure"] = {{"label", to_string(proc.label)},
                           {"candidate", proc.candidate},
                           {"self_map_residual", std::max(std::abs(image[0] - proc.candidate[0]),
                                                          std::abs(image[1] - proc.candidate[1]))},
                           {"ambiguous", proc.ambiguous},
                           {"tied", tied},
                           {"discarded", discarded},
                           {"centre_value", proc.upper}};
  } catch (const Error& err) {
    r.json["procedure"] = {{"error", err.what()}};
  }
  DaggerOptions dop;
  dop.tol = opts.tol;
  dop.max_iter = opts.max_iter;
  const FixedPointResult fp = iterate_dagger0(inst, conf, BoundVariant::L1Dagger, Vec(2, 0.0), dop);
  r.json["iteration"] = {{"status", to_string(fp.status)},
                         {"point", fp.point},
                         {"iterations", fp.iterations},
                         {"cycle", fp.cycle}};
  const ProgramSolution sol = solve_dagger_program(inst, conf);
  r.json["program"] = {{"objective", sol.objective}, {"x", sol.x}};
  return r;
}

Report program_report(const InstanceDocument& doc, int grid_resolution, const RunOptions& opts) {
  const SspInstance& inst = doc.instance;
  const ConfidenceSet conf = build_confidence(doc);
  const ProgramSolution sol = solve_dagger_program(inst, conf);
  Report r;
  r.values = sol.x;
  r.json["command"] = "program";
  r.json["objective"] = sol.objective;
  r.json["x"] = sol.x;
  r.json["tied_maximizers"] = sol.tied_maximizers;
  r.json["region"] = {{"positive_set", sol.region.positive_set},
                      {"floor_set", sol.region.floor_set},
                      {"argmax_state", sol.region.argmax_state}};
  r.json["patterns"] = sol.patterns;
  r.json["vertices_checked"] = sol.vertices_checked;
  r.json["used_grid_fallback"] = sol.used_grid_fallback;
  const bool feasible = dagger_program_feasible(inst, conf, sol.x, 1e-8);
  r.json["feasible"] = feasible;
  r.passed = feasible;
  if (inst.num_states <= 2) {
    const double oracle = grid_program_oracle(inst, conf, grid_resolution);
    const bool ok = oracle <= sol.objective + 1e-9;
    r.json["oracle"] = {{"resolution", grid_resolution}, {"objective", oracle}, {"gap", sol.objective - oracle},
                        {"oracle_not_above", ok}};
    r.passed = r.passed && ok;
  }
  DaggerOptions dop;
  dop.tol = opts.tol;
  dop.max_iter = opts.max_iter;
  const FixedPointResult fp = iterate_dagger0(inst, conf, BoundVariant::L1Dagger, Vec(inst.num_states, 0.0), dop);
  r.json["iteration"] = {{"status", to_string(fp.status)}, {"point", fp.point}, {"iterations", fp.iterations}};
  r.json["passed"] = r.passed;
  r.csv = "state,x\n";
  for (int s = 0; s < inst.num_states; ++s) r.csv += csv_row({std::to_string(s), fmt_real(sol.x[s])});
  return r;
}

Report learn_report(const InstanceDocument& doc, const LearnRequest& req) {
  const SspInstance& inst = doc.instance;
  Report r;
  r.json["command"] = "learn";
  r.json["algorithm"] = req.algorithm;
  r.json["seed"] = req.config.seed;
  RegretTrace trace;
  if (req.algorithm == "evi") {
    LearnerConfig cfg = req.config;
    if (req.exact_model) cfg.initial_counts = counts_from_model(inst, req.exact_scale);
    const LearnerResult res = run_evi_learner(inst, cfg);
    trace = res.trace;
    r.json["planner"] = cfg.planner == LearnerPlanner::ExactEvi ? "exact" : "dagger";
    r.json["final_policy"] = policy_ids(inst, res.final_policy);
  } else if (req.algorithm == "greedy") {
    trace = run_greedy_baseline(inst, req.epsilon_explore, req.config.num_episodes, req.config.seed,
                                req.config.episode_step_cap);
    r.json["epsilon_explore"] = req.epsilon_explore;
  } else {
    fail(Errc::Validation, "unknown algorithm '" + req.algorithm + "' (expected evi or greedy)");
  }
  r.json["trace"] = trace_json(trace);
  r.values = trace.cumulative_regret;
  r.csv = trace_csv(trace);
  return r;
}

}  // namespace ssp
