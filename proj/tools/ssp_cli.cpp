// Command-line front end over the C API.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ssp_evi.h"

namespace {

struct Common {
  double tol = 1e-10;
  long max_iter = 1000000;
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "json";
};

int fail_with(ssp_status st) {
  std::cerr << "error [" << ssp_last_error_kind() << "]: " << ssp_last_error() << "\n";
  return static_cast<int>(st);
}

// Runs the call, then prints or saves the report it produced.
template <typename F>
int write_report(F&& call, const Common& c) {
  ssp_report* report = nullptr;
  const ssp_status st = call(&report);
  if (!report) return fail_with(st);
  const std::string text = ssp_report_text(report);
  ssp_report_free(report);
  if (c.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(c.out, std::ios::binary);
    if (!f || !(f << text)) {
      std::cerr << "error [Io]: cannot write '" << c.out << "'\n";
      return SSP_IO_ERROR;
    }
  }
  if (st == SSP_VERIFICATION_FAILED) std::cerr << "verification failed\n";
  return static_cast<int>(st);
}

// Loads the instance and hands it to body; reports load errors.
template <typename F>
int with_instance(const std::string& path, F&& body) {
  ssp_instance* inst = nullptr;
  const ssp_status st = ssp_instance_load(path.c_str(), &inst);
  if (st != SSP_OK) return fail_with(st);
  const int code = body(inst);
  ssp_instance_free(inst);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic shortest path planning and optimistic operator toolkit"};
  app.require_subcommand(1);
  Common c;
  app.add_option("--tol", c.tol, "Convergence tolerance")->capture_default_str();
  app.add_option("--max-iter", c.max_iter, "Iteration cap")->capture_default_str();
  app.add_option("--seed", c.seed, "Random seed")->capture_default_str();
  app.add_option("--out", c.out, "Write the report to this path instead of stdout");
  app.add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();

  std::string instance_path;
  auto* plan = app.add_subcommand("plan", "Value and policy iteration with duality gap");
  plan->add_option("instance", instance_path, "Instance JSON file")->required();

  auto* evi = app.add_subcommand("evi", "Extended value iteration for the instance's confidence set");
  evi->add_option("instance", instance_path, "Instance JSON file")->required();

  int state = 0, action = 0, grid_res = 0;
  std::vector<double> x;
  auto* bounds = app.add_subcommand("bounds", "Exact and oracle CB_min against every bound variant (CSV)");
  bounds->add_option("instance", instance_path, "Instance JSON file")->required();
  bounds->add_option("--state", state, "State index")->required();
  bounds->add_option("--action", action, "Action id")->required();
  bounds->add_option("--x", x, "Value vector, comma separated")->delimiter(',')->required();
  bounds->add_option("--grid-res", grid_res, "Grid oracle resolution (0 picks a default)");

  std::string variant = "L1Dagger", floor = "cost", arrow, preset;
  std::vector<double> x0;
  auto* dagger = app.add_subcommand("dagger", "Iterate the clamped optimistic operator with trace export");
  dagger->add_option("instance", instance_path, "Instance JSON file");
  dagger->add_option("--variant", variant, "Bound variant")->capture_default_str();
  dagger->add_option("--floor", floor, "Lower clamp")->check(CLI::IsMember({"cost", "zero"}))->capture_default_str();
  dagger->add_option("--x0", x0, "Starting point, comma separated")->delimiter(',');
  dagger->add_option("--arrow-field", arrow, "Emit the one-step vector field on a lo:hi:steps grid");
  dagger->add_option("--preset", preset, "Figure preset")->check(CLI::IsMember({"fig2", "fig3", "fig4", "fig5"}));

  std::vector<double> params;
  auto* two = app.add_subcommand("two-state", "Piecewise analysis of a 2-state single-action operator");
  two->add_option("--params", params, "p11,p12,p21,p22,eps1,eps2,c1,c2")->delimiter(',')->expected(8)->required();

  int program_res = 400;
  auto* program = app.add_subcommand("program", "Solve the clamped optimistic program with an oracle check");
  program->add_option("instance", instance_path, "Instance JSON file")->required();
  program->add_option("--grid-res", program_res, "Grid oracle resolution")->capture_default_str();

  ssp_learn_options lo;
  ssp_learn_options_init(&lo);
  std::string algorithm = "evi", planner = "exact";
  double fixed_eps = -1.0;
  bool no_star = false, exact_model = false;
  auto* learn = app.add_subcommand("learn", "Run the optimistic learner or the greedy baseline");
  learn->add_option("instance", instance_path, "Instance JSON file")->required();
  learn->add_option("--algorithm", algorithm)->check(CLI::IsMember({"evi", "greedy"}))->capture_default_str();
  learn->add_option("--planner", planner)->check(CLI::IsMember({"exact", "dagger"}))->capture_default_str();
  learn->add_option("--episodes", lo.episodes)->capture_default_str();
  learn->add_option("--delta", lo.delta)->capture_default_str();
  learn->add_option("--b-star", lo.b_star)->capture_default_str();
  learn->add_option("--epsilon-explore", lo.epsilon_explore)->capture_default_str();
  learn->add_option("--fixed-epsilon", fixed_eps, "Use this radius everywhere instead of the schedule");
  learn->add_flag("--no-star", no_star, "Plan on the unmodified empirical model");
  learn->add_flag("--exact-model", exact_model, "Pre-seed counts from the true transitions");

  std::string corpus = "data";
  auto* verify = app.add_subcommand("verify", "Run the invariant and oracle suites");
  verify->add_option("corpus", corpus, "Directory of instance files")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return SSP_PARSE_ERROR;
  }

  ssp_options opts;
  ssp_options_init(&opts);
  opts.tol = c.tol;
  opts.max_iter = c.max_iter;
  opts.seed = c.seed;
  opts.format = c.format == "csv" ? SSP_FORMAT_CSV : SSP_FORMAT_JSON;

  if (*plan)
    return with_instance(instance_path, [&](ssp_instance* inst) {
      return write_report([&](ssp_report** r) { return ssp_plan(inst, &opts, r); }, c);
    });
  if (*evi)
    return with_instance(instance_path, [&](ssp_instance* inst) {
      return write_report([&](ssp_report** r) { return ssp_evi(inst, &opts, r); }, c);
    });
  if (*bounds) {
    if (c.format == "json" && !app.get_option("--format")->count()) opts.format = SSP_FORMAT_CSV;
    return with_instance(instance_path, [&](ssp_instance* inst) {
      return write_report([&](ssp_report** r) { return ssp_bounds(inst, state, action, x.data(), x.size(), grid_res, &opts, r); }, c);
    });
  }
  if (*dagger) {
    if (!preset.empty()) return write_report([&](ssp_report** r) { return ssp_dagger_preset(preset.c_str(), &opts, r); }, c);
    if (instance_path.empty()) {
      std::cerr << "dagger needs an instance file or --preset\n";
      return SSP_PARSE_ERROR;
    }
    return with_instance(instance_path, [&](ssp_instance* inst) {
      return write_report([&](ssp_report** r) { return ssp_dagger(inst, variant.c_str(), floor.c_str(), x0.empty() ? nullptr : x0.data(),
                                     x0.size(), arrow.empty() ? nullptr : arrow.c_str(), &opts, r); }, c);
    });
  }
  if (*two) {
    const ssp_two_state_params p{params[0], params[1], params[2], params[3],
                                 params[4], params[5], params[6], params[7]};
    return write_report([&](ssp_report** r) { return ssp_two_state(&p, &opts, r); }, c);
  }
  if (*program)
    return with_instance(instance_path, [&](ssp_instance* inst) {
      return write_report([&](ssp_report** r) { return ssp_program(inst, program_res, &opts, r); }, c);
    });
  if (*learn) {
    lo.algorithm = algorithm.c_str();
    lo.planner = planner.c_str();
    lo.use_star = no_star ? 0 : 1;
    lo.exact_model = exact_model ? 1 : 0;
    if (learn->get_option("--fixed-epsilon")->count()) {
      lo.has_fixed_epsilon = 1;
      lo.fixed_epsilon = fixed_eps;
    }
    return with_instance(instance_path, [&](ssp_instance* inst) {
      return write_report([&](ssp_report** r) { return ssp_learn(inst, &lo, &opts, r); }, c);
    });
  }
  if (*verify) return write_report([&](ssp_report** r) { return ssp_verify(corpus.c_str(), &opts, r); }, c);
  return SSP_PARSE_ERROR;
}
