#include <cmath>
#include <cstring>
#include <string>

#include "ssp/io.hpp"
#include "ssp_evi.h"

struct ssp_instance {
  ssp::InstanceDocument doc;
};

struct ssp_report {
  ssp::Report report;
  std::string text;
};

namespace {

thread_local std::string g_last_error;
thread_local std::string g_last_kind;

ssp_status status_for(ssp::Errc code) {
  using ssp::Errc;
  switch (code) {
    case Errc::Parse: return SSP_PARSE_ERROR;
    case Errc::Io: return SSP_IO_ERROR;
    case Errc::ImproperPolicy:
    case Errc::SingularSystem:
    case Errc::NonConvergence:
    case Errc::MaxIterExceeded:
    case Errc::CycleDetected:
    case Errc::NoCandidate:
    case Errc::Infeasible:
    case Errc::PlanningFailed: return SSP_RUNTIME_ERROR;
    default: return SSP_VALIDATION_ERROR;
  }
}

// Runs body, turning exceptions into a status and the thread-local message.
template <typename F>
ssp_status guard(F&& body) {
  g_last_error.clear();
  g_last_kind.clear();
  try {
    return body();
  } catch (const ssp::Error& err) {
    g_last_error = err.what();
    g_last_kind = ssp::errc_name(err.code());
    return status_for(err.code());
  } catch (const std::exception& err) {
    g_last_error = err.what();
    g_last_kind = "Internal";
    return SSP_RUNTIME_ERROR;
  }
}

ssp_status null_arg(const char* what) {
  g_last_error = std::string(what) + " must not be null";
  g_last_kind = "InvalidArgument";
  return SSP_VALIDATION_ERROR;
}

ssp::RunOptions run_options(const ssp_options* opts) {
  ssp_options o;
  ssp_options_init(&o);
  if (opts) o = *opts;
  ssp::RunOptions r;
  r.tol = o.tol;
  r.max_iter = o.max_iter;
  r.seed = o.seed;
  if (!(r.tol > 0.0)) ssp::fail(ssp::Errc::Validation, "tol must be positive");
  if (r.max_iter < 1) ssp::fail(ssp::Errc::Validation, "max_iter must be positive");
  return r;
}

ssp_status emit(ssp::Report report, const ssp_options* opts, ssp_report** out) {
  const ssp::Format format = opts && opts->format == SSP_FORMAT_CSV ? ssp::Format::Csv : ssp::Format::Json;
  auto* r = new ssp_report{std::move(report), {}};
  r->text = r->report.render(format);
  *out = r;
  return r->report.passed ? SSP_OK : SSP_VERIFICATION_FAILED;
}

ssp::Vec to_vec(const double* x, size_t n) { return x ? ssp::Vec(x, x + n) : ssp::Vec{}; }

ssp::TwoStateParams to_params(const ssp_two_state_params& p) {
  return {p.p11, p.p12, p.p21, p.p22, p.eps1, p.eps2, p.c1, p.c2};
}

}  // namespace

extern "C" {

void ssp_options_init(ssp_options* opts) {
  if (!opts) return;
  opts->tol = 1e-10;
  opts->max_iter = 1000000;
  opts->seed = 1;
  opts->format = SSP_FORMAT_JSON;
}

void ssp_learn_options_init(ssp_learn_options* opts) {
  if (!opts) return;
  opts->algorithm = "evi";
  opts->planner = "exact";
  opts->episodes = 100;
  opts->delta = 0.1;
  opts->b_star = 10.0;
  opts->epsilon_explore = 0.1;
  opts->fixed_epsilon = 0.0;
  opts->has_fixed_epsilon = 0;
  opts->use_star = 1;
  opts->exact_model = 0;
}

const char* ssp_last_error(void) { return g_last_error.c_str(); }
const char* ssp_last_error_kind(void) { return g_last_kind.c_str(); }

ssp_status ssp_instance_load(const char* path, ssp_instance** out) {
  if (!path || !out) return null_arg("path and out");
  return guard([&] {
    *out = new ssp_instance{ssp::load_instance(path)};
    return SSP_OK;
  });
}

ssp_status ssp_instance_parse(const char* json_text, ssp_instance** out) {
  if (!json_text || !out) return null_arg("json_text and out");
  return guard([&] {
    *out = new ssp_instance{ssp::decode_instance(json_text)};
    return SSP_OK;
  });
}

ssp_status ssp_two_state_instance(const ssp_two_state_params* params, ssp_instance** out) {
  if (!params || !out) return null_arg("params and out");
  return guard([&] {
    *out = new ssp_instance{ssp::two_state_document(to_params(*params))};
    return SSP_OK;
  });
}

void ssp_instance_free(ssp_instance* inst) { delete inst; }

int ssp_instance_num_states(const ssp_instance* inst) { return inst ? inst->doc.instance.num_states : 0; }

ssp_status ssp_instance_encode(const ssp_instance* inst, char** out) {
  if (!inst || !out) return null_arg("inst and out");
  return guard([&] {
    const std::string text = ssp::encode_instance(inst->doc);
    *out = static_cast<char*>(std::malloc(text.size() + 1));
    std::memcpy(*out, text.c_str(), text.size() + 1);
    return SSP_OK;
  });
}

void ssp_string_free(char* text) { std::free(text); }

ssp_status ssp_plan(const ssp_instance* inst, const ssp_options* opts, ssp_report** out) {
  if (!inst || !out) return null_arg("inst and out");
  return guard([&] { return emit(ssp::plan_report(inst->doc, run_options(opts)), opts, out); });
}

ssp_status ssp_evi(const ssp_instance* inst, const ssp_options* opts, ssp_report** out) {
  if (!inst || !out) return null_arg("inst and out");
  return guard([&] { return emit(ssp::evi_report(inst->doc, run_options(opts)), opts, out); });
}

ssp_status ssp_bounds(const ssp_instance* inst, int state, int action_id, const double* x, size_t n,
                      int grid_resolution, const ssp_options* opts, ssp_report** out) {
  if (!inst || !out || !x) return null_arg("inst, x and out");
  return guard([&] {
    run_options(opts);
    return emit(ssp::bounds_report(inst->doc, state, action_id, to_vec(x, n), grid_resolution), opts, out);
  });
}

ssp_status ssp_dagger(const ssp_instance* inst, const char* variant, const char* floor, const double* x0, size_t n,
                      const char* arrow_field, const ssp_options* opts, ssp_report** out) {
  if (!inst || !out) return null_arg("inst and out");
  return guard([&] {
    ssp::DaggerRequest req;
    if (variant) req.variant = ssp::parse_bound_variant(variant);
    if (floor) {
      const std::string f = floor;
      if (f == "zero") {
        req.floor = ssp::Floor::Zero;
      } else if (f != "cost") {
        ssp::fail(ssp::Errc::Parse, "floor must be cost or zero");
      }
    }
    req.x0 = to_vec(x0, n);
    if (arrow_field) req.arrow_field = ssp::parse_arrow_grid(arrow_field);
    return emit(ssp::dagger_report(inst->doc, req, run_options(opts)), opts, out);
  });
}

ssp_status ssp_dagger_preset(const char* name, const ssp_options* opts, ssp_report** out) {
  if (!name || !out) return null_arg("name and out");
  return guard([&] {
    const ssp::DaggerPreset preset = ssp::dagger_preset(name);
    ssp::Report report = ssp::dagger_report(ssp::two_state_document(preset.params), preset.request, run_options(opts));
    report.json["preset"] = name;
    return emit(std::move(report), opts, out);
  });
}

ssp_status ssp_two_state(const ssp_two_state_params* params, const ssp_options* opts, ssp_report** out) {
  if (!params || !out) return null_arg("params and out");
  return guard([&] { return emit(ssp::two_state_report(to_params(*params), run_options(opts)), opts, out); });
}

ssp_status ssp_program(const ssp_instance* inst, int grid_resolution, const ssp_options* opts, ssp_report** out) {
  if (!inst || !out) return null_arg("inst and out");
  return guard([&] { return emit(ssp::program_report(inst->doc, grid_resolution, run_options(opts)), opts, out); });
}

ssp_status ssp_learn(const ssp_instance* inst, const ssp_learn_options* learn, const ssp_options* opts,
                     ssp_report** out) {
  if (!inst || !out) return null_arg("inst and out");
  return guard([&] {
    ssp_learn_options lo;
    ssp_learn_options_init(&lo);
    if (learn) lo = *learn;
    const ssp::RunOptions ro = run_options(opts);
    ssp::LearnRequest req;
    req.algorithm = lo.algorithm ? lo.algorithm : "evi";
    const std::string planner = lo.planner ? lo.planner : "exact";
    if (planner == "dagger") {
      req.config.planner = ssp::LearnerPlanner::Dagger;
    } else if (planner != "exact") {
      ssp::fail(ssp::Errc::Parse, "planner must be exact or dagger");
    }
    req.config.num_episodes = lo.episodes;
    req.config.delta = lo.delta;
    req.config.b_star = lo.b_star;
    req.config.seed = ro.seed;
    req.config.use_star = lo.use_star != 0;
    req.config.evi_tol = std::max(ro.tol, 1e-12);
    if (lo.has_fixed_epsilon) req.config.fixed_epsilon = lo.fixed_epsilon;
    req.epsilon_explore = lo.epsilon_explore;
    req.exact_model = lo.exact_model != 0;
    return emit(ssp::learn_report(inst->doc, req), opts, out);
  });
}

ssp_status ssp_verify(const char* corpus_dir, const ssp_options* opts, ssp_report** out) {
  if (!corpus_dir || !out) return null_arg("corpus_dir and out");
  return guard([&] { return emit(ssp::verify_report(corpus_dir, run_options(opts)), opts, out); });
}

const char* ssp_report_text(const ssp_report* report) { return report ? report->text.c_str() : ""; }

size_t ssp_report_values(const ssp_report* report, const double** values) {
  if (!report) return 0;
  if (values) *values = report->report.values.data();
  return report->report.values.size();
}

int ssp_report_passed(const ssp_report* report) { return report && report->report.passed ? 1 : 0; }

void ssp_report_free(ssp_report* report) { delete report; }

}  // extern "C"
