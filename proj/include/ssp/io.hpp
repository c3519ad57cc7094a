#pragma once

#include <optional>
#include <string>

#include "json.hpp"
#include "ssp/divergence.hpp"
#include "ssp/evi.hpp"
#include "ssp/learning.hpp"
#include "ssp/two_state.hpp"

namespace ssp {

using Json = nlohmann::ordered_json;

// Confidence parameters as written in an instance file. The centre is the
// instance's own transition table.
struct ConfidenceSpec {
  DivergenceKind kind = DivergenceKind::L1;
  SaTable epsilon;
  Modification modification = Modification::None;
  std::optional<SaTable> counts;
  bool l1_goal_inclusive = false;
  bool operator==(const ConfidenceSpec&) const = default;
};

struct InstanceDocument {
  SspInstance instance;
  std::optional<ConfidenceSpec> confidence;
  bool operator==(const InstanceDocument&) const = default;
};

// Throws Errc::Parse (with line and column) or Errc::Validation (with field path).
InstanceDocument decode_instance(const std::string& text);
InstanceDocument load_instance(const std::string& path);
std::string encode_instance(const InstanceDocument& doc);

ConfidenceSet build_confidence(const InstanceDocument& doc);

// Instance for a 2-state single-action parameter set, with its l1 radii.
InstanceDocument two_state_document(const TwoStateParams& p);

// Real formatted with 17 significant digits.
std::string fmt_real(double v);

enum class Format { Json, Csv };
Format parse_format(const std::string& text);

struct Report {
  Json json = Json::object();
  std::string csv;
  Vec values;
  bool passed = true;
  std::string render(Format format) const;
};

struct RunOptions {
  double tol = 1e-10;
  long max_iter = 1000000;
  std::uint64_t seed = 1;
};

Report plan_report(const InstanceDocument& doc, const RunOptions& opts);
Report evi_report(const InstanceDocument& doc, const RunOptions& opts);
Report bounds_report(const InstanceDocument& doc, int state, int action_id, const Vec& x, int grid_resolution);

struct ArrowGrid {
  double lo = 0.0;
  double hi = 1.0;
  int steps = 2;
};
ArrowGrid parse_arrow_grid(const std::string& text);  // "lo:hi:steps"

struct DaggerRequest {
  BoundVariant variant = BoundVariant::L1Dagger;
  Vec x0;
  Floor floor = Floor::Cost;
  std::optional<ArrowGrid> arrow_field;
  bool keep_trace = true;
};

Report dagger_report(const InstanceDocument& doc, const DaggerRequest& req, const RunOptions& opts);

// Named figure presets: fig2, fig3 (arrow fields), fig4, fig5 (iteration traces).
struct DaggerPreset {
  TwoStateParams params;
  DaggerRequest request;
};
DaggerPreset dagger_preset(const std::string& name);

Report two_state_report(const TwoStateParams& p, const RunOptions& opts);
Report program_report(const InstanceDocument& doc, int grid_resolution, const RunOptions& opts);

struct LearnRequest {
  std::string algorithm = "evi";  // evi | greedy
  LearnerConfig config;
  double epsilon_explore = 0.1;
  bool exact_model = false;  // pre-seed counts from the true transitions
  long exact_scale = 1000000;
};

// Counts with n(s,a) = scale whose empirical model reproduces inst up to rounding.
CountsTable counts_from_model(const SspInstance& inst, long scale);

Report learn_report(const InstanceDocument& doc, const LearnRequest& req);

// Runs the invariant and oracle suites over every *.json instance in the
// corpus directory plus seeded random instances.
Report verify_report(const std::string& corpus_dir, const RunOptions& opts);

}  // namespace ssp
