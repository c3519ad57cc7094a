#include "ssp/io.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "ssp/program.hpp"

namespace ssp {

namespace {

[[noreturn]] void field_error(const std::string& path, const std::string& msg) {
  fail(Errc::Validation, "field '" + path + "': " + msg);
}

std::string pair_key(int s, int a) { return std::to_string(s) + "," + std::to_string(a); }

const Json& require(const Json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) field_error(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) field_error(path.empty() ? key : path + "." + key, "missing");
  return *it;
}

double as_real(const Json& v, const std::string& path) {
  if (!v.is_number()) field_error(path, "expected a number");
  return v.get<double>();
}

int as_int(const Json& v, const std::string& path) {
  if (!v.is_number_integer()) field_error(path, "expected an integer");
  return v.get<int>();
}

// Reads a {"s,a": value} table into [s][local index] order and rejects
// keys naming unknown pairs.
template <typename F>
void read_pair_table(const Json& obj, const std::string& path, const SspInstance& shape, F&& on_entry) {
  if (!obj.is_object()) field_error(path, "expected an object keyed by \"s,a\"");
  std::set<std::string> known;
  for (int s = 0; s < shape.num_states; ++s)
    for (int k = 0; k < shape.num_actions(s); ++k) {
      const std::string key = pair_key(s, shape.action_ids[s][k]);
      known.insert(key);
      auto it = obj.find(key);
      if (it == obj.end()) field_error(path + "[\"" + key + "\"]", "missing");
      on_entry(s, k, *it, path + "[\"" + key + "\"]");
    }
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!known.count(it.key())) field_error(path + "[\"" + it.key() + "\"]", "unknown state-action pair");
}

Json pair_table(const SspInstance& inst, const SaTable& table) {
  Json out = Json::object();
  for (int s = 0; s < inst.num_states; ++s)
    for (int k = 0; k < inst.num_actions(s); ++k) out[pair_key(s, inst.action_ids[s][k])] = table[s][k];
  return out;
}

template <typename E>
E parse_enum_field(E (*parse)(const std::string&), const Json& v, const std::string& path) {
  if (!v.is_string()) field_error(path, "expected a string");
  try {
    return parse(v.get<std::string>());
  } catch (const Error& err) {
    field_error(path, err.what());
  }
}

}  // namespace

InstanceDocument decode_instance(const std::string& text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::parse_error& err) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < err.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    fail(Errc::Parse, "line " + std::to_string(line) + ", column " + std::to_string(col) + ": malformed JSON");
  }
  if (!root.is_object()) field_error("$", "expected an object");

  InstanceDocument doc;
  SspInstance& inst = doc.instance;
  inst.num_states = as_int(require(root, "num_states", ""), "num_states");
  if (inst.num_states < 1) field_error("num_states", "must be at least 1");
  inst.initial_state = root.contains("initial_state") ? as_int(root["initial_state"], "initial_state") : 0;
  if (inst.initial_state < 0 || inst.initial_state >= inst.num_states)
    field_error("initial_state", "must name a state in [0, num_states)");

  const Json& actions = require(root, "actions", "");
  if (!actions.is_array() || static_cast<int>(actions.size()) != inst.num_states)
    field_error("actions", "expected an array with one entry per state");
  for (int s = 0; s < inst.num_states; ++s) {
    const std::string path = "actions[" + std::to_string(s) + "]";
    const Json& ids = actions[s];
    if (!ids.is_array() || ids.empty()) field_error(path, "expected a nonempty array of action ids");
    std::vector<int> row;
    for (std::size_t j = 0; j < ids.size(); ++j) row.push_back(as_int(ids[j], path + "[" + std::to_string(j) + "]"));
    if (std::set<int>(row.begin(), row.end()).size() != row.size()) field_error(path, "duplicate action id");
    inst.action_ids.push_back(std::move(row));
  }

  inst.cost.assign(inst.num_states, {});
  inst.trans.assign(inst.num_states, {});
  for (int s = 0; s < inst.num_states; ++s) {
    inst.cost[s].resize(inst.num_actions(s));
    inst.trans[s].resize(inst.num_actions(s));
  }
  read_pair_table(require(root, "costs", ""), "costs", inst,
                  [&](int s, int k, const Json& v, const std::string& path) {
                    const double c = as_real(v, path);
                    if (!(c >= kMinCost && c <= 1.0)) field_error(path, "cost must lie in [1e-9, 1]");
                    inst.cost[s][k] = c;
                  });
  read_pair_table(require(root, "transitions", ""), "transitions", inst,
                  [&](int s, int k, const Json& v, const std::string& path) {
                    if (!v.is_array() || static_cast<int>(v.size()) != inst.num_states)
                      field_error(path, "expected an array of " + std::to_string(inst.num_states) + " reals");
                    Vec row;
                    for (std::size_t t = 0; t < v.size(); ++t) {
                      const std::string at = path + "[" + std::to_string(t) + "]";
                      row.push_back(as_real(v[t], at));
                      if (!(row.back() >= 0.0)) field_error(at, "probability must be nonnegative");
                    }
                    if (sum_of(row) > 1.0 + 1e-12) field_error(path, "row sums above 1");
                    inst.trans[s][k] = std::move(row);
                  });
  inst.validate();

  if (root.contains("confidence")) {
    const Json& c = root["confidence"];
    if (!c.is_object()) field_error("confidence", "expected an object");
    ConfidenceSpec spec;
    spec.kind = parse_enum_field(&parse_divergence_kind, require(c, "kind", "confidence"), "confidence.kind");
    if (c.contains("modification"))
      spec.modification = parse_enum_field(&parse_modification, c["modification"], "confidence.modification");
    const Json& eps = require(c, "epsilon", "confidence");
    spec.epsilon.assign(inst.num_states, {});
    if (eps.is_number()) {
      for (int s = 0; s < inst.num_states; ++s) spec.epsilon[s].assign(inst.num_actions(s), eps.get<double>());
    } else {
      for (int s = 0; s < inst.num_states; ++s) spec.epsilon[s].resize(inst.num_actions(s));
      read_pair_table(eps, "confidence.epsilon", inst, [&](int s, int k, const Json& v, const std::string& path) {
        spec.epsilon[s][k] = as_real(v, path);
      });
    }
    for (int s = 0; s < inst.num_states; ++s)
      for (double e : spec.epsilon[s])
        if (!(e >= 0.0)) field_error("confidence.epsilon", "radii must be nonnegative");
    if (c.contains("counts")) {
      SaTable counts(inst.num_states);
      for (int s = 0; s < inst.num_states; ++s) counts[s].resize(inst.num_actions(s));
      read_pair_table(c["counts"], "confidence.counts", inst, [&](int s, int k, const Json& v, const std::string& path) {
        counts[s][k] = as_real(v, path);
        if (counts[s][k] < 0.0) field_error(path, "counts must be nonnegative");
      });
      spec.counts = std::move(counts);
    }
    if (c.contains("l1_goal_inclusive")) {
      if (!c["l1_goal_inclusive"].is_boolean()) field_error("confidence.l1_goal_inclusive", "expected a boolean");
      spec.l1_goal_inclusive = c["l1_goal_inclusive"].get<bool>();
    }
    if (spec.modification != Modification::None && !spec.counts)
      field_error("confidence.counts", "required by the " + to_string(spec.modification) + " modification");
    doc.confidence = std::move(spec);
  }
  return doc;
}

InstanceDocument load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::Io, "cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return decode_instance(buf.str());
  } catch (const Error& err) {
    fail(err.code(), path + ": " + err.what());
  }
}

std::string encode_instance(const InstanceDocument& doc) {
  const SspInstance& inst = doc.instance;
  Json root = Json::object();
  root["num_states"] = inst.num_states;
  root["initial_state"] = inst.initial_state;
  root["actions"] = inst.action_ids;
  root["costs"] = pair_table(inst, inst.cost);
  Json trans = Json::object();
  for (int s = 0; s < inst.num_states; ++s)
    for (int k = 0; k < inst.num_actions(s); ++k) trans[pair_key(s, inst.action_ids[s][k])] = inst.trans[s][k];
  root["transitions"] = trans;
  if (doc.confidence) {
    const ConfidenceSpec& c = *doc.confidence;
    Json conf = Json::object();
    conf["kind"] = to_string(c.kind);
    conf["modification"] = to_string(c.modification);
    conf["epsilon"] = pair_table(inst, c.epsilon);
    if (c.counts) conf["counts"] = pair_table(inst, *c.counts);
    if (c.l1_goal_inclusive) conf["l1_goal_inclusive"] = true;
    root["confidence"] = conf;
  }
  return root.dump(2) + "\n";
}

ConfidenceSet build_confidence(const InstanceDocument& doc) {
  if (!doc.confidence) fail(Errc::Validation, "field 'confidence': missing");
  const ConfidenceSpec& c = *doc.confidence;
  ConfidenceSet conf = make_confidence_set(c.kind, doc.instance.trans, c.epsilon, c.modification, c.counts);
  conf.l1_goal_inclusive = c.l1_goal_inclusive;
  return conf;
}

InstanceDocument two_state_document(const TwoStateParams& p) {
  InstanceDocument doc;
  doc.instance = two_state_instance(p);
  ConfidenceSpec spec;
  spec.epsilon = {{p.eps1}, {p.eps2}};
  doc.confidence = spec;
  return doc;
}

std::string fmt_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Format parse_format(const std::string& text) {
  if (text == "json") return Format::Json;
  if (text == "csv") return Format::Csv;
  fail(Errc::Parse, "unknown format '" + text + "'");
}

std::string Report::render(Format format) const {
  if (format == Format::Csv) return csv;
  return json.dump(2) + "\n";
}

CountsTable counts_from_model(const SspInstance& inst, long scale) {
  if (scale < 1) fail(Errc::Validation, "scale must be positive");
  CountsTable counts = CountsTable::zeros(inst);
  for (int s = 0; s < inst.num_states; ++s)
    for (int k = 0; k < inst.num_actions(s); ++k) {
      long used = 0;
      for (int t = 0; t < inst.num_states; ++t) {
        const long n = std::lround(inst.trans[s][k][t] * static_cast<double>(scale));
        counts.n_sas[s][k][t] = n;
        used += n;
      }
      counts.n_sas[s][k][inst.num_states] = std::max<long>(scale - used, 0);
      counts.n_sa[s][k] = std::max(scale, used);
    }
  return counts;
}

}  // namespace ssp
