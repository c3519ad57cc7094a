#include <filesystem>
#include <string>

#include "doctest.h"
#include "ssp/io.hpp"

using namespace ssp;
namespace fs = std::filesystem;

namespace {

std::string error_text(const std::string& text, Errc expect) {
  try {
    decode_instance(text);
  } catch (const Error& e) {
    CHECK(e.code() == expect);
    return e.what();
  }
  FAIL("decode should have thrown");
  return {};
}

const char* kOneState = R"({
  "num_states": 1,
  "actions": [[0]],
  "costs": {"0,0": 0.5},
  "transitions": {"0,0": [0.5]}
})";

}  // namespace

TEST_CASE("corpus files round trip") {
  int files = 0;
  for (const auto& entry : fs::directory_iterator(SSP_DATA_DIR)) {
    if (entry.path().extension() != ".json") continue;
    ++files;
    const InstanceDocument doc = load_instance(entry.path().string());
    const std::string text = encode_instance(doc);
    CHECK(decode_instance(text) == doc);
    CHECK(encode_instance(decode_instance(text)) == text);
  }
  CHECK(files >= 5);
}

TEST_CASE("defaults and confidence blocks") {
  const InstanceDocument doc = decode_instance(kOneState);
  CHECK(doc.instance.initial_state == 0);
  CHECK_FALSE(doc.confidence.has_value());

  const InstanceDocument kl = load_instance(std::string(SSP_DATA_DIR) + "/kl_three_state.json");
  REQUIRE(kl.confidence.has_value());
  CHECK(kl.confidence->kind == DivergenceKind::KL);
  CHECK(build_confidence(kl).radius[0][0] == doctest::Approx(0.05));
}

TEST_CASE("parse errors carry a position") {
  const std::string msg = error_text("{\n  \"num_states\": 1,\n  oops\n}", Errc::Parse);
  CHECK(msg.find("line 3") != std::string::npos);
  CHECK(msg.find("column") != std::string::npos);
}

TEST_CASE("validation errors name the field") {
  std::string text = kOneState;
  text.replace(text.find("\"costs\": {\"0,0\": 0.5}"), 21, "\"costs\": {}");
  const std::string missing = error_text(text, Errc::Validation);
  CHECK(missing.find("costs[\"0,0\"]") != std::string::npos);

  std::string bad_row = kOneState;
  bad_row.replace(bad_row.find("[0.5]"), 5, "[1.5]");
  CHECK(error_text(bad_row, Errc::Validation).find("transitions") != std::string::npos);

  std::string extra = kOneState;
  extra.replace(extra.find("\"0,0\": 0.5"), 10, "\"0,0\": 0.5, \"0,7\": 0.5");
  error_text(extra, Errc::Validation);

  CHECK_THROWS_AS(load_instance("/nonexistent/file.json"), Error);
  try {
    load_instance("/nonexistent/file.json");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::Io);
  }
}

TEST_CASE("reports render in both formats") {
  const InstanceDocument doc = decode_instance(kOneState);
  const Report r = plan_report(doc, {});
  CHECK(r.passed);
  CHECK(r.values.at(0) == doctest::Approx(1.0));
  CHECK(r.render(Format::Csv).rfind("state,value_vi,value_pi,action\n", 0) == 0);
  const Json parsed = Json::parse(r.render(Format::Json));
  CHECK(parsed.contains("values"));
  CHECK(fmt_real(0.1) == "0.10000000000000001");
  CHECK(parse_format("csv") == Format::Csv);
  CHECK_THROWS_AS(parse_format("xml"), Error);
}

TEST_CASE("dagger presets and arrow grids") {
  const ArrowGrid g = parse_arrow_grid("-1:11:6");
  CHECK(g.lo == -1.0);
  CHECK(g.hi == 11.0);
  CHECK(g.steps == 6);
  CHECK_THROWS_AS(parse_arrow_grid("1:2"), Error);
  for (const char* name : {"fig2", "fig3", "fig4", "fig5"}) {
    const DaggerPreset p = dagger_preset(name);
    const Report r = dagger_report(two_state_document(p.params), p.request, {});
    CHECK_FALSE(r.csv.empty());
  }
  CHECK_THROWS_AS(dagger_preset("fig9"), Error);
}
