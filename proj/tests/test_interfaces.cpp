#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "generator.hpp"
#include "json.hpp"
#include "notchkit/corpus.hpp"
#include "notchkit/projection.hpp"
#include "notchkit/runtime.hpp"
#include "notchkit/serialize.hpp"
#include "notchkit/svg.hpp"
#include "oracles.hpp"

using namespace notchkit;
using nlohmann::json;

namespace {

const Palette& P() { return default_palette(); }

void check_node(const json& n) {
  REQUIRE(n.is_object());
  CHECK(n["kind"].is_string());
  NodeKind kind;
  CHECK(parse_node_kind(n["kind"].get<std::string>(), kind));
  REQUIRE(n["span"].is_array());
  CHECK(n["span"].size() == 2);
  CHECK(n["trivia"]["leading"].is_string());
  CHECK(n["trivia"]["trailing"].is_string());
  REQUIRE(n["children"].is_array());
  for (const auto& c : n["children"]) check_node(c);
  if (n.contains("bodies")) {
    for (const auto& body : n["bodies"]) {
      for (const auto& s : body) check_node(s);
    }
  }
}

void check_block(const json& b) {
  CHECK(b["instance_id"].is_number_unsigned());
  CHECK(b["definition_id"].is_string());
  REQUIRE(b["sockets"].is_array());
  for (const auto& s : b["sockets"]) {
    if (s.is_null()) continue;
    REQUIRE(s.is_object());
    CHECK((s.contains("literal") != s.contains("stack")));
    if (s.contains("stack")) check_block(s["stack"]);
  }
  CHECK((b["next"].is_null() || b["next"].is_object()));
  if (b["next"].is_object()) check_block(b["next"]);
}

}  // namespace

TEST_SUITE("interfaces") {

TEST_CASE("parse json carries the lossless tree and diagnostics") {
  const std::string text = "// hi\nvar x = 1;\nfor (var i = 0; i < 3; i++) {\n  say(i);\n}\nx = ;\n";
  const json doc = json::parse(parse_result_json(parse(text)));
  CHECK(doc["schema_version"] == kJsonSchemaVersion);
  check_node(doc["tree"]);
  CHECK(doc["tree"]["kind"] == "Program");
  const auto& stmts = doc["tree"]["bodies"][0];
  REQUIRE(stmts.size() == 3);
  CHECK(stmts[0]["trivia"]["leading"] == "// hi\n");
  CHECK(stmts[1]["update"] == "i");
  CHECK(stmts[2]["kind"] == "ErrorStmt");
  REQUIRE(doc["diagnostics"].size() == 1);
  CHECK(doc["diagnostics"][0]["severity"] == "Recoverable");
}

TEST_CASE("diagnostics json") {
  const json doc = json::parse(diagnostics_json(parse("while (true) {\n").diagnostics));
  CHECK(doc["schema_version"] == kJsonSchemaVersion);
  REQUIRE(doc["diagnostics"].size() >= 1);
  CHECK(doc["diagnostics"][0]["severity"] == "SwitchBlocking");
  CHECK(doc["diagnostics"][0]["message"].is_string());
  CHECK(doc["diagnostics"][0]["span"].size() == 2);
}

TEST_CASE("palette json reloads to the same palette") {
  const std::string doc = palette_json(P());
  const Palette again = load_palette(doc);
  CHECK(palette_json(again) == doc);
  REQUIRE(again.all().size() == P().all().size());
  for (std::size_t i = 0; i < again.all().size(); ++i) {
    CHECK(again.all()[i]->id == P().all()[i]->id);
    CHECK(again.all()[i]->label_text() == P().all()[i]->label_text());
  }
}

TEST_CASE("workspace json layout") {
  testing::Rng rng(71);
  for (int i = 0; i < 50; ++i) {
    const json doc = json::parse(save_workspace(testing::random_workspace(rng, P(), 20)));
    CHECK(doc["schema_version"] == kWorkspaceSchemaVersion);
    CHECK(doc["palette_version"] == P().version());
    for (const auto& island : doc["islands"]) {
      CHECK(island["x"].is_number_integer());
      CHECK(island["y"].is_number_integer());
      check_block(island["root"]);
    }
  }
}

TEST_CASE("workspace json with provenance carries spans") {
  const std::string text = "say(1);\n";
  const json doc = json::parse(save_workspace(switch_to_blocks(P(), text, ChunkLevel::Collapsed), true));
  const auto& root = doc["islands"][0]["root"];
  CHECK(root["span"] == json::array({0, 7}));
  CHECK(root["sockets"][0]["literal"] == 1);
}

TEST_CASE("trace json lines") {
  const RunResult r = run(parse("var n = 0;\nrepeat (2) {\n  n = n + 1;\n  moveForward(n);\n}\n").tree);
  std::istringstream in(trace_jsonl(r.trace));
  std::string line;
  std::size_t count = 0;
  while (std::getline(in, line)) {
    const json j = json::parse(line);
    CHECK(j["step"] == count);
    CHECK(j["node"]["kind"].is_string());
    CHECK(j["node"]["span"].size() == 2);
    CHECK(j["part"].is_string());
    CHECK(j["deltas"].is_array());
    CHECK((j["effect"].is_null() || j["effect"].is_object()));
    ++count;
  }
  CHECK(count == r.trace.size());
}

TEST_CASE("corpus json aggregates its files") {
  const CorpusReport report = corpus_report(P(), NOTCHKIT_CORPUS_DIR, {});
  const json doc = json::parse(corpus_json(report));
  std::size_t pass = 0;
  for (const auto& f : doc["files"]) pass += f["roundtrip"]["pass"].get<bool>();
  CHECK(doc["aggregate"]["roundtrip_pass"] == pass);
  CHECK(doc["aggregate"]["files"] == doc["files"].size());
  CHECK(doc["files"].size() >= 30);
}

TEST_CASE("svg is well formed enough") {
  const std::string svg =
      render_svg(P(), switch_to_blocks(P(), "repeat (3) {\n  say(1 + 2);\n}\n", ChunkLevel::Collapsed));
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("repeat") != std::string::npos);
}

}  // TEST_SUITE
