#include <cctype>

#include "doctest.h"
#include "json.hpp"
#include "notchkit/palette.hpp"
#include "oracles.hpp"

using namespace notchkit;
using nlohmann::json;

namespace {

json default_doc() { return json::parse(default_palette_document()); }

json& block_by_id(json& doc, const std::string& id) {
  for (auto& b : doc["blocks"]) {
    if (b["id"] == id) return b;
  }
  throw std::logic_error("no block " + id);
}

PaletteErrc load_error(const json& doc) {
  try {
    load_palette(doc.dump());
  } catch (const PaletteError& e) {
    return e.code();
  }
  FAIL("palette loaded");
  return PaletteErrc::Malformed;
}

std::vector<std::string> ids(const std::vector<BlockDefinition>& defs) {
  std::vector<std::string> out;
  for (const auto& d : defs) out.push_back(d.id);
  return out;
}

}  // namespace

TEST_SUITE("block-model") {

TEST_CASE("compatible matches the hand-written table on all 36 pairs") {
  for (auto produced : kAllShapes) {
    for (auto accepts : kAllShapes) {
      INFO(to_string(produced), " -> ", to_string(accepts));
      CHECK(compatible(produced, accepts) == testing::compatible_table(produced, accepts));
    }
  }
}

TEST_CASE("compatible examples") {
  CHECK(compatible(ConnectorShape::Number, ConnectorShape::Any));
  CHECK_FALSE(compatible(ConnectorShape::Boolean, ConnectorShape::Number));
  CHECK(compatible(ConnectorShape::Command, ConnectorShape::ContainerSlot));
  CHECK_FALSE(compatible(ConnectorShape::Command, ConnectorShape::Number));
  CHECK(compatible(ConnectorShape::Any, ConnectorShape::Boolean));
  CHECK_FALSE(compatible(ConnectorShape::Any, ConnectorShape::Command));
}

TEST_CASE("the default palette has four categories in order") {
  const Palette& p = default_palette();
  REQUIRE(p.categories().size() == 4);
  CHECK(p.categories()[0].name == "Control");
  CHECK(p.categories()[1].name == "Values");
  CHECK(p.categories()[2].name == "Operators");
  CHECK(p.categories()[3].name == "Sound/Output");
}

TEST_CASE("definitions_for lists a category in display order") {
  const Palette& p = default_palette();
  CHECK(ids(definitions_for(p, "Control")) ==
        std::vector<std::string>{"if", "if_else", "while", "repeat", "for_collapsed", "for_clauses"});
  CHECK(ids(definitions_for(p, "Sound/Output")) == std::vector<std::string>{"say", "play_note", "move_forward"});
  CHECK(ids(definitions_for(p, "Control")) == ids(definitions_for(p, "Control")));
}

TEST_CASE("definitions_for rejects an unknown category") {
  try {
    definitions_for(default_palette(), "Sensing");
    FAIL("no error");
  } catch (const PaletteError& e) {
    CHECK(e.code() == PaletteErrc::UnknownCategory);
  }
}

TEST_CASE("labels are plain words without punctuation") {
  for (const auto* def : default_palette().all()) {
    for (const auto& w : def->words()) {
      for (char c : w) CHECK_MESSAGE(std::isalnum(static_cast<unsigned char>(c)), def->id, ": ", w);
    }
  }
}

TEST_CASE("socket defaults are the documented ones") {
  const Palette& p = default_palette();
  const auto& note = p.at("play_note");
  REQUIRE(note.sockets.size() == 2);
  CHECK(literal_equal(*note.sockets[0].default_value, Literal{60.0}));
  CHECK(literal_equal(*note.sockets[1].default_value, Literal{0.5}));
  CHECK(literal_equal(*p.at("for_collapsed").sockets[1].default_value, Literal{10.0}));
  CHECK(p.at("for_collapsed").chunk_level == ChunkLevel::Collapsed);
  CHECK(p.at("for_clauses").chunk_level == ChunkLevel::Clauses);
}

TEST_CASE("every defaults and dropdown entry fits its socket") {
  for (const auto* def : default_palette().all()) {
    for (const auto& s : def->sockets) {
      if (s.default_value) CHECK(s.accepts_literal(*s.default_value));
      for (const auto& d : s.dropdown) CHECK(s.accepts_literal(d));
    }
  }
}

TEST_CASE("every valid node variant has a block") {
  const Palette& p = default_palette();
  CHECK(p.for_node(NodeKind::Repeat, "") != nullptr);
  CHECK(p.for_node(NodeKind::ForClassic, "", ChunkLevel::Collapsed)->id == "for_collapsed");
  CHECK(p.for_node(NodeKind::ForClassic, "", ChunkLevel::Clauses)->id == "for_clauses");
  for (std::string op : {"+", "-", "*", "/", "<", "<=", ">", ">=", "==", "!=", "&&", "||"}) {
    CHECK_MESSAGE(p.for_node(NodeKind::ExprBinary, op) != nullptr, op);
  }
  for (std::string f : {"abs", "round", "min", "max"}) CHECK(p.for_node(NodeKind::ExprCall, f) != nullptr);
  for (std::string c : {"say", "playNoteFor", "moveForward"}) CHECK(p.for_node(NodeKind::CallStmt, c) != nullptr);
  CHECK(p.find(kErrorStatementBlock) != nullptr);
  CHECK(p.find(kErrorExpressionBlock) != nullptr);
}

TEST_CASE("load_palette reproduces the shipped palette") {
  const Palette p = load_palette(default_palette_document());
  CHECK(p.version() == default_palette().version());
  CHECK(p.all().size() == default_palette().all().size());
}

TEST_CASE("duplicate ids are rejected") {
  json doc = default_doc();
  doc["blocks"].push_back(block_by_id(doc, "say"));
  CHECK(load_error(doc) == PaletteErrc::DuplicateBlockId);
}

TEST_CASE("a default that violates its shape is rejected") {
  json doc = default_doc();
  block_by_id(doc, "while")["label_segments"][1]["default"] = "5";
  CHECK(load_error(doc) == PaletteErrc::DefaultViolatesShape);
}

TEST_CASE("a dropdown entry that violates its shape is rejected") {
  json doc = default_doc();
  block_by_id(doc, "play_note")["label_segments"][1]["dropdown"].push_back("loud");
  CHECK(load_error(doc) == PaletteErrc::DropdownViolatesShape);
}

TEST_CASE("a palette that cannot render a node kind is rejected") {
  json doc = default_doc();
  auto& blocks = doc["blocks"];
  for (auto it = blocks.begin(); it != blocks.end(); ++it) {
    if ((*it)["id"] == "while") {
      blocks.erase(it);
      break;
    }
  }
  CHECK(load_error(doc) == PaletteErrc::UncoveredNodeKind);
}

TEST_CASE("a block in an undeclared category is rejected") {
  json doc = default_doc();
  block_by_id(doc, "say")["category"] = "Sensing";
  CHECK(load_error(doc) == PaletteErrc::UnknownCategory);
}

TEST_CASE("malformed documents are rejected") {
  CHECK(load_error(json::parse("{}")) == PaletteErrc::Malformed);
  json doc = default_doc();
  block_by_id(doc, "say")["produces"] = "Sparkle";
  CHECK(load_error(doc) == PaletteErrc::Malformed);
  CHECK_THROWS_AS(load_palette("not json"), PaletteError);
}

}  // TEST_SUITE
