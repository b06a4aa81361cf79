#include "notchkit/metrics.hpp"

#include "json.hpp"
#include "notchkit/projection.hpp"
#include "notchkit/serialize.hpp"

namespace notchkit {

UnitCount count_units(std::string_view text) {
  UnitCount c;
  for (const auto& t : tokenize(text)) {
    switch (t.kind) {
      case TokenKind::Word: ++c.words; break;
      case TokenKind::Punct: ++c.punctuation; break;
      case TokenKind::Number: ++c.numbers; break;
      default: break;
    }
  }
  c.total = c.words + c.punctuation + c.numbers;
  return c;
}

namespace {

std::size_t own_chunks(const Palette& palette, const BlockInstance& b) {
  const auto& def = palette.at(b.definition);
  std::size_t n = 1;
  for (std::size_t i = 0; i < b.sockets.size() && i < def.sockets.size(); ++i) {
    if (def.sockets[i].exposed() && !b.sockets[i].empty()) ++n;
  }
  return n;
}

void collect(const Palette& palette, const std::vector<BlockInstance>& stack, std::vector<ChunkEntry>& out) {
  for (const auto& b : stack) {
    out.push_back(ChunkEntry{b.id, b.definition, own_chunks(palette, b)});
    for (const auto& s : b.sockets) collect(palette, s.blocks, out);
  }
}

}  // namespace

std::size_t chunk_count(const Palette& palette, const BlockInstance& block, ChunkLevel level) {
  Workspace w = empty_workspace(palette);
  w.islands.push_back(Island{{0, 0}, {block}});
  w = set_chunk_level(palette, w, level);
  return own_chunks(palette, w.islands.front().stack.front());
}

ChunkReport chunk_report(const Palette& palette, const Workspace& w, ChunkLevel level) {
  ChunkReport r;
  r.level = level;
  const Workspace leveled = set_chunk_level(palette, w, level);
  for (const auto& island : leveled.islands) collect(palette, island.stack, r.blocks);
  return r;
}

std::string metrics_json(const Palette& palette, std::string_view text, ChunkLevel level) {
  using nlohmann::json;
  json doc;
  doc["schema_version"] = kJsonSchemaVersion;
  doc["threshold"] = kWorkingMemoryThreshold;
  json lines = json::array();
  std::size_t number = 1;
  std::size_t begin = 0;
  while (begin < text.size()) {
    std::size_t end = text.find('\n', begin);
    if (end == std::string_view::npos) end = text.size();
    const auto line = text.substr(begin, end - begin);
    const UnitCount c = count_units(line);
    lines.push_back(json{{"line", number},
                         {"text", line},
                         {"words", c.words},
                         {"punctuation", c.punctuation},
                         {"numbers", c.numbers},
                         {"total", c.total},
                         {"over_threshold", c.total > kWorkingMemoryThreshold}});
    ++number;
    begin = end + 1;
  }
  doc["lines"] = std::move(lines);
  try {
    const BlockTree blocks = switch_to_blocks(palette, text, level);
    const ChunkReport r = chunk_report(palette, blocks, level);
    json entries = json::array();
    for (const auto& e : r.blocks) {
      entries.push_back(json{{"instance_id", e.id},
                             {"definition_id", e.definition},
                             {"chunks", e.chunks},
                             {"over_threshold", e.chunks > r.threshold}});
    }
    doc["chunks"] = json{{"level", to_string(level)},
                         {"rule", "1 per block + 1 per filled exposed socket"},
                         {"blocks", std::move(entries)}};
    doc["diagnostics"] = json::array();
  } catch (const ModeSwitchRefused& e) {
    doc["chunks"] = nullptr;
    doc["diagnostics"] = json::parse(diagnostics_json(e.diagnostics()))["diagnostics"];
  }
  return doc.dump(2);
}

}  // namespace notchkit
