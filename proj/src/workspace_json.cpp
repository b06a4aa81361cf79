#include <cmath>
#include <set>

#include "json.hpp"
#include "notchkit/workspace.hpp"

namespace notchkit {

using nlohmann::json;

namespace {

json literal_json(const Literal& v) {
  if (const auto* d = std::get_if<double>(&v)) return *d;
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  return std::get<bool>(v);
}

json span_json(const SyntaxNode& n) { return json::array({n.span.begin, n.span.end}); }

json stack_json(const std::vector<BlockInstance>& stack, std::size_t i, bool provenance);

json block_json(const BlockInstance& b, const std::vector<BlockInstance>& stack, std::size_t i,
                bool provenance) {
  json j;
  j["instance_id"] = b.id;
  j["definition_id"] = b.definition;
  json sockets = json::array();
  for (const auto& f : b.sockets) {
    if (f.literal) {
      json s{{"literal", literal_json(*f.literal)}};
      if (provenance && f.origin) s["span"] = span_json(*f.origin);
      sockets.push_back(std::move(s));
    } else if (!f.blocks.empty()) {
      // A value socket holds one block; a slot holds a stack. Both are
      // written as a chain so the reader does not need the palette to
      // tell them apart.
      sockets.push_back(json{{"stack", stack_json(f.blocks, 0, provenance)}});
    } else {
      sockets.push_back(nullptr);
    }
  }
  j["sockets"] = std::move(sockets);
  j["next"] = stack_json(stack, i + 1, provenance);
  if (provenance && b.origin) j["span"] = span_json(*b.origin);
  return j;
}

json stack_json(const std::vector<BlockInstance>& stack, std::size_t i, bool provenance) {
  if (i >= stack.size()) return nullptr;
  return block_json(stack[i], stack, i, provenance);
}

[[noreturn]] void schema(const std::string& what) { throw EditError(EditErrc::SchemaError, what); }

class Reader {
 public:
  explicit Reader(const Palette& palette) : palette_(palette) {}

  std::vector<BlockInstance> chain(const json& j) {
    std::vector<BlockInstance> out;
    const json* cur = &j;
    while (!cur->is_null()) {
      if (!cur->is_object()) schema("block must be an object");
      out.push_back(block(*cur));
      if (!cur->contains("next")) break;
      cur = &(*cur)["next"];
    }
    return out;
  }

 private:
  Literal literal(const json& v) {
    if (v.is_boolean()) return v.get<bool>();
    if (v.is_number()) {
      const double d = v.get<double>();
      if (!std::isfinite(d)) schema("non-finite number");
      return d;
    }
    if (v.is_string()) return v.get<std::string>();
    schema("literal must be a number, string or boolean");
  }

  BlockInstance block(const json& j) {
    BlockInstance b;
    if (!j.contains("instance_id") || !j["instance_id"].is_number_unsigned()) schema("missing instance_id");
    if (!j.contains("definition_id") || !j["definition_id"].is_string()) schema("missing definition_id");
    b.id = j["instance_id"].get<InstanceId>();
    if (b.id == 0) schema("instance_id 0 is reserved");
    if (!ids_.insert(b.id).second) schema("duplicate instance_id " + std::to_string(b.id));
    b.definition = j["definition_id"].get<std::string>();
    const auto* def = palette_.find(b.definition);
    if (def == nullptr) schema("unknown definition_id '" + b.definition + "'");
    if (!j.contains("sockets") || !j["sockets"].is_array()) schema("missing sockets");
    const auto& sockets = j["sockets"];
    if (sockets.size() != def->sockets.size()) {
      schema("block '" + b.definition + "' needs " + std::to_string(def->sockets.size()) + " sockets");
    }
    for (std::size_t i = 0; i < sockets.size(); ++i) {
      const auto& s = sockets[i];
      const auto& sdef = def->sockets[i];
      SocketFill f;
      if (s.is_null()) {
      } else if (s.is_object() && s.contains("literal")) {
        if (sdef.is_slot()) schema("container slot cannot hold a literal");
        f.literal = literal(s["literal"]);
        if (!sdef.accepts_literal(*f.literal)) schema("literal does not fit socket " + std::to_string(i));
      } else if (s.is_object() && s.contains("stack")) {
        f.blocks = chain(s["stack"]);
        if (!sdef.is_slot() && f.blocks.size() > 1) schema("value socket holds more than one block");
        if (!sdef.is_slot() && !sdef.hosts_blocks() && !f.blocks.empty()) schema("field cannot hold a block");
        for (const auto& c : f.blocks) {
          if (!compatible(palette_.at(c.definition).produces, sdef.accepts)) {
            schema("block '" + c.definition + "' does not fit socket " + std::to_string(i));
          }
        }
      } else {
        schema("socket must be null, {literal} or {stack}");
      }
      b.sockets.push_back(std::move(f));
    }
    return b;
  }

  const Palette& palette_;
  std::set<InstanceId> ids_;
};

}  // namespace

std::string save_workspace(const Workspace& w, bool with_provenance) {
  json doc;
  doc["schema_version"] = kWorkspaceSchemaVersion;
  doc["palette_version"] = w.palette_version;
  json islands = json::array();
  for (const auto& island : w.islands) {
    islands.push_back(json{{"x", island.position.x},
                           {"y", island.position.y},
                           {"root", stack_json(island.stack, 0, with_provenance)}});
  }
  doc["islands"] = std::move(islands);
  return doc.dump(2);
}

Workspace load_workspace(const Palette& palette, std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    schema(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) schema("workspace must be an object");
  if (doc.contains("schema_version") &&
      (!doc["schema_version"].is_number_integer() || doc["schema_version"].get<int>() != kWorkspaceSchemaVersion)) {
    schema("unsupported schema_version");
  }
  if (!doc.contains("palette_version") || !doc["palette_version"].is_string()) schema("missing palette_version");
  if (doc["palette_version"].get<std::string>() != palette.version()) {
    throw EditError(EditErrc::PaletteVersionMismatch, "workspace was saved with palette '" +
                                                          doc["palette_version"].get<std::string>() +
                                                          "', loaded palette is '" + palette.version() + "'");
  }
  if (!doc.contains("islands") || !doc["islands"].is_array()) schema("missing islands");
  Workspace w = empty_workspace(palette);
  Reader reader(palette);
  for (const auto& island : doc["islands"]) {
    if (!island.is_object() || !island.contains("x") || !island.contains("y") || !island.contains("root")) {
      schema("island needs x, y and root");
    }
    if (!island["x"].is_number_integer() || !island["y"].is_number_integer()) schema("island position must be integers");
    Island out;
    out.position = Position{island["x"].get<int>(), island["y"].get<int>()};
    out.stack = reader.chain(island["root"]);
    if (out.stack.empty()) schema("island has no root block");
    if (out.stack.size() > 1) {
      for (const auto& b : out.stack) {
        if (palette.at(b.definition).produces != ConnectorShape::Command) schema("value block inside a stack");
      }
    }
    w.islands.push_back(std::move(out));
  }
  return w;
}

}  // namespace notchkit
