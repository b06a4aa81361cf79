#include "json.hpp"
#include "notchkit/serialize.hpp"

namespace notchkit {

using nlohmann::json;

namespace {

json span_json(Span s) { return json::array({s.begin, s.end}); }

json node_json(const SyntaxNode& n) {
  json j;
  j["kind"] = to_string(n.kind);
  j["span"] = span_json(n.span);
  j["trivia"] = json{{"leading", n.leading}, {"trailing", n.trailing}};
  if (!n.text.empty()) j["text"] = n.text;
  if (n.kind == NodeKind::ForClassic) j["update"] = n.update_name;
  json children = json::array();
  for (const auto& c : n.children) children.push_back(node_json(c));
  j["children"] = std::move(children);
  if (!n.bodies.empty()) {
    json bodies = json::array();
    for (const auto& body : n.bodies) {
      json stmts = json::array();
      for (const auto& s : body) stmts.push_back(node_json(s));
      bodies.push_back(std::move(stmts));
    }
    j["bodies"] = std::move(bodies);
  }
  return j;
}

json diagnostic_list(const std::vector<Diagnostic>& diagnostics) {
  json out = json::array();
  for (const auto& d : diagnostics) {
    out.push_back(json{{"severity", to_string(d.severity)}, {"message", d.message}, {"span", span_json(d.span)}});
  }
  return out;
}

json literal_json(const Literal& v) {
  if (const auto* d = std::get_if<double>(&v)) return *d;
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  return std::get<bool>(v);
}

}  // namespace

std::string parse_result_json(const ParseResult& result) {
  json doc;
  doc["schema_version"] = kJsonSchemaVersion;
  doc["tree"] = node_json(result.tree);
  doc["diagnostics"] = diagnostic_list(result.diagnostics);
  return doc.dump(2);
}

std::string diagnostics_json(const std::vector<Diagnostic>& diagnostics) {
  json doc;
  doc["schema_version"] = kJsonSchemaVersion;
  doc["diagnostics"] = diagnostic_list(diagnostics);
  return doc.dump(2);
}

std::string palette_json(const Palette& palette) {
  json doc;
  doc["version"] = palette.version();
  json categories = json::array();
  json blocks = json::array();
  for (const auto& c : palette.categories()) {
    categories.push_back(c.name);
    for (const auto& d : c.blocks) {
      json b;
      b["id"] = d.id;
      b["produces"] = to_string(d.produces);
      b["category"] = d.category;
      b["node_kind"] = to_string(d.node_kind);
      if (!d.match.empty()) b["match"] = d.match;
      if (d.chunk_level) b["chunk_level"] = to_string(*d.chunk_level);
      json segments = json::array();
      for (const auto& seg : d.label) {
        if (!seg.socket) {
          segments.push_back(seg.words);
          continue;
        }
        const auto& s = d.sockets[*seg.socket];
        json sj{{"accepts", to_string(s.accepts)}};
        if (s.default_value) sj["default"] = literal_json(*s.default_value);
        if (!s.dropdown.empty()) {
          json options = json::array();
          for (const auto& o : s.dropdown) options.push_back(literal_json(o));
          sj["dropdown"] = std::move(options);
        }
        if (s.field) sj["field"] = true;
        if (s.identifier) sj["identifier"] = true;
        segments.push_back(std::move(sj));
      }
      b["label_segments"] = std::move(segments);
      blocks.push_back(std::move(b));
    }
  }
  doc["categories"] = std::move(categories);
  doc["blocks"] = std::move(blocks);
  return doc.dump(2);
}

}  // namespace notchkit
