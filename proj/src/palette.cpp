#include "notchkit/palette.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "json.hpp"

namespace notchkit {

using nlohmann::json;

std::string_view to_string(ConnectorShape shape) {
  switch (shape) {
    case ConnectorShape::Command: return "Command";
    case ConnectorShape::Number: return "Number";
    case ConnectorShape::String: return "String";
    case ConnectorShape::Boolean: return "Boolean";
    case ConnectorShape::Any: return "Any";
    case ConnectorShape::ContainerSlot: return "ContainerSlot";
  }
  return "?";
}

std::optional<ConnectorShape> parse_shape(std::string_view name) {
  for (auto s : kAllShapes) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

bool is_value_shape(ConnectorShape shape) {
  return shape == ConnectorShape::Number || shape == ConnectorShape::String ||
         shape == ConnectorShape::Boolean || shape == ConnectorShape::Any;
}

bool compatible(ConnectorShape produced, ConnectorShape accepts) {
  if (produced == ConnectorShape::Command) {
    return accepts == ConnectorShape::ContainerSlot || accepts == ConnectorShape::Command;
  }
  if (accepts == ConnectorShape::ContainerSlot || produced == ConnectorShape::ContainerSlot) {
    return produced == accepts;
  }
  if (accepts == ConnectorShape::Command) return false;
  if (produced == ConnectorShape::Any || accepts == ConnectorShape::Any) return true;
  return produced == accepts;
}

std::string_view to_string(ChunkLevel level) {
  return level == ChunkLevel::Collapsed ? "collapsed" : "clauses";
}

std::optional<ChunkLevel> parse_chunk_level(std::string_view name) {
  if (name == "collapsed") return ChunkLevel::Collapsed;
  if (name == "clauses") return ChunkLevel::Clauses;
  return std::nullopt;
}

ConnectorShape literal_shape(const Literal& value) {
  if (std::holds_alternative<double>(value)) return ConnectorShape::Number;
  if (std::holds_alternative<std::string>(value)) return ConnectorShape::String;
  return ConnectorShape::Boolean;
}

bool literal_equal(const Literal& a, const Literal& b) { return a == b; }

std::string display(const Literal& value) {
  if (const auto* d = std::get_if<double>(&value)) return format_number(*d);
  if (const auto* s = std::get_if<std::string>(&value)) return *s;
  return std::get<bool>(value) ? "true" : "false";
}

bool SocketDefinition::accepts_literal(const Literal& value) const {
  if (is_slot()) return false;
  if (identifier) {
    const auto* s = std::get_if<std::string>(&value);
    return s != nullptr && is_identifier(*s);
  }
  if (const auto* d = std::get_if<double>(&value); d != nullptr && !std::isfinite(*d)) return false;
  return compatible(literal_shape(value), accepts);
}

std::vector<std::string> BlockDefinition::words() const {
  std::vector<std::string> out;
  for (const auto& seg : label) {
    std::istringstream in(seg.words);
    std::string w;
    while (in >> w) out.push_back(w);
  }
  return out;
}

std::string BlockDefinition::first_word() const {
  auto w = words();
  return w.empty() ? std::string() : w.front();
}

std::string BlockDefinition::label_text() const {
  std::string out;
  for (const auto& seg : label) {
    if (!out.empty()) out += ' ';
    if (seg.socket) {
      out += '<';
      out += to_string(sockets[*seg.socket].accepts);
      out += '>';
    } else {
      out += seg.words;
    }
  }
  return out;
}

std::string_view to_string(PaletteErrc code) {
  switch (code) {
    case PaletteErrc::Malformed: return "Malformed";
    case PaletteErrc::DuplicateBlockId: return "DuplicateBlockId";
    case PaletteErrc::UncoveredNodeKind: return "UncoveredNodeKind";
    case PaletteErrc::DefaultViolatesShape: return "DefaultViolatesShape";
    case PaletteErrc::DropdownViolatesShape: return "DropdownViolatesShape";
    case PaletteErrc::UnknownCategory: return "UnknownCategory";
  }
  return "?";
}

PaletteError::PaletteError(PaletteErrc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

namespace {

BlockDefinition make_error_definition(std::string_view id, ConnectorShape produces,
                                      NodeKind kind) {
  BlockDefinition def;
  def.id = std::string(id);
  def.produces = produces;
  def.node_kind = kind;
  def.label.push_back({"unparsed code", std::nullopt});
  def.label.push_back({"", 0});
  SocketDefinition raw;
  raw.accepts = ConnectorShape::String;
  raw.field = true;
  raw.default_value = Literal{std::string()};
  raw.label_before = "unparsed code";
  def.sockets.push_back(raw);
  return def;
}

[[noreturn]] void malformed(const std::string& what) {
  throw PaletteError(PaletteErrc::Malformed, what);
}

Literal literal_from_json(const json& j, const std::string& where) {
  if (j.is_boolean()) return Literal{j.get<bool>()};
  if (j.is_number()) return Literal{j.get<double>()};
  if (j.is_string()) return Literal{j.get<std::string>()};
  malformed(where + ": literal must be a number, string or boolean");
}

bool plain_words(const std::string& s) {
  bool any = false;
  for (char c : s) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      any = true;
    } else if (c != ' ') {
      return false;
    }
  }
  return any;
}

SocketDefinition socket_from_json(const json& j, const std::string& where) {
  if (!j.contains("accepts") || !j["accepts"].is_string()) malformed(where + ": socket needs 'accepts'");
  auto shape = parse_shape(j["accepts"].get<std::string>());
  if (!shape || *shape == ConnectorShape::Command) malformed(where + ": bad socket shape");
  SocketDefinition s;
  s.accepts = *shape;
  s.field = j.value("field", false);
  s.identifier = j.value("identifier", false);
  if (s.is_slot()) {
    if (s.field || s.identifier || j.contains("default") || j.contains("dropdown")) {
      malformed(where + ": container slots take no value options");
    }
    return s;
  }
  if (!j.contains("default")) malformed(where + ": value socket needs a default");
  s.default_value = literal_from_json(j["default"], where);
  if (j.contains("dropdown")) {
    if (!j["dropdown"].is_array() || j["dropdown"].empty()) malformed(where + ": bad dropdown");
    for (const auto& opt : j["dropdown"]) {
      Literal v = literal_from_json(opt, where);
      if (!s.accepts_literal(v)) {
        throw PaletteError(PaletteErrc::DropdownViolatesShape,
                           where + ": dropdown option '" + display(v) + "' does not fit " +
                               std::string(to_string(s.accepts)));
      }
      s.dropdown.push_back(std::move(v));
    }
  }
  if (!s.accepts_literal(*s.default_value)) {
    throw PaletteError(PaletteErrc::DefaultViolatesShape,
                       where + ": default '" + display(*s.default_value) + "' does not fit " +
                           std::string(to_string(s.accepts)));
  }
  if (!s.dropdown.empty() &&
      std::none_of(s.dropdown.begin(), s.dropdown.end(),
                   [&](const Literal& o) { return literal_equal(o, *s.default_value); })) {
    throw PaletteError(PaletteErrc::DefaultViolatesShape,
                       where + ": default is not one of the dropdown options");
  }
  return s;
}

// Socket layout each node kind needs for projection.
enum class Role { Value, Name, Literal, Slot };

Role role_of(const SocketDefinition& s) {
  if (s.is_slot()) return Role::Slot;
  if (s.identifier) return Role::Name;
  if (s.field) return Role::Literal;
  return Role::Value;
}

std::vector<Role> expected_layout(const BlockDefinition& def) {
  using R = Role;
  switch (def.node_kind) {
    case NodeKind::VarDecl:
    case NodeKind::Assign: return {R::Name, R::Value};
    case NodeKind::If:
      return def.match == "else" ? std::vector<R>{R::Value, R::Slot, R::Slot}
                                 : std::vector<R>{R::Value, R::Slot};
    case NodeKind::While:
    case NodeKind::Repeat: return {R::Value, R::Slot};
    case NodeKind::ForClassic:
      if (def.chunk_level == ChunkLevel::Collapsed) return {R::Name, R::Value, R::Slot};
      return {R::Name, R::Value, R::Value, R::Name, R::Slot};
    case NodeKind::CallStmt: return std::vector<R>(std::max(0, command_arity(def.match)), R::Value);
    case NodeKind::ExprCall: return std::vector<R>(std::max(0, function_arity(def.match)), R::Value);
    case NodeKind::ExprBinary: return {R::Value, R::Value};
    case NodeKind::ExprNumber:
    case NodeKind::ExprString:
    case NodeKind::ExprBool: return {R::Literal};
    case NodeKind::ExprVar: return {R::Name};
    default: return {};
  }
}

void check_definition(const BlockDefinition& def) {
  const std::string where = "block '" + def.id + "'";
  if (def.node_kind == NodeKind::Program || is_error(def.node_kind)) {
    malformed(where + ": node kind cannot be a palette block");
  }
  if (is_statement(def.node_kind) != (def.produces == ConnectorShape::Command)) {
    malformed(where + ": statements produce Command, expressions produce a value shape");
  }
  if (def.produces == ConnectorShape::ContainerSlot) malformed(where + ": cannot produce ContainerSlot");
  if (def.node_kind == NodeKind::ForClassic && !def.chunk_level) {
    malformed(where + ": ForClassic blocks need a chunk_level");
  }
  if (def.node_kind != NodeKind::ForClassic && def.chunk_level) {
    malformed(where + ": only ForClassic blocks have a chunk_level");
  }
  switch (def.node_kind) {
    case NodeKind::CallStmt:
      if (command_arity(def.match) < 0) malformed(where + ": unknown command '" + def.match + "'");
      break;
    case NodeKind::ExprCall:
      if (function_arity(def.match) < 0) malformed(where + ": unknown function '" + def.match + "'");
      break;
    case NodeKind::ExprBinary:
      if (binary_precedence(def.match) == 0) malformed(where + ": unknown operator '" + def.match + "'");
      break;
    case NodeKind::If:
      if (!def.match.empty() && def.match != "else") malformed(where + ": If match must be \"\" or \"else\"");
      break;
    default:
      if (!def.match.empty()) malformed(where + ": unexpected match");
  }
  const auto layout = expected_layout(def);
  if (layout.size() != def.sockets.size()) malformed(where + ": wrong number of sockets");
  for (std::size_t i = 0; i < layout.size(); ++i) {
    const Role got = role_of(def.sockets[i]);
    const bool name_ok = layout[i] == Role::Name && def.sockets[i].identifier;
    if (got != layout[i] && !name_ok) malformed(where + ": socket " + std::to_string(i) + " has the wrong role");
  }
  if (def.words().empty()) malformed(where + ": label needs at least one word");
}

using NodeKey = std::tuple<NodeKind, std::string, int>;

NodeKey key_of(NodeKind kind, std::string_view match, std::optional<ChunkLevel> level) {
  return {kind, std::string(match), level ? static_cast<int>(*level) : -1};
}

std::vector<NodeKey> required_coverage() {
  std::vector<NodeKey> keys;
  for (auto k : {NodeKind::VarDecl, NodeKind::Assign, NodeKind::While, NodeKind::Repeat,
                 NodeKind::ExprNumber, NodeKind::ExprString, NodeKind::ExprBool, NodeKind::ExprVar}) {
    keys.push_back(key_of(k, "", std::nullopt));
  }
  keys.push_back(key_of(NodeKind::If, "", std::nullopt));
  keys.push_back(key_of(NodeKind::If, "else", std::nullopt));
  keys.push_back(key_of(NodeKind::ForClassic, "", ChunkLevel::Collapsed));
  keys.push_back(key_of(NodeKind::ForClassic, "", ChunkLevel::Clauses));
  for (auto c : {"say", "playNoteFor", "moveForward"}) keys.push_back(key_of(NodeKind::CallStmt, c, std::nullopt));
  for (auto f : {"abs", "round", "min", "max"}) keys.push_back(key_of(NodeKind::ExprCall, f, std::nullopt));
  for (auto op : {"+", "-", "*", "/", "<", "<=", ">", ">=", "==", "!=", "&&", "||"}) {
    keys.push_back(key_of(NodeKind::ExprBinary, op, std::nullopt));
  }
  return keys;
}

}  // namespace

Palette::Palette(std::string version, std::vector<Category> categories)
    : version_(std::move(version)), categories_(std::move(categories)) {}

std::vector<const BlockDefinition*> Palette::all() const {
  std::vector<const BlockDefinition*> out;
  for (const auto& c : categories_) {
    for (const auto& d : c.blocks) out.push_back(&d);
  }
  return out;
}

const BlockDefinition& Palette::error_statement() {
  static const BlockDefinition def =
      make_error_definition(kErrorStatementBlock, ConnectorShape::Command, NodeKind::ErrorStmt);
  return def;
}

const BlockDefinition& Palette::error_expression() {
  static const BlockDefinition def =
      make_error_definition(kErrorExpressionBlock, ConnectorShape::Any, NodeKind::ErrorExpr);
  return def;
}

const BlockDefinition* Palette::find(std::string_view id) const {
  if (id == kErrorStatementBlock) return &error_statement();
  if (id == kErrorExpressionBlock) return &error_expression();
  for (const auto& c : categories_) {
    for (const auto& d : c.blocks) {
      if (d.id == id) return &d;
    }
  }
  return nullptr;
}

const BlockDefinition& Palette::at(std::string_view id) const {
  if (const auto* d = find(id)) return *d;
  throw std::out_of_range("unknown block definition '" + std::string(id) + "'");
}

const BlockDefinition* Palette::for_node(NodeKind kind, std::string_view match,
                                         std::optional<ChunkLevel> level) const {
  if (kind == NodeKind::ErrorStmt) return &error_statement();
  if (kind == NodeKind::ErrorExpr) return &error_expression();
  for (const auto& c : categories_) {
    for (const auto& d : c.blocks) {
      if (d.node_kind == kind && d.match == match && (!level || d.chunk_level == level)) return &d;
    }
  }
  return nullptr;
}

Palette load_palette(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    malformed(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) malformed("palette document must be an object");
  if (!doc.contains("version") || !doc["version"].is_string()) malformed("missing 'version'");
  if (!doc.contains("categories") || !doc["categories"].is_array()) malformed("missing 'categories'");
  if (!doc.contains("blocks") || !doc["blocks"].is_array()) malformed("missing 'blocks'");

  std::vector<Category> categories;
  for (const auto& c : doc["categories"]) {
    if (!c.is_string() || c.get<std::string>().empty()) malformed("category names must be strings");
    const auto name = c.get<std::string>();
    for (const auto& existing : categories) {
      if (existing.name == name) malformed("duplicate category '" + name + "'");
    }
    categories.push_back(Category{name, {}});
  }

  std::set<std::string> ids{std::string(kErrorStatementBlock), std::string(kErrorExpressionBlock)};
  std::map<NodeKey, std::string> keys;
  for (const auto& b : doc["blocks"]) {
    if (!b.is_object()) malformed("block entries must be objects");
    BlockDefinition def;
    if (!b.contains("id") || !b["id"].is_string() || b["id"].get<std::string>().empty()) {
      malformed("block without an id");
    }
    def.id = b["id"].get<std::string>();
    const std::string where = "block '" + def.id + "'";
    if (!ids.insert(def.id).second) {
      throw PaletteError(PaletteErrc::DuplicateBlockId, "block id '" + def.id + "' is not unique");
    }
    auto produces = b.contains("produces") && b["produces"].is_string()
                        ? parse_shape(b["produces"].get<std::string>())
                        : std::nullopt;
    if (!produces) malformed(where + ": bad 'produces'");
    def.produces = *produces;
    if (!b.contains("category") || !b["category"].is_string()) malformed(where + ": missing category");
    def.category = b["category"].get<std::string>();
    if (!b.contains("node_kind") || !b["node_kind"].is_string() ||
        !parse_node_kind(b["node_kind"].get<std::string>(), def.node_kind)) {
      malformed(where + ": bad 'node_kind'");
    }
    def.match = b.value("match", std::string());
    if (b.contains("chunk_level")) {
      if (!b["chunk_level"].is_string()) malformed(where + ": bad chunk_level");
      def.chunk_level = parse_chunk_level(b["chunk_level"].get<std::string>());
      if (!def.chunk_level) malformed(where + ": bad chunk_level");
    }
    if (!b.contains("label_segments") || !b["label_segments"].is_array()) {
      malformed(where + ": missing label_segments");
    }
    std::string pending_words;
    for (const auto& seg : b["label_segments"]) {
      if (seg.is_string()) {
        const auto words = seg.get<std::string>();
        if (!plain_words(words)) malformed(where + ": label '" + words + "' is not plain words");
        def.label.push_back({words, std::nullopt});
        if (!def.sockets.empty() && def.sockets.back().label_after.empty()) {
          def.sockets.back().label_after = words;
        }
        pending_words = words;
      } else if (seg.is_object()) {
        SocketDefinition s = socket_from_json(seg, where + " socket " + std::to_string(def.sockets.size()));
        s.label_before = pending_words;
        pending_words.clear();
        def.label.push_back({"", def.sockets.size()});
        def.sockets.push_back(std::move(s));
      } else {
        malformed(where + ": label segments are strings or socket objects");
      }
    }
    check_definition(def);
    const auto key = key_of(def.node_kind, def.match, def.chunk_level);
    if (!keys.emplace(key, def.id).second) {
      malformed(where + ": renders the same node variant as '" + keys[key] + "'");
    }
    auto cat = std::find_if(categories.begin(), categories.end(),
                            [&](const Category& c) { return c.name == def.category; });
    if (cat == categories.end()) {
      throw PaletteError(PaletteErrc::UnknownCategory,
                         where + ": category '" + def.category + "' is not declared");
    }
    cat->blocks.push_back(std::move(def));
  }

  for (const auto& key : required_coverage()) {
    if (keys.count(key) == 0) {
      const auto& [kind, match, level] = key;
      std::string what = "no block renders " + std::string(to_string(kind));
      if (!match.empty()) what += " '" + match + "'";
      if (level >= 0) what += " at " + std::string(to_string(static_cast<ChunkLevel>(level)));
      throw PaletteError(PaletteErrc::UncoveredNodeKind, what);
    }
  }
  return Palette(doc["version"].get<std::string>(), std::move(categories));
}

const std::vector<BlockDefinition>& definitions_for(const Palette& palette,
                                                    std::string_view category) {
  for (const auto& c : palette.categories()) {
    if (c.name == category) return c.blocks;
  }
  throw PaletteError(PaletteErrc::UnknownCategory, "no category '" + std::string(category) + "'");
}

const Palette& default_palette() {
  static const Palette palette = load_palette(default_palette_document());
  return palette;
}

}  // namespace notchkit
