#include "notchkit/projection.hpp"

#include <memory>

namespace notchkit {

ModeSwitchRefused::ModeSwitchRefused(std::vector<Diagnostic> diagnostics)
    : std::runtime_error([&] {
        std::string what = "cannot switch to blocks";
        for (const auto& d : diagnostics) what += "; " + d.message;
        return what;
      }()),
      diagnostics_(std::move(diagnostics)) {}

ConnectorShape static_shape(const SyntaxNode& expr) {
  switch (expr.kind) {
    case NodeKind::ExprNumber: return ConnectorShape::Number;
    case NodeKind::ExprString: return ConnectorShape::String;
    case NodeKind::ExprBool: return ConnectorShape::Boolean;
    case NodeKind::ExprCall: return ConnectorShape::Number;
    case NodeKind::ExprBinary: {
      const int p = binary_precedence(expr.text);
      return p >= 5 ? ConnectorShape::Number : ConnectorShape::Boolean;
    }
    default: return ConnectorShape::Any;
  }
}

bool is_canonical_for(const SyntaxNode& node) {
  if (node.kind != NodeKind::ForClassic || node.children.size() != 2) return false;
  const SyntaxNode& init = node.children[0];
  const SyntaxNode& test = node.children[1];
  if (init.kind != NodeKind::ExprNumber || parse_number(init.text) != 0.0) return false;
  if (test.kind != NodeKind::ExprBinary || test.text != "<" || test.children.size() != 2) return false;
  const SyntaxNode& lhs = test.children[0];
  if (lhs.kind != NodeKind::ExprVar || lhs.text != node.text) return false;
  if (node.update_name != node.text) return false;
  return compatible(static_shape(test.children[1]), ConnectorShape::Number);
}

namespace {

using NodePtr = std::shared_ptr<const SyntaxNode>;

/// Points into the tree owned by `root` without a separate allocation.
NodePtr alias(const NodePtr& root, const SyntaxNode& node) { return NodePtr(root, &node); }

bool is_literal(NodeKind kind) {
  return kind == NodeKind::ExprNumber || kind == NodeKind::ExprString || kind == NodeKind::ExprBool;
}

Literal literal_of(const SyntaxNode& n) {
  switch (n.kind) {
    case NodeKind::ExprNumber: return parse_number(n.text);
    case NodeKind::ExprString: return unquote_string(n.text);
    default: return n.text == "true";
  }
}

SyntaxNode literal_node(const Literal& value) {
  if (const auto* d = std::get_if<double>(&value)) return build::number(*d);
  if (const auto* s = std::get_if<std::string>(&value)) return build::string(*s);
  return build::boolean(std::get<bool>(value));
}

/// Source text of a node without its outer trivia.
std::string interior(const SyntaxNode& n) {
  SyntaxNode copy = n;
  copy.leading.clear();
  copy.trailing.clear();
  return emit(copy);
}

SocketFill literal_fill(Literal value, NodePtr origin = nullptr) {
  SocketFill f;
  f.literal = std::move(value);
  f.origin = std::move(origin);
  return f;
}

class Blockifier {
 public:
  Blockifier(const Palette& palette, NodePtr root, ChunkLevel level)
      : palette_(palette), root_(std::move(root)), level_(level) {}

  std::vector<BlockInstance> statements(const std::vector<SyntaxNode>& body) {
    std::vector<BlockInstance> out;
    out.reserve(body.size());
    for (const auto& s : body) out.push_back(statement(s));
    return out;
  }

 private:
  BlockInstance make(const BlockDefinition& def, const SyntaxNode& n) {
    BlockInstance b;
    b.id = next_id_++;
    b.definition = def.id;
    b.origin = alias(root_, n);
    return b;
  }

  const BlockDefinition& def_for(NodeKind kind, std::string_view match,
                                 std::optional<ChunkLevel> level = std::nullopt) {
    const auto* def = palette_.for_node(kind, match, level);
    if (def == nullptr) {
      throw std::invalid_argument("palette has no block for " + std::string(to_string(kind)) + " '" +
                                  std::string(match) + "'");
    }
    return *def;
  }

  SocketFill slot(const std::vector<SyntaxNode>& body) {
    SocketFill f;
    f.blocks = statements(body);
    return f;
  }

  BlockInstance error_block(const BlockDefinition& def, const SyntaxNode& n, std::string raw) {
    BlockInstance b = make(def, n);
    b.sockets.push_back(literal_fill(std::move(raw)));
    return b;
  }

  /// Fills a value socket from an operand expression.
  SocketFill operand(const SyntaxNode& e, const SocketDefinition& socket) {
    SocketFill f;
    if (is_literal(e.kind)) {
      Literal v = literal_of(e);
      if (socket.accepts_literal(v)) return literal_fill(std::move(v), alias(root_, e));
    }
    BlockInstance b = expression(e);
    if (!compatible(palette_.at(b.definition).produces, socket.accepts)) {
      b = error_block(Palette::error_expression(), e, interior(e));
    }
    f.blocks.push_back(std::move(b));
    return f;
  }

  BlockInstance expression(const SyntaxNode& e) {
    switch (e.kind) {
      case NodeKind::ErrorExpr:
        return error_block(Palette::error_expression(), e, e.text);
      case NodeKind::ExprVar: {
        BlockInstance b = make(def_for(NodeKind::ExprVar, ""), e);
        b.sockets.push_back(literal_fill(e.text));
        return b;
      }
      case NodeKind::ExprNumber:
      case NodeKind::ExprString:
      case NodeKind::ExprBool: {
        BlockInstance b = make(def_for(e.kind, ""), e);
        b.sockets.push_back(literal_fill(literal_of(e), alias(root_, e)));
        return b;
      }
      case NodeKind::ExprBinary:
      case NodeKind::ExprCall: {
        const auto& def = def_for(e.kind, e.text);
        BlockInstance b = make(def, e);
        for (std::size_t i = 0; i < e.children.size(); ++i) {
          b.sockets.push_back(operand(e.children[i], def.sockets.at(i)));
        }
        return b;
      }
      default:
        throw std::invalid_argument("not an expression: " + std::string(to_string(e.kind)));
    }
  }

  BlockInstance statement(const SyntaxNode& s) {
    switch (s.kind) {
      case NodeKind::ErrorStmt:
        return error_block(Palette::error_statement(), s, s.text);
      case NodeKind::VarDecl:
      case NodeKind::Assign: {
        const auto& def = def_for(s.kind, "");
        BlockInstance b = make(def, s);
        b.sockets.push_back(literal_fill(s.text));
        b.sockets.push_back(operand(s.children.at(0), def.sockets[1]));
        return b;
      }
      case NodeKind::If: {
        const bool has_else = s.bodies.size() > 1;
        const auto& def = def_for(NodeKind::If, has_else ? "else" : "");
        BlockInstance b = make(def, s);
        b.sockets.push_back(operand(s.children.at(0), def.sockets[0]));
        b.sockets.push_back(slot(s.bodies.at(0)));
        if (has_else) b.sockets.push_back(slot(s.bodies[1]));
        return b;
      }
      case NodeKind::While:
      case NodeKind::Repeat: {
        const auto& def = def_for(s.kind, "");
        BlockInstance b = make(def, s);
        b.sockets.push_back(operand(s.children.at(0), def.sockets[0]));
        b.sockets.push_back(slot(s.bodies.at(0)));
        return b;
      }
      case NodeKind::ForClassic: {
        if (level_ == ChunkLevel::Collapsed && is_canonical_for(s)) {
          const auto& def = def_for(NodeKind::ForClassic, "", ChunkLevel::Collapsed);
          BlockInstance b = make(def, s);
          b.sockets.push_back(literal_fill(s.text));
          b.sockets.push_back(operand(s.children[1].children[1], def.sockets[1]));
          b.sockets.push_back(slot(s.bodies.at(0)));
          return b;
        }
        const auto& def = def_for(NodeKind::ForClassic, "", ChunkLevel::Clauses);
        BlockInstance b = make(def, s);
        b.sockets.push_back(literal_fill(s.text));
        b.sockets.push_back(operand(s.children.at(0), def.sockets[1]));
        b.sockets.push_back(operand(s.children.at(1), def.sockets[2]));
        b.sockets.push_back(literal_fill(s.update_name));
        b.sockets.push_back(slot(s.bodies.at(0)));
        return b;
      }
      case NodeKind::CallStmt: {
        const auto& def = def_for(NodeKind::CallStmt, s.text);
        BlockInstance b = make(def, s);
        for (std::size_t i = 0; i < s.children.size(); ++i) {
          b.sockets.push_back(operand(s.children[i], def.sockets.at(i)));
        }
        return b;
      }
      default:
        throw std::invalid_argument("not a statement: " + std::string(to_string(s.kind)));
    }
  }

  const Palette& palette_;
  NodePtr root_;
  ChunkLevel level_;
  InstanceId next_id_ = 1;
};

// ---- blocks to text ----

bool same_own_data(const SyntaxNode& a, const SyntaxNode& b) {
  if (a.kind != b.kind || a.children.size() != b.children.size() || a.bodies.size() != b.bodies.size()) {
    return false;
  }
  switch (a.kind) {
    case NodeKind::ExprNumber: return parse_number(a.text) == parse_number(b.text);
    case NodeKind::ExprString: return unquote_string(a.text) == unquote_string(b.text);
    case NodeKind::ForClassic: return a.text == b.text && a.update_name == b.update_name;
    default: return a.text == b.text;
  }
}

/// Gives a rebuilt node the source layout of `origin` where the node still
/// says the same thing. Children already dressed by their own provenance
/// are left alone.
void dress(SyntaxNode& n, const SyntaxNode* origin) {
  if (origin == nullptr || !n.synthesized()) return;
  if (!same_own_data(n, *origin)) {
    // Edited statement: keep its place in the surrounding text.
    if (is_statement(n.kind) && is_statement(origin->kind)) {
      n.leading = origin->leading;
      n.trailing = origin->trailing;
    }
    return;
  }
  n.text = origin->text;
  n.pieces = origin->pieces;
  n.leading = origin->leading;
  n.trailing = origin->trailing;
  n.span = origin->span;
  n.parens = origin->parens;
  for (std::size_t i = 0; i < n.children.size(); ++i) dress(n.children[i], &origin->children[i]);
}

class Textifier {
 public:
  explicit Textifier(const Palette& palette) : palette_(palette) {}

  std::vector<SyntaxNode> stack(const std::vector<BlockInstance>& blocks) {
    std::vector<SyntaxNode> out;
    out.reserve(blocks.size());
    for (const auto& b : blocks) out.push_back(node(b));
    return out;
  }

  SyntaxNode node(const BlockInstance& b) {
    const auto& def = palette_.at(b.definition);
    SyntaxNode n = rebuild(b, def);
    if (b.origin && is_error(n.kind) && !is_error(b.origin->kind)) {
      // A well-formed expression shown as an error block for its shape.
      if (n.text == interior(*b.origin)) return *b.origin;
      return n;
    }
    dress(n, b.origin.get());
    return n;
  }

 private:
  std::optional<Literal> literal_in(const SocketFill& f, const SocketDefinition& s) const {
    if (f.literal) return f.literal;
    if (f.blocks.empty()) return s.default_value;
    return std::nullopt;
  }

  std::string name_in(const BlockInstance& b, const BlockDefinition& def, std::size_t i) const {
    const auto v = literal_in(b.sockets.at(i), def.sockets.at(i));
    if (!v) throw std::invalid_argument("block " + std::to_string(b.id) + " has no name in socket " + std::to_string(i));
    return display(*v);
  }

  SyntaxNode value(const BlockInstance& b, const BlockDefinition& def, std::size_t i) {
    const SocketFill& f = b.sockets.at(i);
    if (!f.blocks.empty()) return node(f.blocks.front());
    const auto v = literal_in(f, def.sockets.at(i));
    if (!v) throw std::invalid_argument("block " + std::to_string(b.id) + " socket " + std::to_string(i) + " is empty");
    SyntaxNode n = literal_node(*v);
    if (f.literal && f.origin) dress(n, f.origin.get());
    return n;
  }

  SyntaxNode rebuild(const BlockInstance& b, const BlockDefinition& def) {
    if (b.sockets.size() != def.sockets.size()) {
      throw std::invalid_argument("block " + std::to_string(b.id) + " does not match its definition");
    }
    switch (def.node_kind) {
      case NodeKind::ErrorStmt:
      case NodeKind::ErrorExpr: {
        SyntaxNode n;
        n.kind = def.node_kind;
        n.text = name_in(b, def, 0);
        if (b.origin && is_error(b.origin->kind) && b.origin->text == n.text) return *b.origin;
        return n;
      }
      case NodeKind::VarDecl: return build::var_decl(name_in(b, def, 0), value(b, def, 1));
      case NodeKind::Assign: return build::assign(name_in(b, def, 0), value(b, def, 1));
      case NodeKind::If:
        if (def.sockets.size() > 2) {
          return build::if_else(value(b, def, 0), stack(b.sockets[1].blocks), stack(b.sockets[2].blocks));
        }
        return build::if_(value(b, def, 0), stack(b.sockets[1].blocks));
      case NodeKind::While: return build::while_(value(b, def, 0), stack(b.sockets[1].blocks));
      case NodeKind::Repeat: return build::repeat(value(b, def, 0), stack(b.sockets[1].blocks));
      case NodeKind::ForClassic: {
        const std::string name = name_in(b, def, 0);
        if (def.chunk_level == ChunkLevel::Collapsed) {
          SyntaxNode init = build::number(0);
          SyntaxNode test = build::binary("<", build::var(name), value(b, def, 1));
          SyntaxNode n = build::for_classic(name, std::move(init), std::move(test), name,
                                            stack(b.sockets[2].blocks));
          // The hidden clauses take their layout from the loop's source.
          if (b.origin && same_own_data(n, *b.origin)) {
            dress(n.children[0], &b.origin->children[0]);
            dress(n.children[1], &b.origin->children[1]);
          }
          return n;
        }
        return build::for_classic(name, value(b, def, 1), value(b, def, 2), name_in(b, def, 3),
                                  stack(b.sockets[4].blocks));
      }
      case NodeKind::CallStmt:
      case NodeKind::ExprCall: {
        std::vector<SyntaxNode> args;
        for (std::size_t i = 0; i < def.sockets.size(); ++i) args.push_back(value(b, def, i));
        return def.node_kind == NodeKind::CallStmt ? build::call(def.match, std::move(args))
                                                   : build::call_expr(def.match, std::move(args));
      }
      case NodeKind::ExprBinary: return build::binary(def.match, value(b, def, 0), value(b, def, 1));
      case NodeKind::ExprVar: return build::var(name_in(b, def, 0));
      case NodeKind::ExprNumber:
      case NodeKind::ExprString:
      case NodeKind::ExprBool: {
        SyntaxNode n = value(b, def, 0);
        return n;
      }
      default:
        throw std::invalid_argument("block '" + def.id + "' has no textual form");
    }
  }

  const Palette& palette_;
};

// ---- chunk levels ----

std::optional<Literal> effective(const SocketFill& f, const SocketDefinition& s) {
  if (f.literal) return f.literal;
  if (f.blocks.empty()) return s.default_value;
  return std::nullopt;
}

class Releveler {
 public:
  Releveler(const Palette& palette, ChunkLevel level, InstanceId next)
      : palette_(palette), level_(level), next_id_(next) {}

  void stack(std::vector<BlockInstance>& blocks) {
    for (auto& b : blocks) block(b);
  }

 private:
  void block(BlockInstance& b) {
    for (auto& s : b.sockets) stack(s.blocks);
    const auto* def = palette_.find(b.definition);
    if (def == nullptr || def->node_kind != NodeKind::ForClassic || def->chunk_level == level_) return;
    if (level_ == ChunkLevel::Clauses) {
      expand(b, *def);
    } else {
      collapse(b, *def);
    }
  }

  const SyntaxNode* origin_child(const BlockInstance& b, std::size_t i) const {
    if (!b.origin || b.origin->kind != NodeKind::ForClassic || b.origin->children.size() <= i) return nullptr;
    return &b.origin->children[i];
  }

  void expand(BlockInstance& b, const BlockDefinition& def) {
    const auto& target = *palette_.for_node(NodeKind::ForClassic, "", ChunkLevel::Clauses);
    const auto& less = *palette_.for_node(NodeKind::ExprBinary, "<");
    const auto& var = *palette_.for_node(NodeKind::ExprVar, "");
    const std::string name = display(*effective(b.sockets[0], def.sockets[0]));
    const SyntaxNode* test_origin = origin_child(b, 1);
    const bool canonical_origin = b.origin && is_canonical_for(*b.origin);

    BlockInstance v;
    v.id = next_id_++;
    v.definition = var.id;
    v.sockets.push_back(literal_fill(name));
    BlockInstance test;
    test.id = next_id_++;
    test.definition = less.id;
    test.sockets.resize(2);
    test.sockets[0].blocks.push_back(std::move(v));
    test.sockets[1] = std::move(b.sockets[1]);
    if (canonical_origin) {
      test.origin = std::shared_ptr<const SyntaxNode>(b.origin, test_origin);
      test.sockets[0].blocks[0].origin = std::shared_ptr<const SyntaxNode>(b.origin, &test_origin->children[0]);
    }

    std::vector<SocketFill> sockets(5);
    sockets[0] = std::move(b.sockets[0]);
    sockets[1] = literal_fill(0.0, canonical_origin ? std::shared_ptr<const SyntaxNode>(b.origin, origin_child(b, 0))
                                                    : nullptr);
    sockets[2].blocks.push_back(std::move(test));
    sockets[3] = literal_fill(name);
    sockets[4] = std::move(b.sockets[2]);
    b.definition = target.id;
    b.sockets = std::move(sockets);
  }

  void collapse(BlockInstance& b, const BlockDefinition& def) {
    const std::string name = display(*effective(b.sockets[0], def.sockets[0]));
    const auto init = effective(b.sockets[1], def.sockets[1]);
    if (!init || !literal_equal(*init, Literal{0.0})) return;
    const auto update = effective(b.sockets[3], def.sockets[3]);
    if (!update || display(*update) != name) return;
    if (b.sockets[2].blocks.empty()) return;
    const BlockInstance& test = b.sockets[2].blocks.front();
    const auto* tdef = palette_.find(test.definition);
    if (tdef == nullptr || tdef->node_kind != NodeKind::ExprBinary || tdef->match != "<") return;
    if (test.sockets[0].blocks.empty()) return;
    const BlockInstance& lhs = test.sockets[0].blocks.front();
    const auto* ldef = palette_.find(lhs.definition);
    if (ldef == nullptr || ldef->node_kind != NodeKind::ExprVar) return;
    const auto lname = effective(lhs.sockets[0], ldef->sockets[0]);
    if (!lname || display(*lname) != name) return;

    const auto& target = *palette_.for_node(NodeKind::ForClassic, "", ChunkLevel::Collapsed);
    SocketFill limit = std::move(b.sockets[2].blocks.front().sockets[1]);
    if (limit.empty()) limit = literal_fill(*tdef->sockets[1].default_value);
    std::vector<SocketFill> sockets(3);
    sockets[0] = std::move(b.sockets[0]);
    sockets[1] = std::move(limit);
    sockets[2] = std::move(b.sockets[4]);
    b.definition = target.id;
    b.sockets = std::move(sockets);
  }

  const Palette& palette_;
  ChunkLevel level_;
  InstanceId next_id_;
};

}  // namespace

BlockTree blockify(const Palette& palette, const SyntaxNode& tree, ChunkLevel level) {
  auto root = std::make_shared<const SyntaxNode>(tree);
  BlockTree out = empty_workspace(palette);
  out.program_origin = root;
  if (root->kind != NodeKind::Program) {
    throw std::invalid_argument("blockify expects a Program node");
  }
  Blockifier b(palette, root, level);
  std::vector<BlockInstance> stmts;
  for (const auto& body : root->bodies) {
    auto part = b.statements(body);
    for (auto& s : part) stmts.push_back(std::move(s));
  }
  if (!stmts.empty()) out.islands.push_back(Island{Position{0, 0}, std::move(stmts)});
  return out;
}

SyntaxNode block_to_syntax(const Palette& palette, const BlockInstance& block) {
  return Textifier(palette).node(block);
}

std::string textify(const Palette& palette, const BlockTree& blocks) {
  Textifier t(palette);
  std::vector<SyntaxNode> stmts;
  for (const auto& island : blocks.islands) {
    if (island.stack.empty()) continue;
    const auto* def = palette.find(island.stack.front().definition);
    if (def == nullptr || def->produces != ConnectorShape::Command) continue;
    for (auto& s : t.stack(island.stack)) stmts.push_back(std::move(s));
  }
  SyntaxNode program = build::program(std::move(stmts));
  if (const auto& origin = blocks.program_origin; origin && origin->kind == NodeKind::Program) {
    program.pieces = origin->pieces;
    program.leading = origin->leading;
    program.trailing = origin->trailing;
    program.span = origin->span;
    if (program.pieces.empty()) program.pieces.push_back(Piece::body(0));
  }
  return emit(program);
}

BlockTree switch_to_blocks(const Palette& palette, std::string_view text, ChunkLevel level) {
  ParseResult parsed = parse(text);
  if (parsed.has_switch_blocking()) {
    std::vector<Diagnostic> blocking;
    for (const auto& d : parsed.diagnostics) {
      if (d.severity == Severity::SwitchBlocking) blocking.push_back(d);
    }
    throw ModeSwitchRefused(std::move(blocking));
  }
  return blockify(palette, parsed.tree, level);
}

BlockTree set_chunk_level(const Palette& palette, const BlockTree& blocks, ChunkLevel level) {
  BlockTree out = blocks;
  Releveler r(palette, level, next_instance_id(blocks));
  for (auto& island : out.islands) r.stack(island.stack);
  return out;
}

}  // namespace notchkit
