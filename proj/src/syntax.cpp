#include "notchkit/syntax.hpp"

#include <array>
#include <utility>

namespace notchkit {

namespace {

constexpr std::array<std::pair<NodeKind, std::string_view>, 16> kKindNames = {{
    {NodeKind::Program, "Program"},
    {NodeKind::VarDecl, "VarDecl"},
    {NodeKind::Assign, "Assign"},
    {NodeKind::If, "If"},
    {NodeKind::While, "While"},
    {NodeKind::ForClassic, "ForClassic"},
    {NodeKind::Repeat, "Repeat"},
    {NodeKind::CallStmt, "CallStmt"},
    {NodeKind::ExprNumber, "ExprNumber"},
    {NodeKind::ExprString, "ExprString"},
    {NodeKind::ExprBool, "ExprBool"},
    {NodeKind::ExprVar, "ExprVar"},
    {NodeKind::ExprBinary, "ExprBinary"},
    {NodeKind::ExprCall, "ExprCall"},
    {NodeKind::ErrorStmt, "ErrorStmt"},
    {NodeKind::ErrorExpr, "ErrorExpr"},
}};

}  // namespace

std::string_view to_string(NodeKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "?";
}

bool parse_node_kind(std::string_view name, NodeKind& out) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) {
      out = k;
      return true;
    }
  }
  return false;
}

bool is_statement(NodeKind kind) {
  switch (kind) {
    case NodeKind::VarDecl:
    case NodeKind::Assign:
    case NodeKind::If:
    case NodeKind::While:
    case NodeKind::ForClassic:
    case NodeKind::Repeat:
    case NodeKind::CallStmt:
    case NodeKind::ErrorStmt:
      return true;
    default:
      return false;
  }
}

bool is_expression(NodeKind kind) {
  switch (kind) {
    case NodeKind::ExprNumber:
    case NodeKind::ExprString:
    case NodeKind::ExprBool:
    case NodeKind::ExprVar:
    case NodeKind::ExprBinary:
    case NodeKind::ExprCall:
    case NodeKind::ErrorExpr:
      return true;
    default:
      return false;
  }
}

bool is_error(NodeKind kind) { return kind == NodeKind::ErrorStmt || kind == NodeKind::ErrorExpr; }

std::string_view to_string(Severity severity) {
  return severity == Severity::Recoverable ? "Recoverable" : "SwitchBlocking";
}

bool same_structure(const SyntaxNode& a, const SyntaxNode& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == NodeKind::ExprNumber) {
    if (parse_number(a.text) != parse_number(b.text)) return false;
  } else if (a.kind == NodeKind::ExprString) {
    if (unquote_string(a.text) != unquote_string(b.text)) return false;
  } else if (a.text != b.text) {
    return false;
  }
  if (a.kind == NodeKind::ForClassic && a.update_name != b.update_name) return false;
  if (a.children.size() != b.children.size() || a.bodies.size() != b.bodies.size()) return false;
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (!same_structure(a.children[i], b.children[i])) return false;
  }
  for (std::size_t i = 0; i < a.bodies.size(); ++i) {
    if (a.bodies[i].size() != b.bodies[i].size()) return false;
    for (std::size_t j = 0; j < a.bodies[i].size(); ++j) {
      if (!same_structure(a.bodies[i][j], b.bodies[i][j])) return false;
    }
  }
  return true;
}

std::size_t count_error_nodes(const SyntaxNode& tree) {
  std::size_t n = is_error(tree.kind) ? 1 : 0;
  for (const auto& c : tree.children) n += count_error_nodes(c);
  for (const auto& body : tree.bodies) {
    for (const auto& s : body) n += count_error_nodes(s);
  }
  return n;
}

namespace build {

namespace {
SyntaxNode node(NodeKind kind, std::string text) {
  SyntaxNode n;
  n.kind = kind;
  n.text = std::move(text);
  return n;
}
}  // namespace

SyntaxNode number(double value) { return node(NodeKind::ExprNumber, format_number(value)); }
SyntaxNode string(std::string value) { return node(NodeKind::ExprString, quote_string(value)); }
SyntaxNode boolean(bool value) { return node(NodeKind::ExprBool, value ? "true" : "false"); }
SyntaxNode var(std::string name) { return node(NodeKind::ExprVar, std::move(name)); }

SyntaxNode binary(std::string op, SyntaxNode lhs, SyntaxNode rhs) {
  SyntaxNode n = node(NodeKind::ExprBinary, std::move(op));
  n.children.push_back(std::move(lhs));
  n.children.push_back(std::move(rhs));
  return n;
}

SyntaxNode call_expr(std::string callee, std::vector<SyntaxNode> args) {
  SyntaxNode n = node(NodeKind::ExprCall, std::move(callee));
  n.children = std::move(args);
  return n;
}

SyntaxNode var_decl(std::string name, SyntaxNode value) {
  SyntaxNode n = node(NodeKind::VarDecl, std::move(name));
  n.children.push_back(std::move(value));
  return n;
}

SyntaxNode assign(std::string name, SyntaxNode value) {
  SyntaxNode n = node(NodeKind::Assign, std::move(name));
  n.children.push_back(std::move(value));
  return n;
}

SyntaxNode call(std::string callee, std::vector<SyntaxNode> args) {
  SyntaxNode n = node(NodeKind::CallStmt, std::move(callee));
  n.children = std::move(args);
  return n;
}

SyntaxNode if_(SyntaxNode cond, std::vector<SyntaxNode> then_body) {
  SyntaxNode n = node(NodeKind::If, {});
  n.children.push_back(std::move(cond));
  n.bodies.push_back(std::move(then_body));
  return n;
}

SyntaxNode if_else(SyntaxNode cond, std::vector<SyntaxNode> then_body,
                   std::vector<SyntaxNode> else_body) {
  SyntaxNode n = if_(std::move(cond), std::move(then_body));
  n.bodies.push_back(std::move(else_body));
  return n;
}

SyntaxNode while_(SyntaxNode cond, std::vector<SyntaxNode> body) {
  SyntaxNode n = node(NodeKind::While, {});
  n.children.push_back(std::move(cond));
  n.bodies.push_back(std::move(body));
  return n;
}

SyntaxNode repeat(SyntaxNode count, std::vector<SyntaxNode> body) {
  SyntaxNode n = node(NodeKind::Repeat, {});
  n.children.push_back(std::move(count));
  n.bodies.push_back(std::move(body));
  return n;
}

SyntaxNode for_classic(std::string var, SyntaxNode init, SyntaxNode test, std::string update_var,
                       std::vector<SyntaxNode> body) {
  SyntaxNode n = node(NodeKind::ForClassic, std::move(var));
  n.update_name = std::move(update_var);
  n.children.push_back(std::move(init));
  n.children.push_back(std::move(test));
  n.bodies.push_back(std::move(body));
  return n;
}

// Error nodes are raw text and always carry a one-token layout.
SyntaxNode error_stmt(std::string raw) {
  SyntaxNode n = node(NodeKind::ErrorStmt, std::move(raw));
  n.pieces.push_back(Piece::token("", n.text, ""));
  return n;
}

SyntaxNode error_expr(std::string raw) {
  SyntaxNode n = node(NodeKind::ErrorExpr, std::move(raw));
  n.pieces.push_back(Piece::token("", n.text, ""));
  return n;
}

SyntaxNode program(std::vector<SyntaxNode> statements) {
  SyntaxNode n = node(NodeKind::Program, {});
  n.bodies.push_back(std::move(statements));
  return n;
}

}  // namespace build

}  // namespace notchkit
