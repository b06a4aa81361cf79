#include "notchkit/syntax.hpp"

#include <stdexcept>

namespace notchkit {

namespace {

std::string indent(int depth) { return std::string(static_cast<std::size_t>(depth) * 2, ' '); }

class Emitter {
 public:
  std::string take() { return std::move(out_); }

  void statement(const SyntaxNode& n, int depth) {
    if (n.kind == NodeKind::Program) {
      program(n);
      return;
    }
    const bool synth = n.synthesized();
    if (synth && n.leading.empty()) {
      if (!out_.empty() && out_.back() != '\n') trivia("\n");
      trivia(indent(depth));
    } else {
      trivia(n.leading);
    }
    if (synth) {
      canonical_statement(n, depth);
    } else {
      layout(n, depth);
    }
    if (synth && n.trailing.empty()) {
      trivia("\n");
    } else {
      trivia(n.trailing);
    }
  }

  void expression(const SyntaxNode& n, int depth, int context_prec) {
    trivia(n.leading);
    const bool wrap = n.kind == NodeKind::ExprBinary && n.parens == 0 &&
                      binary_precedence(n.text) < context_prec;
    if (wrap) code("(");
    if (n.synthesized()) {
      canonical_expression(n, depth);
    } else {
      layout(n, depth);
    }
    if (wrap) code(")");
    trivia(n.trailing);
  }

  void any(const SyntaxNode& n, int depth) {
    if (is_expression(n.kind)) {
      expression(n, depth, 0);
    } else {
      statement(n, depth);
    }
  }

 private:
  // Text that can only contain whitespace, newlines and line comments.
  void trivia(const std::string& s) {
    if (s.empty()) return;
    out_ += s;
    const auto nl = s.rfind('\n');
    const auto tail = nl == std::string::npos ? std::string_view(s) : std::string_view(s).substr(nl + 1);
    if (nl != std::string::npos) open_comment_ = false;
    if (tail.find("//") != std::string_view::npos) open_comment_ = true;
  }

  void code(std::string_view s) {
    if (s.empty()) return;
    if (open_comment_) {
      out_ += '\n';
      open_comment_ = false;
    }
    out_ += s;
  }

  void program(const SyntaxNode& n) {
    trivia(n.leading);
    if (n.synthesized()) {
      for (const auto& body : n.bodies) {
        for (const auto& s : body) statement(s, 0);
      }
    } else {
      for (const Piece& p : n.pieces) {
        if (p.kind == Piece::Kind::Body) {
          for (const auto& s : n.bodies.at(p.index)) statement(s, 0);
        } else if (p.kind == Piece::Kind::Token) {
          trivia(p.leading);
          code(p.lexeme);
          trivia(p.trailing);
        }
      }
    }
    trivia(n.trailing);
  }

  int child_context(const SyntaxNode& n, std::size_t i) const {
    if (n.kind != NodeKind::ExprBinary) return 0;
    const int p = binary_precedence(n.text);
    return i == 0 ? p : p + 1;
  }

  void layout(const SyntaxNode& n, int depth) {
    for (const Piece& p : n.pieces) {
      switch (p.kind) {
        case Piece::Kind::Token:
          trivia(p.leading);
          code(p.lexeme);
          trivia(p.trailing);
          break;
        case Piece::Kind::Child:
          expression(n.children.at(p.index), depth, child_context(n, p.index));
          break;
        case Piece::Kind::Body:
          for (const auto& s : n.bodies.at(p.index)) statement(s, depth + 1);
          break;
      }
    }
  }

  void block(const std::vector<SyntaxNode>& body, int depth) {
    code("{");
    trivia("\n");
    for (const auto& s : body) statement(s, depth + 1);
    if (!out_.empty() && out_.back() != '\n') trivia("\n");
    trivia(indent(depth));
    code("}");
  }

  const SyntaxNode& child(const SyntaxNode& n, std::size_t i) const {
    if (i >= n.children.size()) {
      throw std::invalid_argument(std::string(to_string(n.kind)) + " node is missing an operand");
    }
    return n.children[i];
  }

  const std::vector<SyntaxNode>& body(const SyntaxNode& n, std::size_t i) const {
    static const std::vector<SyntaxNode> empty;
    return i < n.bodies.size() ? n.bodies[i] : empty;
  }

  void canonical_statement(const SyntaxNode& n, int depth) {
    switch (n.kind) {
      case NodeKind::VarDecl:
        code("var " + n.text + " = ");
        expression(child(n, 0), depth, 0);
        code(";");
        break;
      case NodeKind::Assign:
        code(n.text + " = ");
        expression(child(n, 0), depth, 0);
        code(";");
        break;
      case NodeKind::CallStmt:
        call(n, depth);
        code(";");
        break;
      case NodeKind::If:
        code("if (");
        expression(child(n, 0), depth, 0);
        code(") ");
        block(body(n, 0), depth);
        if (n.bodies.size() > 1) {
          code(" else ");
          block(body(n, 1), depth);
        }
        break;
      case NodeKind::While:
      case NodeKind::Repeat:
        code(n.kind == NodeKind::While ? "while (" : "repeat (");
        expression(child(n, 0), depth, 0);
        code(") ");
        block(body(n, 0), depth);
        break;
      case NodeKind::ForClassic:
        code("for (var " + n.text + " = ");
        expression(child(n, 0), depth, 0);
        code("; ");
        expression(child(n, 1), depth, 0);
        code("; " + (n.update_name.empty() ? n.text : n.update_name) + "++) ");
        block(body(n, 0), depth);
        break;
      case NodeKind::ErrorStmt:
        code(n.text);
        break;
      default:
        throw std::invalid_argument("not a statement: " + std::string(to_string(n.kind)));
    }
  }

  void call(const SyntaxNode& n, int depth) {
    code(n.text + "(");
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      if (i > 0) code(", ");
      expression(n.children[i], depth, 0);
    }
    code(")");
  }

  void canonical_expression(const SyntaxNode& n, int depth) {
    switch (n.kind) {
      case NodeKind::ExprNumber:
      case NodeKind::ExprString:
      case NodeKind::ExprBool:
      case NodeKind::ExprVar:
      case NodeKind::ErrorExpr:
        code(n.text);
        break;
      case NodeKind::ExprBinary: {
        const int p = binary_precedence(n.text);
        expression(child(n, 0), depth, p);
        code(" " + n.text + " ");
        expression(child(n, 1), depth, p + 1);
        break;
      }
      case NodeKind::ExprCall:
        call(n, depth);
        break;
      default:
        throw std::invalid_argument("not an expression: " + std::string(to_string(n.kind)));
    }
  }

  std::string out_;
  bool open_comment_ = false;
};

}  // namespace

std::string emit(const SyntaxNode& tree) { return emit(tree, 0); }

std::string emit(const SyntaxNode& node, int depth) {
  Emitter e;
  e.any(node, depth);
  return e.take();
}

}  // namespace notchkit
