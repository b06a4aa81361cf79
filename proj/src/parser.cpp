#include "notchkit/syntax.hpp"

#include <optional>

namespace notchkit {

namespace {

/// A significant token with its trivia split Roslyn-style: trailing trivia
/// runs to the end of the line (newline included), everything else before
/// the token is leading trivia.
struct STok {
  TokenKind kind = TokenKind::Punct;
  std::string lexeme;
  Span span;
  std::string leading;
  std::string trailing;
  bool eof = false;
  bool after_newline = false;  ///< the previous token's trailing trivia ended a line

  bool starts_line() const { return after_newline || leading.find('\n') != std::string::npos; }
};

std::vector<STok> significant_tokens(const std::vector<Token>& tokens, std::size_t text_size) {
  std::vector<STok> out;
  std::string pending;
  std::size_t i = 0;
  while (i < tokens.size()) {
    const Token& t = tokens[i];
    if (t.is_trivia()) {
      pending += t.lexeme;
      ++i;
      continue;
    }
    STok s;
    s.kind = t.kind;
    s.lexeme = t.lexeme;
    s.span = t.span;
    s.leading = std::move(pending);
    pending.clear();
    s.after_newline = !out.empty() && !out.back().trailing.empty() && out.back().trailing.back() == '\n';
    ++i;
    while (i < tokens.size() && tokens[i].is_trivia()) {
      s.trailing += tokens[i].lexeme;
      const bool newline = tokens[i].kind == TokenKind::Newline;
      ++i;
      if (newline) break;
    }
    out.push_back(std::move(s));
  }
  STok end;
  end.eof = true;
  end.after_newline = !out.empty() && !out.back().trailing.empty() && out.back().trailing.back() == '\n';
  end.leading = std::move(pending);
  end.span = Span{text_size, text_size};
  out.push_back(std::move(end));
  return out;
}

bool is_punct(const STok& t, std::string_view p) {
  return !t.eof && t.kind == TokenKind::Punct && t.lexeme == p;
}
bool is_word(const STok& t, std::string_view w) {
  return !t.eof && t.kind == TokenKind::Word && t.lexeme == w;
}

bool string_terminated(std::string_view lexeme) {
  if (lexeme.size() < 2 || lexeme.back() != '"') return false;
  std::size_t backslashes = 0;
  for (std::size_t i = lexeme.size() - 1; i > 1 && lexeme[i - 1] == '\\'; --i) ++backslashes;
  return backslashes % 2 == 0;
}

/// Keywords that can only begin a statement; a failed statement never
/// swallows one at depth 0.
bool starts_statement(const STok& t) {
  return is_word(t, "var") || is_word(t, "if") || is_word(t, "while") || is_word(t, "repeat") ||
         is_word(t, "for");
}

struct Fail {};

/// Accumulates pieces for one node and hoists the outer trivia onto it.
class Builder {
 public:
  explicit Builder(NodeKind kind) { node_.kind = kind; }

  SyntaxNode& node() { return node_; }

  void token(const STok& t) {
    node_.pieces.push_back(Piece::token(t.leading, t.lexeme, t.trailing));
    extend(t.span);
  }
  void child(SyntaxNode c) {
    extend(c.span);
    node_.pieces.push_back(Piece::child(node_.children.size()));
    node_.children.push_back(std::move(c));
  }
  void body(std::vector<SyntaxNode> stmts) {
    for (const auto& s : stmts) extend(s.span);
    node_.pieces.push_back(Piece::body(node_.bodies.size()));
    node_.bodies.push_back(std::move(stmts));
  }

  SyntaxNode finish() {
    if (!node_.pieces.empty()) {
      Piece& first = node_.pieces.front();
      if (first.kind == Piece::Kind::Token) {
        node_.leading = std::move(first.leading);
        first.leading.clear();
      } else if (first.kind == Piece::Kind::Child) {
        auto& c = node_.children[first.index];
        node_.leading = std::move(c.leading);
        c.leading.clear();
      }
      Piece& last = node_.pieces.back();
      if (last.kind == Piece::Kind::Token) {
        node_.trailing = std::move(last.trailing);
        last.trailing.clear();
      } else if (last.kind == Piece::Kind::Child) {
        auto& c = node_.children[last.index];
        node_.trailing = std::move(c.trailing);
        c.trailing.clear();
      }
    }
    return std::move(node_);
  }

 private:
  void extend(Span s) {
    if (!started_) {
      node_.span = s;
      started_ = true;
    } else {
      node_.span.end = s.end;
    }
  }

  SyntaxNode node_;
  bool started_ = false;
};

class Parser {
 public:
  Parser(std::string_view text, std::vector<STok> toks) : text_(text), toks_(std::move(toks)) {}

  ParseResult run() {
    check_balance();
    if (!blocking_.empty()) return blocked();
    auto stmts = statements(false);
    if (!blocking_.empty()) return blocked();
    Builder program(NodeKind::Program);
    program.body(std::move(stmts));
    SyntaxNode tree = program.finish();
    const STok& end = toks_.back();
    tree.pieces.push_back(Piece::token(end.leading, "", ""));
    tree.span = Span{0, text_.size()};
    return ParseResult{std::move(tree), std::move(diags_)};
  }

 private:
  const STok& cur() const { return toks_[pos_]; }
  const STok& peek(std::size_t k = 1) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  const STok& advance() {
    const STok& t = toks_[pos_];
    if (!t.eof) ++pos_;
    return t;
  }
  const STok& expect_punct(std::string_view p) {
    if (!is_punct(cur(), p)) throw Fail{};
    return advance();
  }
  const STok& expect_word(std::string_view w) {
    if (!is_word(cur(), w)) throw Fail{};
    return advance();
  }
  const STok& expect_identifier() {
    const STok& t = cur();
    if (t.eof || t.kind != TokenKind::Word || !is_identifier(t.lexeme)) throw Fail{};
    return advance();
  }

  std::string raw_text(std::size_t first, std::size_t last_exclusive) const {
    const std::size_t b = toks_[first].span.begin;
    const std::size_t e = toks_[last_exclusive - 1].span.end;
    return std::string(text_.substr(b, e - b));
  }

  SyntaxNode raw_node(NodeKind kind, std::size_t first, std::size_t last_exclusive) const {
    SyntaxNode n;
    n.kind = kind;
    n.text = raw_text(first, last_exclusive);
    n.leading = toks_[first].leading;
    n.trailing = toks_[last_exclusive - 1].trailing;
    n.pieces.push_back(Piece::token("", n.text, ""));
    n.span = Span{toks_[first].span.begin, toks_[last_exclusive - 1].span.end};
    return n;
  }

  void check_balance() {
    std::vector<const STok*> stack;
    for (const STok& t : toks_) {
      if (t.eof || t.kind != TokenKind::Punct) continue;
      if (t.lexeme == "(" || t.lexeme == "{") {
        stack.push_back(&t);
      } else if (t.lexeme == ")" || t.lexeme == "}") {
        const char open = t.lexeme == ")" ? '(' : '{';
        if (!stack.empty() && stack.back()->lexeme[0] == open) {
          stack.pop_back();
        } else {
          blocking_.push_back({Severity::SwitchBlocking, "unmatched '" + t.lexeme + "'", t.span});
        }
      }
    }
    for (const STok* t : stack) {
      blocking_.push_back({Severity::SwitchBlocking, "unclosed '" + t->lexeme + "'", t->span});
    }
  }

  ParseResult blocked() const {
    SyntaxNode err;
    err.kind = NodeKind::ErrorStmt;
    err.text = std::string(text_);
    err.pieces.push_back(Piece::token("", err.text, ""));
    err.span = Span{0, text_.size()};
    SyntaxNode tree;
    tree.kind = NodeKind::Program;
    tree.bodies.push_back({std::move(err)});
    tree.pieces.push_back(Piece::body(0));
    tree.span = Span{0, text_.size()};
    return ParseResult{std::move(tree), blocking_};
  }

  std::vector<SyntaxNode> statements(bool in_block) {
    std::vector<SyntaxNode> out;
    while (!cur().eof && !(in_block && is_punct(cur(), "}"))) {
      out.push_back(statement_or_recover());
      if (!blocking_.empty()) break;
    }
    return out;
  }

  SyntaxNode statement_or_recover() {
    const std::size_t start = pos_;
    const std::size_t mark = diags_.size();
    try {
      return statement();
    } catch (const Fail&) {
    }
    pos_ = start;
    diags_.resize(mark);

    std::size_t i = start;
    int depth = 0;
    while (!toks_[i].eof) {
      const STok& t = toks_[i];
      if (depth == 0 && i > start && (t.starts_line() || is_punct(t, "}") || starts_statement(t))) break;
      if (is_punct(t, "{")) {
        blocking_.push_back({Severity::SwitchBlocking,
                             "statement cannot be parsed and contains a block", t.span});
        return SyntaxNode{};
      }
      if (is_punct(t, "(")) ++depth;
      if (is_punct(t, ")") && depth > 0) --depth;
      ++i;
      if (depth == 0 && is_punct(t, ";")) break;
    }
    if (i == start) ++i;
    SyntaxNode err = raw_node(NodeKind::ErrorStmt, start, i);
    diags_.push_back({Severity::Recoverable, "cannot parse statement", err.span});
    pos_ = i;
    return err;
  }

  void block(Builder& b) {
    b.token(expect_punct("{"));
    b.body(statements(true));
    b.token(expect_punct("}"));
  }

  SyntaxNode statement() {
    const STok& t = cur();
    if (t.eof || t.kind != TokenKind::Word) throw Fail{};
    if (t.lexeme == "var") {
      Builder b(NodeKind::VarDecl);
      b.token(advance());
      const STok& name = expect_identifier();
      b.node().text = name.lexeme;
      b.token(name);
      b.token(expect_punct("="));
      b.child(expression_region(";"));
      b.token(expect_punct(";"));
      return b.finish();
    }
    if (t.lexeme == "if") {
      Builder b(NodeKind::If);
      b.token(advance());
      b.token(expect_punct("("));
      b.child(expression_region(")"));
      b.token(expect_punct(")"));
      block(b);
      if (is_word(cur(), "else")) {
        b.token(advance());
        block(b);
      }
      return b.finish();
    }
    if (t.lexeme == "while" || t.lexeme == "repeat") {
      Builder b(t.lexeme == "while" ? NodeKind::While : NodeKind::Repeat);
      b.token(advance());
      b.token(expect_punct("("));
      b.child(expression_region(")"));
      b.token(expect_punct(")"));
      block(b);
      return b.finish();
    }
    if (t.lexeme == "for") {
      Builder b(NodeKind::ForClassic);
      b.token(advance());
      b.token(expect_punct("("));
      b.token(expect_word("var"));
      const STok& name = expect_identifier();
      b.node().text = name.lexeme;
      b.token(name);
      b.token(expect_punct("="));
      b.child(expression_region(";"));
      b.token(expect_punct(";"));
      b.child(expression_region(";"));
      b.token(expect_punct(";"));
      const STok& upd = expect_identifier();
      b.node().update_name = upd.lexeme;
      b.token(upd);
      const STok& p1 = expect_punct("+");
      const STok& p2 = cur();
      if (!is_punct(p2, "+") || p2.span.begin != p1.span.end) throw Fail{};
      b.token(p1);
      b.token(advance());
      b.token(expect_punct(")"));
      block(b);
      return b.finish();
    }
    if (!is_identifier(t.lexeme)) throw Fail{};
    if (is_punct(peek(), "=")) {
      Builder b(NodeKind::Assign);
      b.node().text = t.lexeme;
      b.token(advance());
      b.token(advance());
      b.child(expression_region(";"));
      b.token(expect_punct(";"));
      return b.finish();
    }
    if (is_punct(peek(), "(")) {
      const int arity = command_arity(t.lexeme);
      if (arity < 0) throw Fail{};
      Builder b(NodeKind::CallStmt);
      b.node().text = t.lexeme;
      b.token(advance());
      b.token(advance());
      for (int k = 0; k < arity; ++k) {
        const std::string_view term = k + 1 == arity ? ")" : ",";
        b.child(expression_region(term));
        b.token(expect_punct(term));
      }
      b.token(expect_punct(";"));
      return b.finish();
    }
    throw Fail{};
  }

  /// Parses an expression that must be followed by `term`. A non-empty
  /// malformed region becomes an ErrorExpr; before a `;` it must stay on
  /// one line.
  SyntaxNode expression_region(std::string_view term) {
    const std::size_t start = pos_;
    try {
      SyntaxNode e = expression(1);
      if (is_punct(cur(), term)) return e;
    } catch (const Fail&) {
    }
    pos_ = start;
    std::size_t i = start;
    int depth = 0;
    for (;; ++i) {
      const STok& t = toks_[i];
      if (t.eof) throw Fail{};
      // Inside parentheses a line break does not end the expression.
      if (term == ";" && depth == 0 && i > start && t.starts_line()) throw Fail{};
      if (depth == 0 && is_punct(t, term)) break;
      if (is_punct(t, "{") || is_punct(t, "}")) throw Fail{};
      if (depth == 0 && is_punct(t, ";")) throw Fail{};
      if (is_punct(t, "(")) ++depth;
      if (is_punct(t, ")")) {
        if (depth == 0) throw Fail{};
        --depth;
      }
    }
    if (i == start) throw Fail{};
    SyntaxNode err = raw_node(NodeKind::ErrorExpr, start, i);
    diags_.push_back({Severity::Recoverable, "cannot parse expression", err.span});
    pos_ = i;
    return err;
  }

  SyntaxNode expression(int min_prec) {
    SyntaxNode lhs = primary();
    for (;;) {
      const STok& t = cur();
      if (t.eof || t.kind != TokenKind::Punct) break;
      const int prec = binary_precedence(t.lexeme);
      if (prec == 0 || prec < min_prec) break;
      const STok& op = advance();
      SyntaxNode rhs = expression(prec + 1);
      Builder b(NodeKind::ExprBinary);
      b.node().text = op.lexeme;
      b.child(std::move(lhs));
      b.token(op);
      b.child(std::move(rhs));
      lhs = b.finish();
    }
    return lhs;
  }

  SyntaxNode leaf(NodeKind kind, const STok& t) {
    Builder b(kind);
    b.node().text = t.lexeme;
    b.token(t);
    return b.finish();
  }

  SyntaxNode primary() {
    const STok& t = cur();
    if (t.eof) throw Fail{};
    if (t.kind == TokenKind::Number) return leaf(NodeKind::ExprNumber, advance());
    if (t.kind == TokenKind::String) {
      if (!string_terminated(t.lexeme)) throw Fail{};
      return leaf(NodeKind::ExprString, advance());
    }
    if (is_punct(t, "-")) {
      const STok& num = peek();
      if (num.eof || num.kind != TokenKind::Number || num.span.begin != t.span.end) throw Fail{};
      STok merged = t;
      merged.kind = TokenKind::Number;
      merged.lexeme = "-" + num.lexeme;
      merged.span.end = num.span.end;
      merged.trailing = num.trailing;
      advance();
      advance();
      return leaf(NodeKind::ExprNumber, merged);
    }
    if (is_word(t, "true") || is_word(t, "false")) return leaf(NodeKind::ExprBool, advance());
    if (t.kind == TokenKind::Word) {
      if (!is_identifier(t.lexeme)) throw Fail{};
      if (!is_punct(peek(), "(")) return leaf(NodeKind::ExprVar, advance());
      const int arity = function_arity(t.lexeme);
      if (arity < 0) throw Fail{};
      Builder b(NodeKind::ExprCall);
      b.node().text = t.lexeme;
      b.token(advance());
      b.token(advance());
      for (int k = 0; k < arity; ++k) {
        b.child(expression(1));
        b.token(expect_punct(k + 1 == arity ? ")" : ","));
      }
      return b.finish();
    }
    if (is_punct(t, "(")) {
      const STok& open = advance();
      SyntaxNode inner = expression(1);
      const STok& close = expect_punct(")");
      std::vector<Piece> pieces;
      pieces.reserve(inner.pieces.size() + 2);
      pieces.push_back(Piece::token("", "(", open.trailing + inner.leading));
      for (auto& p : inner.pieces) pieces.push_back(std::move(p));
      pieces.push_back(Piece::token(inner.trailing + close.leading, ")", ""));
      inner.pieces = std::move(pieces);
      inner.leading = open.leading;
      inner.trailing = close.trailing;
      inner.span = Span{open.span.begin, close.span.end};
      ++inner.parens;
      return inner;
    }
    throw Fail{};
  }

  std::string_view text_;
  std::vector<STok> toks_;
  std::size_t pos_ = 0;
  std::vector<Diagnostic> diags_;
  std::vector<Diagnostic> blocking_;
};

}  // namespace

bool ParseResult::has_switch_blocking() const {
  for (const auto& d : diagnostics) {
    if (d.severity == Severity::SwitchBlocking) return true;
  }
  return false;
}

std::size_t ParseResult::recoverable_count() const {
  std::size_t n = 0;
  for (const auto& d : diagnostics) n += d.severity == Severity::Recoverable;
  return n;
}

ParseResult parse(std::string_view text) {
  Parser parser(text, significant_tokens(tokenize(text), text.size()));
  return parser.run();
}

}  // namespace notchkit
