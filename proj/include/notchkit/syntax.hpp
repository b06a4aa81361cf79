#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace notchkit {

/// Half-open byte range [begin, end) into the parsed source.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  friend bool operator==(const Span&, const Span&) = default;
};

enum class TokenKind { Word, Punct, Number, String, Newline, Whitespace, Comment };

std::string_view to_string(TokenKind kind);

struct Token {
  TokenKind kind;
  std::string lexeme;
  Span span;

  bool is_trivia() const {
    return kind == TokenKind::Newline || kind == TokenKind::Whitespace ||
           kind == TokenKind::Comment;
  }
  friend bool operator==(const Token&, const Token&) = default;
};

/// Splits text into tokens without dropping a single byte: the lexemes
/// concatenate back to the input. `++` yields two `+` tokens.
std::vector<Token> tokenize(std::string_view text);

enum class NodeKind {
  Program,
  VarDecl,
  Assign,
  If,
  While,
  ForClassic,
  Repeat,
  CallStmt,
  ExprNumber,
  ExprString,
  ExprBool,
  ExprVar,
  ExprBinary,
  ExprCall,
  ErrorStmt,
  ErrorExpr,
};

std::string_view to_string(NodeKind kind);
bool parse_node_kind(std::string_view name, NodeKind& out);
bool is_statement(NodeKind kind);
bool is_expression(NodeKind kind);
bool is_error(NodeKind kind);

/// One element of a node's recorded source layout. Token pieces carry
/// their own surrounding trivia; Child/Body pieces refer into the node's
/// `children` / `bodies` by index.
struct Piece {
  enum class Kind { Token, Child, Body };
  Kind kind = Kind::Token;
  std::string leading;
  std::string lexeme;
  std::string trailing;
  std::size_t index = 0;

  static Piece token(std::string leading, std::string lexeme, std::string trailing) {
    return Piece{Kind::Token, std::move(leading), std::move(lexeme), std::move(trailing), 0};
  }
  static Piece child(std::size_t i) { return Piece{Kind::Child, {}, {}, {}, i}; }
  static Piece body(std::size_t i) { return Piece{Kind::Body, {}, {}, {}, i}; }

  friend bool operator==(const Piece&, const Piece&) = default;
};

/// Lossless syntax tree node.
///
/// `text` holds the kind-specific payload: the declared/assigned/read
/// variable name, the binary operator, the callee, a literal's lexeme, or
/// the verbatim source of an error node. ForClassic stores the loop
/// variable in `text` and the incremented variable in `update_name`.
///
/// Expression operands live in `children` (VarDecl/Assign: value; If/While:
/// condition; Repeat: count; ForClassic: init, test; calls: arguments;
/// ExprBinary: lhs, rhs). Statement lists live in `bodies` (Program: 1;
/// While/Repeat/ForClassic: 1; If: 1 or 2).
///
/// A node parsed from text has non-empty `pieces` and is emitted from
/// them verbatim. A node built by hand (no pieces) is emitted with the
/// canonical layout.
struct SyntaxNode {
  NodeKind kind = NodeKind::Program;
  std::string text;
  std::string update_name;
  std::vector<SyntaxNode> children;
  std::vector<std::vector<SyntaxNode>> bodies;
  std::string leading;
  std::string trailing;
  std::vector<Piece> pieces;
  Span span;
  /// Number of parenthesis pairs wrapped around this expression in `pieces`.
  int parens = 0;

  bool synthesized() const { return pieces.empty(); }
};

/// Structural comparison: kind, payload and children, ignoring layout,
/// trivia and spans. Number literals compare by value.
bool same_structure(const SyntaxNode& a, const SyntaxNode& b);

enum class Severity { Recoverable, SwitchBlocking };

std::string_view to_string(Severity severity);

struct Diagnostic {
  Severity severity;
  std::string message;
  Span span;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

struct ParseResult {
  SyntaxNode tree;
  std::vector<Diagnostic> diagnostics;

  bool has_switch_blocking() const;
  std::size_t recoverable_count() const;
};

/// Error-recovering parse. Never fails: every problem is a diagnostic.
/// With only Recoverable diagnostics the tree holds one error node per
/// diagnostic; with any SwitchBlocking diagnostic the tree is a Program
/// holding a single ErrorStmt with the whole text.
ParseResult parse(std::string_view text);

/// Writes a tree back to text. Parsed, unmodified trees reproduce their
/// source byte for byte.
std::string emit(const SyntaxNode& tree);

/// Emits a node placed at the given statement nesting depth (used for
/// the indentation of synthesized statements).
std::string emit(const SyntaxNode& node, int depth);

std::size_t count_error_nodes(const SyntaxNode& tree);

// Grammar facts shared by the block model, projection and runtime.

int binary_precedence(std::string_view op);  ///< 0 when not a binary operator
bool is_keyword(std::string_view word);
bool is_identifier(std::string_view word);
/// Argument count of a builtin command (say, playNoteFor, moveForward); -1 if unknown.
int command_arity(std::string_view callee);
/// Argument count of a builtin value function (abs, round, min, max); -1 if unknown.
int function_arity(std::string_view callee);

/// Shortest decimal text for a finite number that the tokenizer reads back
/// as the same value (a leading `-` for negatives, no exponent).
std::string format_number(double value);
/// Quotes and escapes a string value as a Notch string literal.
std::string quote_string(std::string_view value);
/// Decodes a terminated string literal lexeme (including quotes).
std::string unquote_string(std::string_view lexeme);
double parse_number(std::string_view lexeme);

// Convenience builders for synthesized trees.
namespace build {
SyntaxNode number(double value);
SyntaxNode string(std::string value);
SyntaxNode boolean(bool value);
SyntaxNode var(std::string name);
SyntaxNode binary(std::string op, SyntaxNode lhs, SyntaxNode rhs);
SyntaxNode call_expr(std::string callee, std::vector<SyntaxNode> args);
SyntaxNode var_decl(std::string name, SyntaxNode value);
SyntaxNode assign(std::string name, SyntaxNode value);
SyntaxNode call(std::string callee, std::vector<SyntaxNode> args);
SyntaxNode if_(SyntaxNode cond, std::vector<SyntaxNode> then_body);
SyntaxNode if_else(SyntaxNode cond, std::vector<SyntaxNode> then_body,
                   std::vector<SyntaxNode> else_body);
SyntaxNode while_(SyntaxNode cond, std::vector<SyntaxNode> body);
SyntaxNode repeat(SyntaxNode count, std::vector<SyntaxNode> body);
SyntaxNode for_classic(std::string var, SyntaxNode init, SyntaxNode test,
                       std::string update_var, std::vector<SyntaxNode> body);
SyntaxNode error_stmt(std::string raw);
SyntaxNode error_expr(std::string raw);
SyntaxNode program(std::vector<SyntaxNode> statements);
}  // namespace build

}  // namespace notchkit
