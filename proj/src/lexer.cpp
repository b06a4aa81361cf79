#include "notchkit/syntax.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <system_error>

namespace notchkit {

namespace {

bool is_word_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
bool is_word_char(char c) { return is_word_start(c) || (c >= '0' && c <= '9'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

constexpr std::array<std::string_view, 6> kTwoCharOps = {"<=", ">=", "==", "!=", "&&", "||"};

constexpr std::array<std::string_view, 8> kKeywords = {"var",   "if",     "else", "while",
                                                       "for",   "repeat", "true", "false"};

}  // namespace

std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::Word: return "Word";
    case TokenKind::Punct: return "Punct";
    case TokenKind::Number: return "Number";
    case TokenKind::String: return "String";
    case TokenKind::Newline: return "Newline";
    case TokenKind::Whitespace: return "Whitespace";
    case TokenKind::Comment: return "Comment";
  }
  return "?";
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  const std::size_t n = text.size();
  auto push = [&](TokenKind kind, std::size_t begin, std::size_t end) {
    tokens.push_back(Token{kind, std::string(text.substr(begin, end - begin)), Span{begin, end}});
  };
  while (i < n) {
    const std::size_t start = i;
    const char c = text[i];
    if (c == '\n') {
      push(TokenKind::Newline, start, ++i);
    } else if (c == ' ' || c == '\t' || c == '\r') {
      while (i < n && (text[i] == ' ' || text[i] == '\t' || text[i] == '\r')) ++i;
      push(TokenKind::Whitespace, start, i);
    } else if (c == '/' && i + 1 < n && text[i + 1] == '/') {
      while (i < n && text[i] != '\n') ++i;
      push(TokenKind::Comment, start, i);
    } else if (is_word_start(c)) {
      while (i < n && is_word_char(text[i])) ++i;
      push(TokenKind::Word, start, i);
    } else if (is_digit(c)) {
      while (i < n && is_digit(text[i])) ++i;
      if (i + 1 < n && text[i] == '.' && is_digit(text[i + 1])) {
        ++i;
        while (i < n && is_digit(text[i])) ++i;
      }
      push(TokenKind::Number, start, i);
    } else if (c == '"') {
      ++i;
      while (i < n && text[i] != '\n') {
        if (text[i] == '\\' && i + 1 < n && text[i + 1] != '\n') {
          i += 2;
          continue;
        }
        if (text[i++] == '"') break;
      }
      push(TokenKind::String, start, i);
    } else {
      bool two = false;
      if (i + 1 < n) {
        for (auto op : kTwoCharOps) {
          if (text.substr(i, 2) == op) {
            two = true;
            break;
          }
        }
      }
      if (two) {
        i += 2;
      } else {
        ++i;
        // keep a multi-byte UTF-8 sequence in one token
        if (static_cast<unsigned char>(c) >= 0xC0) {
          while (i < n && (static_cast<unsigned char>(text[i]) & 0xC0) == 0x80) ++i;
        }
      }
      push(TokenKind::Punct, start, i);
    }
  }
  return tokens;
}

int binary_precedence(std::string_view op) {
  if (op == "||") return 1;
  if (op == "&&") return 2;
  if (op == "==" || op == "!=") return 3;
  if (op == "<" || op == "<=" || op == ">" || op == ">=") return 4;
  if (op == "+" || op == "-") return 5;
  if (op == "*" || op == "/") return 6;
  return 0;
}

bool is_keyword(std::string_view word) {
  for (auto k : kKeywords) {
    if (k == word) return true;
  }
  return false;
}

bool is_identifier(std::string_view word) {
  if (word.empty() || !is_word_start(word.front())) return false;
  for (char c : word) {
    if (!is_word_char(c)) return false;
  }
  return !is_keyword(word);
}

int command_arity(std::string_view callee) {
  if (callee == "say" || callee == "moveForward") return 1;
  if (callee == "playNoteFor") return 2;
  return -1;
}

int function_arity(std::string_view callee) {
  if (callee == "abs" || callee == "round") return 1;
  if (callee == "min" || callee == "max") return 2;
  return -1;
}

std::string format_number(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("number literal must be finite");
  if (value == 0.0) return "0";
  std::array<char, 400> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                 std::chars_format::fixed);
  if (ec != std::errc()) throw std::invalid_argument("number out of range");
  return std::string(buf.data(), end);
}

double parse_number(std::string_view lexeme) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(lexeme.data(), lexeme.data() + lexeme.size(), value);
  if (ec != std::errc() || ptr != lexeme.data() + lexeme.size()) {
    throw std::invalid_argument("not a number literal: " + std::string(lexeme));
  }
  return value;
}

std::string quote_string(std::string_view value) {
  std::string out = "\"";
  for (char c : value) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

std::string unquote_string(std::string_view lexeme) {
  std::string out;
  if (lexeme.size() < 2) return out;
  for (std::size_t i = 1; i + 1 < lexeme.size(); ++i) {
    char c = lexeme[i];
    if (c == '\\' && i + 2 < lexeme.size()) {
      char e = lexeme[++i];
      switch (e) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        default: out += e;
      }
    } else {
      out += c;
    }
  }
  return out;
}

}  // namespace notchkit
