#include "generator.hpp"

#include <set>
#include <vector>

namespace notchkit::testing {

namespace {

enum class Type { Num, Bool, Str };

struct Var {
  std::string name;
  Type type;
  bool frozen;  // loop counters are never assigned in their body
};

class Generator {
 public:
  Generator(Rng& rng, const GenOptions& o) : rng_(rng), o_(o) {}

  std::string program() {
    scopes_.emplace_back();
    if (chance(0.2)) out_ += comment() + "\n";
    if (chance(0.1)) out_ += "\n";
    const int n = pick(0, o_.max_statements);
    for (int i = 0; i < n; ++i) statement(0);
    if (!out_.empty() && chance(0.15)) {
      // Sometimes the file ends without a newline.
      while (!out_.empty() && out_.back() == '\n') out_.pop_back();
    } else if (chance(0.1)) {
      out_ += chance(0.5) ? "\n" : comment() + "\n";
    }
    return out_;
  }

 private:
  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }
  template <class T>
  const T& one_of(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(pick(0, static_cast<int>(v.size()) - 1))];
  }

  std::string sp() {
    if (!o_.messy_layout) return " ";
    const int r = pick(0, 9);
    if (r < 6) return " ";
    if (r < 8) return "";
    if (r < 9) return "  ";
    return "\t";
  }
  // Optional space where none is required.
  std::string osp() {
    if (!o_.messy_layout) return "";
    const int r = pick(0, 9);
    return r < 7 ? "" : r < 9 ? " " : "  ";
  }
  // Required separation between two words.
  std::string wsp() {
    if (!o_.messy_layout) return " ";
    return pick(0, 5) == 0 ? "  " : " ";
  }

  std::string comment() {
    static const std::vector<std::string> words = {"note", "todo: tidy", "counts up", "a b c", "x = 1;", "{ not code }", "// nested"};
    return "//" + std::string(chance(0.7) ? " " : "") + one_of(words);
  }

  std::string indent(int depth) {
    if (!o_.messy_layout) return std::string(static_cast<std::size_t>(depth) * 2, ' ');
    const int r = pick(0, 9);
    if (r < 7) return std::string(static_cast<std::size_t>(depth) * 2, ' ');
    if (r < 9) return std::string(static_cast<std::size_t>(depth), '\t');
    return std::string(static_cast<std::size_t>(pick(0, 5)), ' ');
  }

  std::string end_of_line() {
    if (o_.messy_layout && chance(0.1)) return sp() + comment() + "\n";
    if (o_.messy_layout && chance(0.05)) return "  \n";
    return "\n";
  }

  // ---- names ----

  std::string fresh_name() {
    static const std::vector<std::string> stems = {"x", "y", "n", "count", "total", "pitch", "step", "flag", "msg", "k", "size", "v_2", "_tmp"};
    for (;;) {
      std::string name = one_of(stems);
      if (chance(0.5)) name += std::to_string(pick(0, 99));
      if (used_.insert(name).second) return name;
    }
  }

  std::vector<const Var*> visible(Type t, bool assignable) const {
    std::vector<const Var*> out;
    for (const auto& scope : scopes_) {
      for (const auto& v : scope) {
        if (v.type == t && (!assignable || !v.frozen)) out.push_back(&v);
      }
    }
    return out;
  }

  // ---- expressions ----

  std::string number_literal(bool allow_negative = true) {
    const int r = pick(0, 9);
    std::string s;
    if (r < 5) {
      s = std::to_string(pick(0, 20));
    } else if (r < 7) {
      s = std::to_string(pick(0, 9)) + "." + std::to_string(pick(0, 99));
    } else if (r < 8 && o_.messy_layout) {
      s = "0" + std::to_string(pick(0, 9));  // leading zero
    } else if (r < 9) {
      s = std::to_string(pick(0, 4)) + ".0";
    } else {
      s = std::to_string(pick(1, 300));
    }
    if (allow_negative && chance(0.15)) s = "-" + s;
    return s;
  }

  std::string string_literal() {
    static const std::vector<std::string> bodies = {"", "hi", "Hello, world!", "tab\\there", "quote \\\"q\\\"", "back\\\\slash", "line\\nbreak", "{ ( ; ) }", "// not a comment", "UPPER lower 123"};
    return "\"" + one_of(bodies) + "\"";
  }

  std::string paren(std::string e) {
    if (o_.messy_layout && chance(0.1)) return "(" + osp() + e + osp() + ")";
    return e;
  }

  std::string expr(Type t, int depth) {
    const bool leaf = depth >= 3 || chance(0.45);
    if (leaf) return paren(leaf_expr(t));
    switch (t) {
      case Type::Num: {
        const int r = pick(0, 9);
        if (r < 6) {
          static const std::vector<std::string> ops = {"+", "-", "*", "/"};
          const std::string op = one_of(ops);
          std::string rhs = op == "/" && o_.runnable ? nonzero_literal() : expr(Type::Num, depth + 1);
          return "(" + osp() + expr(Type::Num, depth + 1) + sp() + op + sp() + rhs + osp() + ")";
        }
        if (r < 8) {
          static const std::vector<std::string> fs = {"abs", "round"};
          return one_of(fs) + "(" + osp() + expr(Type::Num, depth + 1) + osp() + ")";
        }
        static const std::vector<std::string> fs = {"min", "max"};
        return one_of(fs) + "(" + expr(Type::Num, depth + 1) + "," + sp() + expr(Type::Num, depth + 1) + ")";
      }
      case Type::Bool: {
        const int r = pick(0, 9);
        if (r < 5) {
          static const std::vector<std::string> ops = {"<", "<=", ">", ">="};
          return paren(expr(Type::Num, depth + 1) + sp() + one_of(ops) + sp() + expr(Type::Num, depth + 1));
        }
        if (r < 7) {
          static const std::vector<std::string> ops = {"==", "!="};
          const Type inner = static_cast<Type>(pick(0, 2));
          return "(" + expr(inner, depth + 1) + sp() + one_of(ops) + sp() + expr(inner, depth + 1) + ")";
        }
        static const std::vector<std::string> ops = {"&&", "||"};
        return "(" + expr(Type::Bool, depth + 1) + sp() + one_of(ops) + sp() + expr(Type::Bool, depth + 1) + ")";
      }
      case Type::Str:
        return leaf_expr(Type::Str);
    }
    return "0";
  }

  std::string nonzero_literal() { return std::to_string(pick(1, 9)); }

  std::string leaf_expr(Type t) {
    const auto vars = visible(t, false);
    if (!vars.empty() && chance(0.5)) return one_of(vars)->name;
    if (!o_.runnable && chance(0.05)) return fresh_free_name();
    switch (t) {
      case Type::Num: return number_literal();
      case Type::Bool: return chance(0.5) ? "true" : "false";
      case Type::Str: return string_literal();
    }
    return "0";
  }

  // Unused name; fine for parsing, not for running.
  std::string fresh_free_name() { return "free" + std::to_string(pick(0, 9)); }

  // ---- statements ----

  void line(int depth, const std::string& body) { out_ += indent(depth) + body + end_of_line(); }

  void block_open(int depth, const std::string& head) {
    out_ += indent(depth) + head + osp() + "{" + end_of_line();
  }

  void block_close(int depth, const std::string& tail = "") { out_ += indent(depth) + "}" + tail; }

  void body(int depth) {
    scopes_.emplace_back();
    const int n = pick(0, std::max(1, o_.max_statements / 2));
    for (int i = 0; i < n; ++i) statement(depth + 1);
    scopes_.pop_back();
  }

  void statement(int depth) {
    if (o_.messy_layout && chance(0.05)) out_ += "\n";
    if (o_.messy_layout && chance(0.05)) out_ += indent(depth) + comment() + "\n";
    const bool nest = depth < o_.max_depth;
    const int r = pick(0, nest ? 13 : 6);
    switch (r) {
      case 0:
      case 1: {
        const Type t = static_cast<Type>(pick(0, 2));
        const std::string name = fresh_name();
        line(depth, "var" + wsp() + name + sp() + "=" + sp() + expr(t, 0) + osp() + ";");
        scopes_.back().push_back(Var{name, t, false});
        break;
      }
      case 2: {
        const Type t = static_cast<Type>(pick(0, 2));
        const auto vars = visible(t, true);
        if (vars.empty()) {
          line(depth, "say(" + osp() + expr(t, 0) + osp() + ");");
        } else {
          line(depth, one_of(vars)->name + sp() + "=" + sp() + expr(t, 0) + ";");
        }
        break;
      }
      case 3:
        line(depth, "say(" + osp() + expr(static_cast<Type>(pick(0, 2)), 0) + osp() + ")" + osp() + ";");
        break;
      case 4:
        line(depth, "playNoteFor(" + expr(Type::Num, 1) + "," + sp() + expr(Type::Num, 1) + ");");
        break;
      case 5:
        line(depth, "moveForward(" + expr(Type::Num, 1) + ");");
        break;
      case 6: {
        const auto vars = visible(Type::Num, true);
        if (vars.empty()) {
          line(depth, "say(" + number_literal() + ");");
        } else {
          const std::string name = one_of(vars)->name;
          line(depth, name + sp() + "=" + sp() + name + sp() + "+" + sp() + number_literal(false) + ";");
        }
        break;
      }
      case 7:
      case 8: {
        block_open(depth, "if" + osp() + "(" + osp() + expr(Type::Bool, 0) + osp() + ")");
        body(depth);
        if (chance(0.4)) {
          block_close(depth, sp() + "else" + osp() + "{" + end_of_line());
          body(depth);
        }
        block_close(depth);
        out_ += end_of_line();
        break;
      }
      case 9:
      case 10:
        for_loop(depth);
        break;
      case 11: {
        const std::string count = o_.runnable ? std::to_string(pick(0, 5)) : expr(Type::Num, 1);
        block_open(depth, "repeat" + osp() + "(" + count + ")");
        body(depth);
        block_close(depth);
        out_ += end_of_line();
        break;
      }
      case 12:
      case 13:
        while_loop(depth);
        break;
    }
  }

  void for_loop(int depth) {
    const std::string name = fresh_name();
    const bool canonical = chance(0.6);
    const std::string init = canonical ? (chance(0.8) ? "0" : "0.0") : std::to_string(pick(1, 4));
    std::string limit;
    if (o_.runnable) {
      limit = std::to_string(pick(0, 6));
    } else {
      const int r = pick(0, 2);
      limit = r == 0 ? std::to_string(pick(0, 60)) : expr(Type::Num, 1);
    }
    static const std::vector<std::string> cmps = {"<", "<", "<=", ">"};
    const std::string cmp = canonical ? "<" : (o_.runnable ? std::string(chance(0.5) ? "<" : "<=") : one_of(cmps));
    const std::string head = "for" + osp() + "(" + osp() + "var" + wsp() + name + sp() + "=" + sp() + init + ";" + sp() +
                             name + sp() + cmp + sp() + limit + ";" + sp() + name + "++" + osp() + ")";
    block_open(depth, head);
    scopes_.emplace_back();
    scopes_.back().push_back(Var{name, Type::Num, true});
    body(depth);
    scopes_.pop_back();
    block_close(depth);
    out_ += end_of_line();
    if (!o_.runnable) return;
    // The loop variable stays declared after the loop.
    scopes_.back().push_back(Var{name, Type::Num, true});
  }

  void while_loop(int depth) {
    if (!o_.runnable) {
      block_open(depth, "while" + osp() + "(" + expr(Type::Bool, 0) + ")");
      body(depth);
      block_close(depth);
      out_ += end_of_line();
      return;
    }
    const std::string counter = fresh_name();
    line(depth, "var " + counter + " = 0;");
    block_open(depth, "while (" + counter + " < " + std::to_string(pick(0, 5)) + ")");
    scopes_.emplace_back();
    scopes_.back().push_back(Var{counter, Type::Num, true});
    const int n = pick(0, std::max(1, o_.max_statements / 2));
    for (int i = 0; i < n; ++i) statement(depth + 1);
    line(depth + 1, counter + " = " + counter + " + 1;");
    scopes_.pop_back();
    block_close(depth);
    out_ += end_of_line();
    scopes_.back().push_back(Var{counter, Type::Num, true});
  }

  Rng& rng_;
  GenOptions o_;
  std::string out_;
  std::vector<std::vector<Var>> scopes_;
  std::set<std::string> used_;
};

}  // namespace

std::string random_program(Rng& rng, const GenOptions& options) { return Generator(rng, options).program(); }

}  // namespace notchkit::testing
