#include "notchkit/runtime.hpp"

#include <cmath>

#include "json.hpp"
#include "notchkit/projection.hpp"

namespace notchkit {

std::string describe(const Effect& e) {
  switch (e.kind) {
    case Effect::Kind::Say: return "say " + e.text;
    case Effect::Kind::Note: return "note " + format_number(e.a) + " for " + format_number(e.b);
    case Effect::Kind::Move: return "move " + format_number(e.a);
  }
  return "?";
}

std::string_view to_string(StepPart part) {
  switch (part) {
    case StepPart::Statement: return "statement";
    case StepPart::Condition: return "condition";
    case StepPart::Count: return "count";
    case StepPart::Init: return "init";
    case StepPart::Test: return "test";
    case StepPart::Update: return "update";
  }
  return "?";
}

std::string_view to_string(RuntimeErrc code) {
  switch (code) {
    case RuntimeErrc::UndefinedVariable: return "UndefinedVariable";
    case RuntimeErrc::TypeError: return "TypeError";
    case RuntimeErrc::DivByZero: return "DivByZero";
    case RuntimeErrc::StepLimitExceeded: return "StepLimitExceeded";
    case RuntimeErrc::AtStart: return "AtStart";
    case RuntimeErrc::AtEnd: return "AtEnd";
  }
  return "?";
}

RuntimeError::RuntimeError(RuntimeErrc code, std::size_t step, Span span, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + " at step " + std::to_string(step) + ": " + what),
      code_(code),
      step_(step),
      span_(span) {}

const SyntaxNode* ExecState::current() const {
  if (control.empty()) return nullptr;
  const Frame& f = control.back();
  return f.index < f.body->size() ? &(*f.body)[f.index] : nullptr;
}

bool same_state(const ExecState& a, const ExecState& b) {
  return a.step_index == b.step_index && a.env == b.env && a.control == b.control && a.output == b.output;
}

namespace {

std::string type_name(const Value& v) {
  if (std::holds_alternative<double>(v)) return "number";
  if (std::holds_alternative<std::string>(v)) return "text";
  return "boolean";
}

class Evaluator {
 public:
  Evaluator(const Environment& env, std::size_t step) : env_(env), step_(step) {}

  Value eval(const SyntaxNode& e) const {
    switch (e.kind) {
      case NodeKind::ExprNumber: return parse_number(e.text);
      case NodeKind::ExprString: return unquote_string(e.text);
      case NodeKind::ExprBool: return e.text == "true";
      case NodeKind::ExprVar: {
        const auto it = env_.find(e.text);
        if (it == env_.end()) fail(RuntimeErrc::UndefinedVariable, e, "'" + e.text + "' is not declared");
        return it->second;
      }
      case NodeKind::ExprBinary: return binary(e);
      case NodeKind::ExprCall: return call(e);
      default: fail(RuntimeErrc::TypeError, e, "cannot evaluate " + std::string(to_string(e.kind)));
    }
  }

  double number(const SyntaxNode& e) const {
    const Value v = eval(e);
    if (const auto* d = std::get_if<double>(&v)) return *d;
    fail(RuntimeErrc::TypeError, e, "expected a number, got " + type_name(v));
  }

  bool boolean(const SyntaxNode& e) const {
    const Value v = eval(e);
    if (const auto* b = std::get_if<bool>(&v)) return *b;
    fail(RuntimeErrc::TypeError, e, "expected a boolean, got " + type_name(v));
  }

  [[noreturn]] void fail(RuntimeErrc code, const SyntaxNode& at, const std::string& what) const {
    throw RuntimeError(code, step_, at.span, what);
  }

  double finite(double d, const SyntaxNode& at) const {
    if (!std::isfinite(d)) fail(RuntimeErrc::TypeError, at, "number out of range");
    return d;
  }

 private:
  Value binary(const SyntaxNode& e) const {
    const std::string& op = e.text;
    const SyntaxNode& l = e.children.at(0);
    const SyntaxNode& r = e.children.at(1);
    if (op == "&&") return boolean(l) && boolean(r);
    if (op == "||") return boolean(l) || boolean(r);
    if (op == "==" || op == "!=") {
      const Value a = eval(l);
      const Value b = eval(r);
      return (a == b) == (op == "==");
    }
    const double a = number(l);
    const double b = number(r);
    if (op == "+") return finite(a + b, e);
    if (op == "-") return finite(a - b, e);
    if (op == "*") return finite(a * b, e);
    if (op == "/") {
      if (b == 0) fail(RuntimeErrc::DivByZero, e, "division by zero");
      return finite(a / b, e);
    }
    if (op == "<") return a < b;
    if (op == "<=") return a <= b;
    if (op == ">") return a > b;
    if (op == ">=") return a >= b;
    fail(RuntimeErrc::TypeError, e, "unknown operator " + op);
  }

  Value call(const SyntaxNode& e) const {
    if (e.text == "abs") return std::fabs(number(e.children.at(0)));
    if (e.text == "round") return finite(std::floor(number(e.children.at(0)) + 0.5), e);
    if (e.text == "min") return std::min(number(e.children.at(0)), number(e.children.at(1)));
    if (e.text == "max") return std::max(number(e.children.at(0)), number(e.children.at(1)));
    fail(RuntimeErrc::TypeError, e, "unknown function " + e.text);
  }

  const Environment& env_;
  std::size_t step_;
};

class Stepper {
 public:
  explicit Stepper(ExecState& s) : s_(s) {}

  void execute(TraceEvent& ev) {
    Frame& f = s_.control.back();
    const SyntaxNode& stmt = (*f.body)[f.index];
    ev.node = &stmt;
    ev.kind = stmt.kind;
    ev.span = stmt.span;
    Evaluator ev_(s_.env, s_.step_index);
    switch (stmt.kind) {
      case NodeKind::VarDecl:
        declare(ev, stmt.text, ev_.eval(stmt.children.at(0)));
        advance(f);
        break;
      case NodeKind::Assign: {
        if (s_.env.find(stmt.text) == s_.env.end()) {
          ev_.fail(RuntimeErrc::UndefinedVariable, stmt, "'" + stmt.text + "' is not declared");
        }
        declare(ev, stmt.text, ev_.eval(stmt.children.at(0)));
        advance(f);
        break;
      }
      case NodeKind::CallStmt:
        ev.effect = effect(stmt, ev_);
        s_.output.push_back(*ev.effect);
        advance(f);
        break;
      case NodeKind::If: {
        ev.part = StepPart::Condition;
        if (ev_.boolean(stmt.children.at(0))) {
          enter(f, stmt.bodies.at(0), 1);
        } else if (stmt.bodies.size() > 1) {
          enter(f, stmt.bodies[1], 1);
        } else {
          advance(f);
        }
        break;
      }
      case NodeKind::While:
        ev.part = StepPart::Condition;
        if (ev_.boolean(stmt.children.at(0))) {
          enter(f, stmt.bodies.at(0), 1);
        } else {
          advance(f);
        }
        break;
      case NodeKind::Repeat: {
        ev.part = StepPart::Count;
        const double n = std::floor(ev_.number(stmt.children.at(0)));
        if (n < 1 || stmt.bodies.at(0).empty()) {
          advance(f);
        } else {
          f.remaining = n - 1;
          enter(f, stmt.bodies[0], 1);
        }
        break;
      }
      case NodeKind::ForClassic:
        for_step(ev, f, stmt, ev_);
        break;
      default:
        ev_.fail(RuntimeErrc::TypeError, stmt, "cannot run " + std::string(to_string(stmt.kind)));
    }
    normalize();
  }

 private:
  void for_step(TraceEvent& ev, Frame& f, const SyntaxNode& stmt, const Evaluator& ev_) {
    switch (f.phase) {
      case 0:
        ev.part = StepPart::Init;
        declare(ev, stmt.text, ev_.eval(stmt.children.at(0)));
        f.phase = 2;
        break;
      case 2:
        ev.part = StepPart::Test;
        if (ev_.boolean(stmt.children.at(1))) {
          enter(f, stmt.bodies.at(0), 3);
        } else {
          advance(f);
        }
        break;
      default: {
        ev.part = StepPart::Update;
        const auto it = s_.env.find(stmt.update_name);
        if (it == s_.env.end()) {
          ev_.fail(RuntimeErrc::UndefinedVariable, stmt, "'" + stmt.update_name + "' is not declared");
        }
        const auto* d = std::get_if<double>(&it->second);
        if (d == nullptr) ev_.fail(RuntimeErrc::TypeError, stmt, "cannot add one to " + type_name(it->second));
        declare(ev, stmt.update_name, ev_.finite(*d + 1, stmt));
        f.phase = 2;
        break;
      }
    }
  }

  Effect effect(const SyntaxNode& stmt, const Evaluator& ev_) {
    Effect e;
    if (stmt.text == "say") {
      e.kind = Effect::Kind::Say;
      e.text = display(ev_.eval(stmt.children.at(0)));
    } else if (stmt.text == "playNoteFor") {
      e.kind = Effect::Kind::Note;
      e.a = ev_.number(stmt.children.at(0));
      e.b = ev_.number(stmt.children.at(1));
    } else if (stmt.text == "moveForward") {
      e.kind = Effect::Kind::Move;
      e.a = ev_.number(stmt.children.at(0));
    } else {
      ev_.fail(RuntimeErrc::TypeError, stmt, "unknown command " + stmt.text);
    }
    return e;
  }

  void declare(TraceEvent& ev, const std::string& var, Value v) {
    EnvDelta d;
    d.var = var;
    if (const auto it = s_.env.find(var); it != s_.env.end()) d.old = it->second;
    d.value = v;
    s_.env[var] = std::move(v);
    ev.deltas.push_back(std::move(d));
  }

  static void advance(Frame& f) {
    ++f.index;
    f.phase = 0;
    f.remaining = 0;
  }

  // `f` is invalidated by the push.
  void enter(Frame& f, const std::vector<SyntaxNode>& body, int phase) {
    f.phase = phase;
    s_.control.push_back(Frame{&body, 0, 0, 0});
  }

  /// Leaves finished statement lists and runs the loop bookkeeping that
  /// does not count as a step of its own.
  void normalize() {
    while (!s_.control.empty()) {
      Frame& top = s_.control.back();
      if (top.index < top.body->size()) return;
      s_.control.pop_back();
      if (s_.control.empty()) return;
      Frame& parent = s_.control.back();
      const SyntaxNode& stmt = (*parent.body)[parent.index];
      switch (stmt.kind) {
        case NodeKind::While: parent.phase = 0; break;
        case NodeKind::ForClassic: parent.phase = 4; break;
        case NodeKind::Repeat:
          if (parent.remaining >= 1) {
            parent.remaining -= 1;
            s_.control.push_back(Frame{&stmt.bodies[0], 0, 0, 0});
          } else {
            advance(parent);
          }
          break;
        default: advance(parent); break;
      }
    }
  }

  ExecState& s_;
};

}  // namespace

ExecState start(std::shared_ptr<const SyntaxNode> program, Environment env) {
  if (!program || program->kind != NodeKind::Program) throw std::invalid_argument("start expects a Program");
  if (count_error_nodes(*program) > 0) throw std::invalid_argument("program contains unparsed code");
  ExecState s;
  s.program = std::move(program);
  s.env = std::move(env);
  if (!s.program->bodies.empty() && !s.program->bodies[0].empty()) {
    s.control.push_back(Frame{&s.program->bodies[0], 0, 0, 0});
  }
  return s;
}

ExecState start(const SyntaxNode& program, Environment env) {
  return start(std::make_shared<const SyntaxNode>(program), std::move(env));
}

std::pair<ExecState, TraceEvent> step(const ExecState& state) {
  if (state.finished()) throw RuntimeError(RuntimeErrc::AtEnd, state.step_index, {}, "program has finished");
  ExecState next = state;
  TraceEvent ev;
  ev.step = state.step_index;
  ev.control_before = state.control;
  Stepper(next).execute(ev);
  ++next.step_index;
  return {std::move(next), std::move(ev)};
}

ExecState step_back(const ExecState& state, const std::vector<TraceEvent>& trace) {
  if (state.step_index == 0) throw RuntimeError(RuntimeErrc::AtStart, 0, {}, "already at the first step");
  if (state.step_index > trace.size()) throw std::invalid_argument("trace is shorter than the state's history");
  const TraceEvent& ev = trace[state.step_index - 1];
  ExecState prev = state;
  for (auto it = ev.deltas.rbegin(); it != ev.deltas.rend(); ++it) {
    if (it->old) {
      prev.env[it->var] = *it->old;
    } else {
      prev.env.erase(it->var);
    }
  }
  if (ev.effect) prev.output.pop_back();
  prev.control = ev.control_before;
  --prev.step_index;
  return prev;
}

RunResult run(ExecState state, Limits limits) {
  RunResult r{std::move(state), {}, std::nullopt};
  while (!r.state.finished()) {
    if (r.trace.size() >= limits.max_steps) {
      const SyntaxNode* at = r.state.current();
      r.error = RuntimeError(RuntimeErrc::StepLimitExceeded, r.state.step_index, at ? at->span : Span{},
                             "gave up after " + std::to_string(limits.max_steps) + " steps");
      break;
    }
    try {
      auto [next, ev] = step(r.state);
      r.state = std::move(next);
      r.trace.push_back(std::move(ev));
    } catch (const RuntimeError& e) {
      r.error = e;
      break;
    }
  }
  return r;
}

RunResult run(const SyntaxNode& program, Limits limits) { return run(start(program), limits); }

Timeline::Timeline(RunResult result) : trace_(std::move(result.trace)), error_(std::move(result.error)) {
  const std::size_t n = trace_.size();
  snapshots_.resize(n / kSnapshotInterval + 1);
  ExecState s = std::move(result.state);
  for (std::size_t k = n;; --k) {
    if (k % kSnapshotInterval == 0) snapshots_[k / kSnapshotInterval] = s;
    if (k == 0) break;
    s = step_back(s, trace_);
  }
}

ExecState Timeline::at(std::size_t k) const {
  if (k > trace_.size()) throw RuntimeError(RuntimeErrc::AtEnd, k, {}, "beyond the end of the timeline");
  ExecState s = snapshots_[k / kSnapshotInterval];
  while (s.step_index < k) s = step(s).first;
  return s;
}

Environment replay_deltas(const std::vector<TraceEvent>& trace, Environment initial) {
  for (const auto& ev : trace) {
    for (const auto& d : ev.deltas) initial[d.var] = d.value;
  }
  return initial;
}

Value evaluate(const SyntaxNode& expr, const Environment& env) {
  if (count_error_nodes(expr) > 0) throw std::invalid_argument("expression contains unparsed code");
  return Evaluator(env, 0).eval(expr);
}

FragmentResult run_fragment(const Palette& palette, const Island& island, const Environment& env,
                            Limits limits) {
  if (island.stack.empty()) throw std::invalid_argument("empty island");
  FragmentResult out;
  const auto& def = palette.at(island.stack.front().definition);
  if (def.produces != ConnectorShape::Command) {
    out.value = evaluate(block_to_syntax(palette, island.stack.front()), env);
    out.env = env;
    return out;
  }
  std::vector<SyntaxNode> stmts;
  for (const auto& b : island.stack) stmts.push_back(block_to_syntax(palette, b));
  RunResult r = run(start(build::program(std::move(stmts)), env), limits);
  if (r.error) throw *r.error;
  out.effects = std::move(r.state.output);
  out.env = std::move(r.state.env);
  return out;
}

namespace {

nlohmann::json value_json(const Value& v) {
  if (const auto* d = std::get_if<double>(&v)) return *d;
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  return std::get<bool>(v);
}

}  // namespace

std::string trace_jsonl(const std::vector<TraceEvent>& trace) {
  using nlohmann::json;
  std::string out;
  for (const auto& ev : trace) {
    json j;
    j["step"] = ev.step;
    j["node"] = json{{"kind", to_string(ev.kind)}, {"span", json::array({ev.span.begin, ev.span.end})}};
    j["part"] = to_string(ev.part);
    json deltas = json::array();
    for (const auto& d : ev.deltas) {
      deltas.push_back(json{{"var", d.var}, {"old", d.old ? value_json(*d.old) : json(nullptr)}, {"new", value_json(d.value)}});
    }
    j["deltas"] = std::move(deltas);
    if (ev.effect) {
      const Effect& e = *ev.effect;
      switch (e.kind) {
        case Effect::Kind::Say: j["effect"] = json{{"kind", "Say"}, {"text", e.text}}; break;
        case Effect::Kind::Note: j["effect"] = json{{"kind", "Note"}, {"pitch", e.a}, {"beats", e.b}}; break;
        case Effect::Kind::Move: j["effect"] = json{{"kind", "Move"}, {"distance", e.a}}; break;
      }
    } else {
      j["effect"] = nullptr;
    }
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace notchkit
