#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "notchkit/palette.hpp"
#include "notchkit/syntax.hpp"
#include "notchkit/workspace.hpp"

namespace notchkit {

/// Runtime values share the literal representation.
using Value = Literal;
using Environment = std::map<std::string, Value, std::less<>>;

struct Effect {
  enum class Kind { Say, Note, Move };
  Kind kind = Kind::Say;
  std::string text;   ///< Say
  double a = 0;       ///< Note pitch, Move distance
  double b = 0;       ///< Note beats

  friend bool operator==(const Effect&, const Effect&) = default;
};

std::string describe(const Effect& e);

/// Position inside one statement list. `phase` and `remaining` describe
/// progress through the statement at `index` (loop state).
struct Frame {
  const std::vector<SyntaxNode>* body = nullptr;
  std::size_t index = 0;
  int phase = 0;
  double remaining = 0;

  friend bool operator==(const Frame&, const Frame&) = default;
};

struct ExecState {
  std::shared_ptr<const SyntaxNode> program;
  Environment env;
  std::vector<Frame> control;
  std::size_t step_index = 0;
  std::vector<Effect> output;

  bool finished() const { return control.empty(); }
  const SyntaxNode* current() const;
};

/// Same observable state: environment, control, step index and output.
bool same_state(const ExecState& a, const ExecState& b);

struct EnvDelta {
  std::string var;
  std::optional<Value> old;  ///< nullopt when the step declared the variable
  Value value;

  friend bool operator==(const EnvDelta&, const EnvDelta&) = default;
};

/// What a step did at its statement.
enum class StepPart { Statement, Condition, Count, Init, Test, Update };
std::string_view to_string(StepPart part);

struct TraceEvent {
  std::size_t step = 0;  ///< index of this event, 0-based
  const SyntaxNode* node = nullptr;
  NodeKind kind = NodeKind::Program;
  Span span;
  StepPart part = StepPart::Statement;
  std::vector<EnvDelta> deltas;
  std::optional<Effect> effect;
  std::vector<Frame> control_before;
};

enum class RuntimeErrc { UndefinedVariable, TypeError, DivByZero, StepLimitExceeded, AtStart, AtEnd };
std::string_view to_string(RuntimeErrc code);

class RuntimeError : public std::runtime_error {
 public:
  RuntimeError(RuntimeErrc code, std::size_t step, Span span, const std::string& what);
  RuntimeErrc code() const { return code_; }
  std::size_t step() const { return step_; }
  Span span() const { return span_; }

 private:
  RuntimeErrc code_;
  std::size_t step_;
  Span span_;
};

inline constexpr std::size_t kDefaultMaxSteps = 100000;
inline constexpr std::size_t kSnapshotInterval = 256;

struct Limits {
  std::size_t max_steps = kDefaultMaxSteps;
};

/// Initial state. Throws std::invalid_argument when the program holds
/// error nodes (they have no meaning to run).
ExecState start(std::shared_ptr<const SyntaxNode> program, Environment env = {});
ExecState start(const SyntaxNode& program, Environment env = {});

std::pair<ExecState, TraceEvent> step(const ExecState& state);
ExecState step_back(const ExecState& state, const std::vector<TraceEvent>& trace);

struct RunResult {
  ExecState state;
  std::vector<TraceEvent> trace;
  std::optional<RuntimeError> error;
};

RunResult run(const SyntaxNode& program, Limits limits = {});
RunResult run(ExecState state, Limits limits);

/// Random access over one execution. Keeps a full snapshot every
/// kSnapshotInterval steps and replays from the nearest one.
class Timeline {
 public:
  explicit Timeline(RunResult result);

  std::size_t length() const { return trace_.size(); }
  const std::vector<TraceEvent>& trace() const { return trace_; }
  const std::optional<RuntimeError>& error() const { return error_; }
  ExecState at(std::size_t step) const;

 private:
  std::vector<ExecState> snapshots_;
  std::vector<TraceEvent> trace_;
  std::optional<RuntimeError> error_;
};

/// Folds every delta of `trace` over `initial`.
Environment replay_deltas(const std::vector<TraceEvent>& trace, Environment initial = {});

struct FragmentResult {
  std::optional<Value> value;  ///< expression islands
  std::vector<Effect> effects;  ///< command islands
  Environment env;              ///< the fragment's private copy afterwards
};

/// Runs one island against a copy of `env`; the caller's environment is
/// never touched.
FragmentResult run_fragment(const Palette& palette, const Island& island, const Environment& env,
                            Limits limits = {});

Value evaluate(const SyntaxNode& expr, const Environment& env);

/// One JSON object per line: step, node {kind, span}, part, deltas, effect.
std::string trace_jsonl(const std::vector<TraceEvent>& trace);

}  // namespace notchkit
