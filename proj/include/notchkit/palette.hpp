#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "notchkit/syntax.hpp"

namespace notchkit {

/// Connector shapes. Commands stack vertically; values plug into
/// matching holes; container slots hold command stacks.
enum class ConnectorShape { Command, Number, String, Boolean, Any, ContainerSlot };

inline constexpr ConnectorShape kAllShapes[] = {
    ConnectorShape::Command, ConnectorShape::Number, ConnectorShape::String,
    ConnectorShape::Boolean, ConnectorShape::Any,    ConnectorShape::ContainerSlot,
};

std::string_view to_string(ConnectorShape shape);
std::optional<ConnectorShape> parse_shape(std::string_view name);
bool is_value_shape(ConnectorShape shape);

/// Whether a block producing `produced` may be attached where `accepts`
/// is expected.
bool compatible(ConnectorShape produced, ConnectorShape accepts);

/// Rendering granularity for blocks that have more than one reading.
enum class ChunkLevel { Collapsed, Clauses };

std::string_view to_string(ChunkLevel level);
std::optional<ChunkLevel> parse_chunk_level(std::string_view name);

/// A literal operand: number, text or truth value.
using Literal = std::variant<double, std::string, bool>;

ConnectorShape literal_shape(const Literal& value);
/// Numbers compare by value; otherwise exact.
bool literal_equal(const Literal& a, const Literal& b);
/// Display form ("60", "hi", "true").
std::string display(const Literal& value);

struct SocketDefinition {
  ConnectorShape accepts = ConnectorShape::Any;
  std::optional<Literal> default_value;
  std::vector<Literal> dropdown;
  /// Literal-only picker that is part of the block's own reading (not a chunk).
  bool field = false;
  /// Holds a variable name rather than a value.
  bool identifier = false;
  std::string label_before;
  std::string label_after;

  bool is_slot() const { return accepts == ConnectorShape::ContainerSlot; }
  /// Value socket that accepts attached blocks.
  bool hosts_blocks() const { return !field && !identifier && !is_slot(); }
  /// Counted as one chunk when filled.
  bool exposed() const { return !field && !is_slot(); }
  /// Whether a literal may be stored here (shape, identifier rule and dropdown ignored).
  bool accepts_literal(const Literal& value) const;
};

struct LabelSegment {
  /// Plain words, or empty when this segment is a socket.
  std::string words;
  std::optional<std::size_t> socket;
};

struct BlockDefinition {
  std::string id;
  ConnectorShape produces = ConnectorShape::Command;
  std::string category;
  NodeKind node_kind = NodeKind::CallStmt;
  /// Distinguishes definitions sharing a node kind: operator, callee or "else".
  std::string match;
  std::optional<ChunkLevel> chunk_level;
  std::vector<LabelSegment> label;
  std::vector<SocketDefinition> sockets;

  /// Label words in reading order.
  std::vector<std::string> words() const;
  std::string first_word() const;
  /// Human-readable label with sockets shown as <shape>.
  std::string label_text() const;
};

struct Category {
  std::string name;
  std::vector<BlockDefinition> blocks;
};

enum class PaletteErrc {
  Malformed,
  DuplicateBlockId,
  UncoveredNodeKind,
  DefaultViolatesShape,
  DropdownViolatesShape,
  UnknownCategory,
};

std::string_view to_string(PaletteErrc code);

class PaletteError : public std::runtime_error {
 public:
  PaletteError(PaletteErrc code, const std::string& what);
  PaletteErrc code() const { return code_; }

 private:
  PaletteErrc code_;
};

inline constexpr std::string_view kErrorStatementBlock = "error_statement";
inline constexpr std::string_view kErrorExpressionBlock = "error_expression";

/// The full, persistent catalog of block definitions, in display order.
class Palette {
 public:
  Palette(std::string version, std::vector<Category> categories);

  const std::string& version() const { return version_; }
  const std::vector<Category>& categories() const { return categories_; }

  /// Every palette definition in category order, then definition order.
  std::vector<const BlockDefinition*> all() const;

  /// Looks up a palette or built-in (error block) definition.
  const BlockDefinition* find(std::string_view id) const;
  const BlockDefinition& at(std::string_view id) const;

  /// The definition that renders a node variant, or nullptr.
  const BlockDefinition* for_node(NodeKind kind, std::string_view match,
                                  std::optional<ChunkLevel> level = std::nullopt) const;

  static const BlockDefinition& error_statement();
  static const BlockDefinition& error_expression();

 private:
  std::string version_;
  std::vector<Category> categories_;
};

/// Parses and validates a palette document (JSON text).
Palette load_palette(std::string_view document);

/// Definitions of one category in their stable display order.
const std::vector<BlockDefinition>& definitions_for(const Palette& palette,
                                                    std::string_view category);

/// The shipped palette document and its loaded form.
std::string_view default_palette_document();
const Palette& default_palette();

}  // namespace notchkit
