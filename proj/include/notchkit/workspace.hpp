#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "notchkit/palette.hpp"
#include "notchkit/syntax.hpp"

namespace notchkit {

using InstanceId = std::uint64_t;

struct BlockInstance;

/// Contents of one socket. A value socket holds a literal, one attached
/// block, or nothing (and then shows its definition default). A container
/// slot holds a command stack in `blocks`.
struct SocketFill {
  std::optional<Literal> literal;
  std::vector<BlockInstance> blocks;
  /// Source node a literal was projected from, if any.
  std::shared_ptr<const SyntaxNode> origin;

  bool empty() const { return !literal && blocks.empty(); }
};

struct BlockInstance {
  InstanceId id = 0;
  std::string definition;
  std::vector<SocketFill> sockets;
  /// Source node this block was projected from, if any.
  std::shared_ptr<const SyntaxNode> origin;
};

struct Position {
  int x = 0;
  int y = 0;
  friend bool operator==(const Position&, const Position&) = default;
};

/// A disconnected fragment: a command stack, or a single value block.
struct Island {
  Position position;
  std::vector<BlockInstance> stack;
};

struct Workspace {
  std::string palette_version;
  std::vector<Island> islands;
  /// Program node the islands were projected from, if any.
  std::shared_ptr<const SyntaxNode> program_origin;
};

struct DropTarget {
  enum class Site { ValueSocket, ContainerSlot, BelowInStack, AboveInStack };
  InstanceId host = 0;
  Site site = Site::ValueSocket;
  /// Socket index for ValueSocket / ContainerSlot; always 0 for stack positions.
  std::size_t index = 0;

  friend bool operator==(const DropTarget&, const DropTarget&) = default;
  friend bool operator<(const DropTarget& a, const DropTarget& b) {
    return std::tie(a.host, a.site, a.index) < std::tie(b.host, b.site, b.index);
  }
};

std::string_view to_string(DropTarget::Site site);

enum class EditErrc {
  ShapeMismatch,
  WouldCreateCycle,
  UnknownTarget,
  UnknownInstance,
  ValueViolatesShape,
  NotInDropdown,
  SocketOccupied,
  SchemaError,
  PaletteVersionMismatch,
};

std::string_view to_string(EditErrc code);

class EditError : public std::runtime_error {
 public:
  EditError(EditErrc code, const std::string& what);
  EditErrc code() const { return code_; }

 private:
  EditErrc code_;
};

/// Offset from the host island at which an ejected socket occupant lands.
inline constexpr Position kEjectOffset{24, 24};

Workspace empty_workspace(const Palette& palette);

const BlockInstance* find_block(const Workspace& w, InstanceId id);
/// Index of the island whose stack starts with `id`, if any.
std::optional<std::size_t> island_of_root(const Workspace& w, InstanceId id);
/// Index of the island that contains `id` anywhere, if any.
std::optional<std::size_t> island_containing(const Workspace& w, InstanceId id);
std::size_t block_count(const Workspace& w);
std::vector<InstanceId> all_instance_ids(const Workspace& w);
InstanceId next_instance_id(const Workspace& w);

/// New block from a palette definition, placed as its own island. Sockets
/// start empty and display their defaults.
std::pair<Workspace, InstanceId> instantiate(const Palette& palette, const Workspace& w,
                                             std::string_view definition_id, Position position);

/// Every legal site for the island rooted at `dragged`: shape compatible
/// and outside the dragged island itself.
std::vector<DropTarget> drop_targets(const Palette& palette, const Workspace& w,
                                     InstanceId dragged);

/// Snaps the island rooted at `dragged` onto `target`. A block already in
/// a target value socket is ejected to a new island next to the host.
Workspace attach(const Palette& palette, const Workspace& w, InstanceId dragged,
                 const DropTarget& target);

/// Pulls `id` (and, in a stack, everything below it) out into a new island.
/// Detaching an island root is the identity.
Workspace detach(const Workspace& w, InstanceId id, Position position);

Workspace set_socket_value(const Palette& palette, const Workspace& w, InstanceId id,
                           std::size_t socket, const Literal& value);

Workspace move_island(const Workspace& w, InstanceId root, Position position);

/// Human-readable invariant violations; empty when the workspace is sound.
std::vector<std::string> check_invariants(const Palette& palette, const Workspace& w);

struct StructuralOptions {
  bool compare_positions = true;
  bool compare_ids = true;
  /// Treat empty sockets as their defaults and attached literal blocks as
  /// literals, which is how text represents them.
  bool normalize_literals = false;
};

bool structurally_equal(const Palette& palette, const Workspace& a, const Workspace& b,
                        StructuralOptions options = {});

inline constexpr int kWorkspaceSchemaVersion = 1;

/// Workspace document (JSON text).
std::string save_workspace(const Workspace& w, bool with_provenance = false);
Workspace load_workspace(const Palette& palette, std::string_view document);

}  // namespace notchkit
