#include "notchkit/workspace.hpp"

#include <algorithm>
#include <set>

namespace notchkit {

std::string_view to_string(DropTarget::Site site) {
  switch (site) {
    case DropTarget::Site::ValueSocket: return "ValueSocket";
    case DropTarget::Site::ContainerSlot: return "ContainerSlot";
    case DropTarget::Site::BelowInStack: return "BelowInStack";
    case DropTarget::Site::AboveInStack: return "AboveInStack";
  }
  return "?";
}

std::string_view to_string(EditErrc code) {
  switch (code) {
    case EditErrc::ShapeMismatch: return "ShapeMismatch";
    case EditErrc::WouldCreateCycle: return "WouldCreateCycle";
    case EditErrc::UnknownTarget: return "UnknownTarget";
    case EditErrc::UnknownInstance: return "UnknownInstance";
    case EditErrc::ValueViolatesShape: return "ValueViolatesShape";
    case EditErrc::NotInDropdown: return "NotInDropdown";
    case EditErrc::SocketOccupied: return "SocketOccupied";
    case EditErrc::SchemaError: return "SchemaError";
    case EditErrc::PaletteVersionMismatch: return "PaletteVersionMismatch";
  }
  return "?";
}

EditError::EditError(EditErrc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

namespace {

template <class Stack, class F>
void walk(Stack& stack, F&& f) {
  for (auto& b : stack) {
    f(b);
    for (auto& s : b.sockets) walk(s.blocks, f);
  }
}

/// Where a block sits: `container[index]`, with `parent`/`socket` set when
/// the container belongs to a socket rather than an island.
struct Location {
  std::vector<BlockInstance>* container = nullptr;
  std::size_t index = 0;
  BlockInstance* parent = nullptr;
  std::size_t socket = 0;
  std::size_t island = 0;
};

bool locate_in(std::vector<BlockInstance>& stack, InstanceId id, Location& loc) {
  for (std::size_t i = 0; i < stack.size(); ++i) {
    if (stack[i].id == id) {
      loc.container = &stack;
      loc.index = i;
      return true;
    }
    auto& b = stack[i];
    for (std::size_t s = 0; s < b.sockets.size(); ++s) {
      if (locate_in(b.sockets[s].blocks, id, loc)) {
        if (loc.parent == nullptr && loc.container == &b.sockets[s].blocks) {
          loc.parent = &b;
          loc.socket = s;
        }
        return true;
      }
    }
  }
  return false;
}

std::optional<Location> locate(Workspace& w, InstanceId id) {
  for (std::size_t i = 0; i < w.islands.size(); ++i) {
    Location loc;
    if (locate_in(w.islands[i].stack, id, loc)) {
      loc.island = i;
      return loc;
    }
  }
  return std::nullopt;
}

const BlockDefinition& definition_of(const Palette& palette, const BlockInstance& b) {
  const auto* def = palette.find(b.definition);
  if (def == nullptr) {
    throw EditError(EditErrc::SchemaError, "unknown definition '" + b.definition + "'");
  }
  return *def;
}

Position offset(Position p, Position d) { return Position{p.x + d.x, p.y + d.y}; }

}  // namespace

Workspace empty_workspace(const Palette& palette) {
  Workspace w;
  w.palette_version = palette.version();
  return w;
}

const BlockInstance* find_block(const Workspace& w, InstanceId id) {
  const BlockInstance* found = nullptr;
  for (const auto& island : w.islands) {
    walk(island.stack, [&](const BlockInstance& b) {
      if (b.id == id) found = &b;
    });
    if (found) break;
  }
  return found;
}

std::optional<std::size_t> island_of_root(const Workspace& w, InstanceId id) {
  for (std::size_t i = 0; i < w.islands.size(); ++i) {
    if (!w.islands[i].stack.empty() && w.islands[i].stack.front().id == id) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> island_containing(const Workspace& w, InstanceId id) {
  for (std::size_t i = 0; i < w.islands.size(); ++i) {
    bool hit = false;
    walk(w.islands[i].stack, [&](const BlockInstance& b) { hit = hit || b.id == id; });
    if (hit) return i;
  }
  return std::nullopt;
}

std::size_t block_count(const Workspace& w) {
  std::size_t n = 0;
  for (const auto& island : w.islands) walk(island.stack, [&](const BlockInstance&) { ++n; });
  return n;
}

std::vector<InstanceId> all_instance_ids(const Workspace& w) {
  std::vector<InstanceId> ids;
  for (const auto& island : w.islands) {
    walk(island.stack, [&](const BlockInstance& b) { ids.push_back(b.id); });
  }
  return ids;
}

InstanceId next_instance_id(const Workspace& w) {
  InstanceId next = 1;
  for (auto id : all_instance_ids(w)) next = std::max(next, id + 1);
  return next;
}

std::pair<Workspace, InstanceId> instantiate(const Palette& palette, const Workspace& w,
                                             std::string_view definition_id, Position position) {
  const auto* def = palette.find(definition_id);
  if (def == nullptr) {
    throw EditError(EditErrc::UnknownInstance, "no definition '" + std::string(definition_id) + "'");
  }
  BlockInstance b;
  b.id = next_instance_id(w);
  b.definition = def->id;
  b.sockets.resize(def->sockets.size());
  Workspace out = w;
  out.islands.push_back(Island{position, {b}});
  return {std::move(out), b.id};
}

std::vector<DropTarget> drop_targets(const Palette& palette, const Workspace& w,
                                     InstanceId dragged) {
  const auto home = island_of_root(w, dragged);
  if (!home) {
    throw EditError(EditErrc::UnknownInstance, "block " + std::to_string(dragged) + " is not an island root");
  }
  const ConnectorShape produced = definition_of(palette, w.islands[*home].stack.front()).produces;
  const bool is_command = produced == ConnectorShape::Command;

  std::vector<DropTarget> out;
  for (std::size_t i = 0; i < w.islands.size(); ++i) {
    if (i == *home) continue;
    const auto& stack = w.islands[i].stack;
    if (is_command && definition_of(palette, stack.front()).produces == ConnectorShape::Command) {
      out.push_back({stack.front().id, DropTarget::Site::AboveInStack, 0});
    }
    walk(stack, [&](const BlockInstance& b) {
      const auto& def = definition_of(palette, b);
      if (is_command && def.produces == ConnectorShape::Command) {
        out.push_back({b.id, DropTarget::Site::BelowInStack, 0});
      }
      for (std::size_t s = 0; s < def.sockets.size(); ++s) {
        const auto& sock = def.sockets[s];
        if (sock.is_slot()) {
          if (compatible(produced, ConnectorShape::ContainerSlot)) {
            out.push_back({b.id, DropTarget::Site::ContainerSlot, s});
          }
        } else if (sock.hosts_blocks() && compatible(produced, sock.accepts)) {
          out.push_back({b.id, DropTarget::Site::ValueSocket, s});
        }
      }
    });
  }
  return out;
}

Workspace attach(const Palette& palette, const Workspace& w, InstanceId dragged,
                 const DropTarget& target) {
  const auto home = island_of_root(w, dragged);
  if (!home) {
    throw EditError(EditErrc::UnknownInstance, "block " + std::to_string(dragged) + " is not an island root");
  }
  const auto host_island = island_containing(w, target.host);
  if (!host_island) {
    throw EditError(EditErrc::UnknownTarget, "no block " + std::to_string(target.host));
  }
  if (*host_island == *home) {
    throw EditError(EditErrc::WouldCreateCycle, "target lies inside the dragged island");
  }
  const ConnectorShape produced = definition_of(palette, w.islands[*home].stack.front()).produces;
  const auto& host_def = definition_of(palette, *find_block(w, target.host));
  using Site = DropTarget::Site;
  switch (target.site) {
    case Site::ValueSocket:
      if (target.index >= host_def.sockets.size() || !host_def.sockets[target.index].hosts_blocks()) {
        throw EditError(EditErrc::UnknownTarget, "not a value socket");
      }
      if (!compatible(produced, host_def.sockets[target.index].accepts)) {
        throw EditError(EditErrc::ShapeMismatch,
                        std::string(to_string(produced)) + " does not fit " +
                            std::string(to_string(host_def.sockets[target.index].accepts)));
      }
      break;
    case Site::ContainerSlot:
      if (target.index >= host_def.sockets.size() || !host_def.sockets[target.index].is_slot()) {
        throw EditError(EditErrc::UnknownTarget, "not a container slot");
      }
      if (!compatible(produced, ConnectorShape::ContainerSlot)) {
        throw EditError(EditErrc::ShapeMismatch, "only commands fit a container slot");
      }
      break;
    case Site::BelowInStack:
    case Site::AboveInStack:
      if (host_def.produces != ConnectorShape::Command || target.index != 0) {
        throw EditError(EditErrc::UnknownTarget, "not a stack position");
      }
      if (target.site == Site::AboveInStack && !island_of_root(w, target.host)) {
        throw EditError(EditErrc::UnknownTarget, "can only stack above an island's top block");
      }
      if (!compatible(produced, ConnectorShape::Command)) {
        throw EditError(EditErrc::ShapeMismatch, "only commands stack");
      }
      break;
  }

  Workspace out = w;
  std::vector<BlockInstance> moving = std::move(out.islands[*home].stack);
  out.islands.erase(out.islands.begin() + static_cast<std::ptrdiff_t>(*home));
  auto loc = locate(out, target.host);
  const Position host_pos = out.islands[loc->island].position;
  BlockInstance& host = (*loc->container)[loc->index];

  switch (target.site) {
    case Site::ValueSocket: {
      SocketFill& fill = host.sockets[target.index];
      if (!fill.blocks.empty()) {
        out.islands.push_back(Island{offset(host_pos, kEjectOffset), std::move(fill.blocks)});
      }
      fill = SocketFill{};
      fill.blocks.push_back(std::move(moving.front()));
      break;
    }
    case Site::ContainerSlot: {
      auto& slot = host.sockets[target.index].blocks;
      slot.insert(slot.begin(), std::make_move_iterator(moving.begin()),
                  std::make_move_iterator(moving.end()));
      break;
    }
    case Site::BelowInStack: {
      auto& c = *loc->container;
      c.insert(c.begin() + static_cast<std::ptrdiff_t>(loc->index + 1),
               std::make_move_iterator(moving.begin()), std::make_move_iterator(moving.end()));
      break;
    }
    case Site::AboveInStack: {
      auto& c = *loc->container;
      c.insert(c.begin(), std::make_move_iterator(moving.begin()),
               std::make_move_iterator(moving.end()));
      break;
    }
  }
  return out;
}

Workspace detach(const Workspace& w, InstanceId id, Position position) {
  Workspace out = w;
  auto loc = locate(out, id);
  if (!loc) throw EditError(EditErrc::UnknownInstance, "no block " + std::to_string(id));
  if (loc->parent == nullptr && loc->index == 0) return w;
  auto& c = *loc->container;
  std::vector<BlockInstance> taken(std::make_move_iterator(c.begin() + static_cast<std::ptrdiff_t>(loc->index)),
                                   std::make_move_iterator(c.end()));
  c.erase(c.begin() + static_cast<std::ptrdiff_t>(loc->index), c.end());
  out.islands.push_back(Island{position, std::move(taken)});
  return out;
}

Workspace set_socket_value(const Palette& palette, const Workspace& w, InstanceId id,
                           std::size_t socket, const Literal& value) {
  Workspace out = w;
  auto loc = locate(out, id);
  if (!loc) throw EditError(EditErrc::UnknownInstance, "no block " + std::to_string(id));
  BlockInstance& b = (*loc->container)[loc->index];
  const auto& def = definition_of(palette, b);
  if (socket >= def.sockets.size() || def.sockets[socket].is_slot()) {
    throw EditError(EditErrc::UnknownTarget, "block has no value socket " + std::to_string(socket));
  }
  const auto& sdef = def.sockets[socket];
  if (!b.sockets[socket].blocks.empty()) {
    throw EditError(EditErrc::SocketOccupied, "socket holds a block; detach it first");
  }
  if (!sdef.accepts_literal(value)) {
    throw EditError(EditErrc::ValueViolatesShape,
                    "'" + display(value) + "' does not fit " +
                        (sdef.identifier ? std::string("a variable name") : std::string(to_string(sdef.accepts))));
  }
  if (!sdef.dropdown.empty() &&
      std::none_of(sdef.dropdown.begin(), sdef.dropdown.end(),
                   [&](const Literal& o) { return literal_equal(o, value); })) {
    throw EditError(EditErrc::NotInDropdown, "'" + display(value) + "' is not one of the choices");
  }
  SocketFill& fill = b.sockets[socket];
  fill.literal = value;
  fill.origin.reset();
  return out;
}

Workspace move_island(const Workspace& w, InstanceId root, Position position) {
  const auto i = island_of_root(w, root);
  if (!i) throw EditError(EditErrc::UnknownInstance, "block " + std::to_string(root) + " is not an island root");
  Workspace out = w;
  out.islands[*i].position = position;
  return out;
}

std::vector<std::string> check_invariants(const Palette& palette, const Workspace& w) {
  std::vector<std::string> problems;
  if (w.palette_version != palette.version()) {
    problems.push_back("palette version '" + w.palette_version + "' does not match '" + palette.version() + "'");
  }
  std::set<InstanceId> seen;
  auto block_problems = [&](auto&& self, const BlockInstance& b) -> void {
    const std::string who = "block " + std::to_string(b.id);
    if (b.id == 0) problems.push_back(who + ": id 0 is reserved");
    if (!seen.insert(b.id).second) problems.push_back(who + ": duplicate instance id");
    const auto* def = palette.find(b.definition);
    if (def == nullptr) {
      problems.push_back(who + ": unknown definition '" + b.definition + "'");
      return;
    }
    if (b.sockets.size() != def->sockets.size()) {
      problems.push_back(who + ": has " + std::to_string(b.sockets.size()) + " sockets, definition has " +
                         std::to_string(def->sockets.size()));
      return;
    }
    for (std::size_t s = 0; s < def->sockets.size(); ++s) {
      const auto& sdef = def->sockets[s];
      const auto& fill = b.sockets[s];
      const std::string where = who + " socket " + std::to_string(s);
      if (fill.literal && !fill.blocks.empty()) problems.push_back(where + ": holds both a literal and a block");
      if (sdef.is_slot()) {
        if (fill.literal) problems.push_back(where + ": container slot holds a literal");
      } else {
        if (fill.literal && !sdef.accepts_literal(*fill.literal)) {
          problems.push_back(where + ": literal '" + display(*fill.literal) + "' violates its shape");
        }
        if (!sdef.hosts_blocks() && !fill.blocks.empty()) problems.push_back(where + ": field holds a block");
        if (fill.blocks.size() > 1) problems.push_back(where + ": value socket holds several blocks");
      }
      for (const auto& child : fill.blocks) {
        const auto* cdef = palette.find(child.definition);
        if (cdef != nullptr && !compatible(cdef->produces, sdef.accepts)) {
          problems.push_back(where + ": attached " + std::string(to_string(cdef->produces)) +
                             " block does not fit " + std::string(to_string(sdef.accepts)));
        }
        self(self, child);
      }
    }
  };
  for (std::size_t i = 0; i < w.islands.size(); ++i) {
    const auto& stack = w.islands[i].stack;
    if (stack.empty()) {
      problems.push_back("island " + std::to_string(i) + " is empty");
      continue;
    }
    for (const auto& b : stack) {
      if (stack.size() > 1) {
        const auto* def = palette.find(b.definition);
        if (def != nullptr && def->produces != ConnectorShape::Command) {
          problems.push_back("island " + std::to_string(i) + ": value block inside a command stack");
        }
      }
      block_problems(block_problems, b);
    }
  }
  return problems;
}

namespace {

bool is_literal_block(const BlockDefinition& def) {
  return def.node_kind == NodeKind::ExprNumber || def.node_kind == NodeKind::ExprString ||
         def.node_kind == NodeKind::ExprBool;
}

class StructuralComparer {
 public:
  StructuralComparer(const Palette& p, StructuralOptions o) : palette_(p), options_(o) {}

  bool stacks(const std::vector<BlockInstance>& a, const std::vector<BlockInstance>& b) const {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!blocks(a[i], b[i])) return false;
    }
    return true;
  }

  bool blocks(const BlockInstance& a, const BlockInstance& b) const {
    if (options_.compare_ids && a.id != b.id) return false;
    if (a.definition != b.definition || a.sockets.size() != b.sockets.size()) return false;
    const auto* def = palette_.find(a.definition);
    for (std::size_t s = 0; s < a.sockets.size(); ++s) {
      const SocketDefinition* sdef = def && s < def->sockets.size() ? &def->sockets[s] : nullptr;
      if (!fills(a.sockets[s], b.sockets[s], sdef)) return false;
    }
    return true;
  }

 private:
  std::optional<Literal> as_literal(const SocketFill& f, const SocketDefinition* sdef) const {
    if (f.literal) return f.literal;
    if (!options_.normalize_literals || sdef == nullptr || sdef->is_slot()) return std::nullopt;
    if (f.blocks.empty()) return sdef->default_value;
    const auto& b = f.blocks.front();
    const auto* def = palette_.find(b.definition);
    if (def == nullptr || !is_literal_block(*def)) return std::nullopt;
    return b.sockets.front().literal ? b.sockets.front().literal : def->sockets.front().default_value;
  }

  bool fills(const SocketFill& a, const SocketFill& b, const SocketDefinition* sdef) const {
    const auto la = as_literal(a, sdef);
    const auto lb = as_literal(b, sdef);
    if (la || lb) return la && lb && literal_equal(*la, *lb);
    return stacks(a.blocks, b.blocks);
  }

  const Palette& palette_;
  StructuralOptions options_;
};

}  // namespace

bool structurally_equal(const Palette& palette, const Workspace& a, const Workspace& b,
                        StructuralOptions options) {
  if (a.palette_version != b.palette_version || a.islands.size() != b.islands.size()) return false;
  StructuralComparer cmp(palette, options);
  for (std::size_t i = 0; i < a.islands.size(); ++i) {
    if (options.compare_positions && !(a.islands[i].position == b.islands[i].position)) return false;
    if (!cmp.stacks(a.islands[i].stack, b.islands[i].stack)) return false;
  }
  return true;
}

}  // namespace notchkit
