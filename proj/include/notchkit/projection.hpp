#pragma once

#include <stdexcept>
#include <string_view>
#include <vector>

#include "notchkit/palette.hpp"
#include "notchkit/syntax.hpp"
#include "notchkit/workspace.hpp"

namespace notchkit {

/// A projected blocks view is an ordinary workspace whose blocks carry
/// provenance back into the syntax tree they came from.
using BlockTree = Workspace;

class ModeSwitchRefused : public std::runtime_error {
 public:
  explicit ModeSwitchRefused(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

/// Static shape of an expression: literals have their literal shape,
/// comparisons and logic are Boolean, arithmetic and value calls are
/// Number, variables and error nodes are Any.
ConnectorShape static_shape(const SyntaxNode& expr);

/// `var ID = 0; ID < EXPR; ID++` with the same ID throughout.
bool is_canonical_for(const SyntaxNode& node);

/// Projects a parsed program. The statements become one island at (0, 0).
/// A switch-blocked parse can only be recognized from its diagnostics, so
/// refusing it is switch_to_blocks' job.
BlockTree blockify(const Palette& palette, const SyntaxNode& tree, ChunkLevel level);

/// Text for a blocks view. Command islands are emitted one after another
/// in island order; loose value islands have no textual form.
std::string textify(const Palette& palette, const BlockTree& blocks);

/// The statement or expression a single block (and what hangs off it)
/// stands for.
SyntaxNode block_to_syntax(const Palette& palette, const BlockInstance& block);

BlockTree switch_to_blocks(const Palette& palette, std::string_view text, ChunkLevel level);

/// Re-renders every for block at `level`. Loops that do not follow the
/// canonical pattern stay at the Clauses rendering.
BlockTree set_chunk_level(const Palette& palette, const BlockTree& blocks, ChunkLevel level);

}  // namespace notchkit
