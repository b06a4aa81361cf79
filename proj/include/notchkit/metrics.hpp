#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "notchkit/palette.hpp"
#include "notchkit/workspace.hpp"

namespace notchkit {

/// Working memory holds about seven chunks.
inline constexpr std::size_t kWorkingMemoryThreshold = 7;

struct UnitCount {
  std::size_t words = 0;
  std::size_t punctuation = 0;
  std::size_t numbers = 0;
  std::size_t total = 0;

  friend bool operator==(const UnitCount&, const UnitCount&) = default;
};

/// Words, punctuation marks and numbers among the tokens of `text`; each
/// `+` of `++` counts on its own. Whitespace, comments and strings do not count.
UnitCount count_units(std::string_view text);

/// One for the block plus one per exposed socket holding a literal or a
/// block. Attached blocks are chunks of their own and are counted
/// separately. For loops are read at `level` when their pattern allows.
std::size_t chunk_count(const Palette& palette, const BlockInstance& block, ChunkLevel level);

struct ChunkEntry {
  InstanceId id = 0;
  std::string definition;
  std::size_t chunks = 0;
};

struct ChunkReport {
  ChunkLevel level = ChunkLevel::Collapsed;
  std::size_t threshold = kWorkingMemoryThreshold;
  std::vector<ChunkEntry> blocks;  ///< every block, outer before inner
};

ChunkReport chunk_report(const Palette& palette, const Workspace& w, ChunkLevel level);

/// `{schema_version, threshold, lines:[...], chunks:{level, blocks:[...]}|null, diagnostics}`
std::string metrics_json(const Palette& palette, std::string_view text, ChunkLevel level);

}  // namespace notchkit
