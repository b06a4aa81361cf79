#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "notchkit/metrics.hpp"
#include "notchkit/palette.hpp"

namespace notchkit {

/// A single-token corruption of a source text.
struct Mutation {
  enum class Kind {
    Replace,  ///< a statement-local token becomes `@`
    Delete,   ///< a bracket or brace is removed
  };
  Kind kind = Kind::Replace;
  std::size_t offset = 0;
  std::string original;  ///< the token that was changed
  std::string text;      ///< the mutated program
};

/// Every Replace mutation of a token inside a simple statement or inside
/// any expression, and every Delete mutation of a `(`, `)`, `{` or `}`.
/// Expects a text that parses without diagnostics.
std::vector<Mutation> mutation_suite(std::string_view text);

bool delimiters_balanced(std::string_view text);

/// Round trip A at one level: textify(blockify(parse(t))) == t.
bool round_trips(const Palette& palette, std::string_view text, ChunkLevel level);

std::size_t error_block_count(const Workspace& w);

struct MutationFailure {
  Mutation mutation;
  std::string reason;
};

struct FileReport {
  std::string path;
  std::string io_error;  ///< empty when the file was read
  bool refused = false;  ///< mode switch refused on the file itself
  bool roundtrip_collapsed = false;
  bool roundtrip_clauses = false;
  std::size_t diagnostics = 0;
  std::size_t error_blocks = 0;
  UnitCount units;

  std::size_t mutations = 0;
  std::size_t mutations_ok = 0;
  std::size_t refusals = 0;  ///< mutations that were (correctly) refused
  /// error blocks per balanced mutation -> number of such mutations
  std::map<std::size_t, std::size_t> error_block_histogram;
  std::vector<MutationFailure> failures;

  bool roundtrip_pass() const { return io_error.empty() && !refused && roundtrip_collapsed && roundtrip_clauses; }
};

struct CorpusOptions {
  bool mutate = false;
};

struct CorpusReport {
  std::vector<FileReport> files;
  std::size_t files_total = 0;
  std::size_t roundtrip_pass = 0;
  std::size_t mutations = 0;
  std::size_t mutations_ok = 0;

  bool all_pass() const { return roundtrip_pass == files_total && mutations_ok == mutations; }
};

/// Checks one program. With `mutate`, also runs its mutation suite:
/// balanced mutations must project with at least one error block and
/// round-trip; unbalanced ones must be refused.
FileReport check_source(const Palette& palette, std::string path, std::string_view text, bool mutate);

/// All `.notch` files under `dir`, in path order.
CorpusReport corpus_report(const Palette& palette, const std::filesystem::path& dir, CorpusOptions options);

std::string corpus_json(const CorpusReport& report);

}  // namespace notchkit
