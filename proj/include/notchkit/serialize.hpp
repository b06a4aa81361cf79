#pragma once

#include <string>
#include <vector>

#include "notchkit/palette.hpp"
#include "notchkit/syntax.hpp"

namespace notchkit {

inline constexpr int kJsonSchemaVersion = 1;

/// Parse output: `{schema_version, tree, diagnostics}` where every node is
/// `{kind, span, trivia:{leading, trailing}, text?, children, bodies?}`.
std::string parse_result_json(const ParseResult& result);

/// `{schema_version, diagnostics:[{severity, message, span}]}`
std::string diagnostics_json(const std::vector<Diagnostic>& diagnostics);

/// The palette in its load format, with categories in display order.
std::string palette_json(const Palette& palette);

}  // namespace notchkit
