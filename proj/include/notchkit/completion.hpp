#pragma once

#include <string_view>
#include <vector>

#include "notchkit/palette.hpp"

namespace notchkit {

struct CompletionQuery {
  std::string_view prefix;
  /// Shape of the insertion site.
  ConnectorShape context = ConnectorShape::Command;
};

/// Palette definitions that fit `context`, ranked: exact first word, then
/// first-word prefix, then prefix of any later label word. Case-insensitive;
/// ties keep palette order. An empty prefix lists every fitting definition.
std::vector<const BlockDefinition*> complete(const Palette& palette, const CompletionQuery& query);

}  // namespace notchkit
