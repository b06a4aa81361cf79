#include "notchkit/completion.hpp"

#include <algorithm>
#include <cctype>

namespace notchkit {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool starts_with(std::string_view s, std::string_view prefix) { return s.substr(0, prefix.size()) == prefix; }

/// 0 best; -1 no match.
int rank(const BlockDefinition& def, const std::string& prefix) {
  const auto words = def.words();
  if (words.empty()) return -1;
  const std::string first = lower(words.front());
  if (first == prefix) return 0;
  if (starts_with(first, prefix)) return 1;
  for (std::size_t i = 1; i < words.size(); ++i) {
    if (starts_with(lower(words[i]), prefix)) return 2;
  }
  return -1;
}

}  // namespace

std::vector<const BlockDefinition*> complete(const Palette& palette, const CompletionQuery& query) {
  const std::string prefix = lower(query.prefix);
  std::vector<std::pair<int, const BlockDefinition*>> hits;
  for (const auto* def : palette.all()) {
    if (!compatible(def->produces, query.context)) continue;
    const int r = prefix.empty() ? 0 : rank(*def, prefix);
    if (r >= 0) hits.emplace_back(r, def);
  }
  std::stable_sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<const BlockDefinition*> out;
  out.reserve(hits.size());
  for (const auto& h : hits) out.push_back(h.second);
  return out;
}

}  // namespace notchkit
