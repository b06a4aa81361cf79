#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace notchkit::testing {

std::string read_file(const std::filesystem::path& path);

struct SourceFile {
  std::string name;
  std::string text;
};

/// The `.notch` files directly under `dir`, sorted by name.
std::vector<SourceFile> load_corpus(const std::filesystem::path& dir);

}  // namespace notchkit::testing
