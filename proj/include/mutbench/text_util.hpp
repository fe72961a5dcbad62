#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mutbench {

// Byte offsets of line starts; keeps offset <-> line:column mapping exact so
// rewritten files can be anchored back to the original bytes.
struct LineIndex {
  std::vector<std::size_t> line_starts;  // always non-empty, first entry is 0

  static LineIndex build(std::string_view text);

  // 1-based (line, column) of a byte offset.
  std::pair<int, int> locate(std::size_t offset) const;
  std::size_t offset_of_line(int line) const;
  int line_count() const { return static_cast<int>(line_starts.size()); }
};

std::uint64_t fnv1a64(std::string_view data);
std::string to_hex(std::uint64_t value);

std::string read_file(const std::filesystem::path& path);
// Writes via a temp file in the same directory followed by rename.
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view content);

bool starts_with(std::string_view text, std::string_view prefix);
bool ends_with(std::string_view text, std::string_view suffix);
std::vector<std::string> split(std::string_view text, char sep);
std::string trim(std::string_view text);
std::string replace_all(std::string_view text, std::string_view from,
                        std::string_view to);

// Indentation (spaces/tabs) of the line containing `offset`.
std::string line_indent_at(std::string_view text, std::size_t offset);

}  // namespace mutbench
