#pragma once

// Independent oracles used to freeze expected values. These deliberately do
// not share code with the library: the method counter is a character-level
// scanner, the pair counter is plain combinatorics.

#include <cctype>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace oracles {

// Counts concrete method declarations (a parenthesized header followed by a
// body) in Java text. Control keywords and `new Type(...) {` anonymous
// instantiations are excluded.
inline int count_method_decls(const std::string& source) {
  // Blank out comments and literals first.
  std::string text = source;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '/' && i + 1 < text.size() && text[i + 1] == '/') {
      while (i < text.size() && text[i] != '\n') text[i++] = ' ';
    } else if (text[i] == '/' && i + 1 < text.size() && text[i + 1] == '*') {
      text[i] = text[i + 1] = ' ';
      i += 2;
      while (i + 1 < text.size() && !(text[i] == '*' && text[i + 1] == '/')) {
        text[i++] = ' ';
      }
      if (i + 1 < text.size()) text[i] = text[i + 1] = ' ';
    } else if (text[i] == '"' || text[i] == '\'') {
      char quote = text[i];
      text[i++] = ' ';
      while (i < text.size() && text[i] != quote) {
        if (text[i] == '\\' && i + 1 < text.size()) text[i + 1] = ' ';
        text[i++] = ' ';
      }
      if (i < text.size()) text[i] = ' ';
    }
  }

  static const std::set<std::string> keywords = {
      "if", "for", "while", "switch", "catch", "synchronized", "return",
      "do", "else", "try", "finally", "new", "throw", "assert"};

  int count = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '(') continue;
    // Identifier immediately before '('.
    std::size_t end = i;
    while (end > 0 && std::isspace(static_cast<unsigned char>(text[end - 1]))) {
      --end;
    }
    std::size_t start = end;
    while (start > 0 &&
           (std::isalnum(static_cast<unsigned char>(text[start - 1])) ||
            text[start - 1] == '_' || text[start - 1] == '$')) {
      --start;
    }
    if (start == end) continue;
    std::string name = text.substr(start, end - start);
    if (keywords.count(name) > 0) continue;
    // `new Type (` means instantiation, not declaration.
    std::size_t before = start;
    while (before > 0 &&
           std::isspace(static_cast<unsigned char>(text[before - 1]))) {
      --before;
    }
    std::size_t word_end = before;
    while (before > 0 &&
           (std::isalnum(static_cast<unsigned char>(text[before - 1])) ||
            text[before - 1] == '_' || text[before - 1] == '.')) {
      --before;
    }
    std::string prev = text.substr(before, word_end - before);
    if (prev == "new" ||
        (prev.size() > 4 && prev.substr(prev.size() - 4) == ".new")) {
      continue;
    }
    // `new Foo.Bar (` with dots: walk one more word back for the new.
    if (!prev.empty() && prev.find('.') != std::string::npos) {
      std::size_t p = before;
      while (p > 0 && std::isspace(static_cast<unsigned char>(text[p - 1]))) {
        --p;
      }
      std::size_t q = p;
      while (q > 0 && std::isalnum(static_cast<unsigned char>(text[q - 1]))) {
        --q;
      }
      if (text.substr(q, p - q) == "new") continue;
    }
    // Match the closing paren.
    int depth = 0;
    std::size_t j = i;
    for (; j < text.size(); ++j) {
      if (text[j] == '(') ++depth;
      if (text[j] == ')') {
        --depth;
        if (depth == 0) break;
      }
    }
    if (j >= text.size()) continue;
    // Skip whitespace and an optional throws clause; a body brace means a
    // method declaration.
    std::size_t k = j + 1;
    while (k < text.size() &&
           (std::isspace(static_cast<unsigned char>(text[k])) ||
            std::isalnum(static_cast<unsigned char>(text[k])) ||
            text[k] == ',' || text[k] == '.')) {
      ++k;
    }
    if (k < text.size() && text[k] == '{') ++count;
  }
  return count;
}

inline int count_method_decls_in_dir(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  int total = 0;
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".java") {
      files.push_back(entry.path());
    }
  }
  for (const fs::path& file : files) {
    std::ifstream in(file, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    total += count_method_decls(buffer.str());
  }
  return total;
}

// Ordered lifecycle pairs with presence-index distance <= k.
inline int count_adjacent_pairs(int callbacks_present, int k) {
  int pairs = 0;
  for (int i = 0; i < callbacks_present; ++i) {
    for (int j = i + 1; j < callbacks_present && j - i <= k; ++j) {
      ++pairs;
    }
  }
  return pairs;
}

}  // namespace oracles
