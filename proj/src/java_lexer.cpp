#include <cctype>

#include "mutbench/java_ast.hpp"

namespace mutbench {

namespace {

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

}  // namespace

LexResult lex_java(std::string_view text) {
  LexResult result;
  std::size_t i = 0;
  const std::size_t n = text.size();

  auto fail = [&](std::string message, std::size_t at) {
    result.ok = false;
    result.error = std::move(message);
    result.error_offset = at;
  };

  while (i < n) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && text[i + 1] == '/') {
      while (i < n && text[i] != '\n') ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && text[i + 1] == '*') {
      std::size_t start = i;
      i += 2;
      bool closed = false;
      while (i + 1 < n) {
        if (text[i] == '*' && text[i + 1] == '/') {
          i += 2;
          closed = true;
          break;
        }
        ++i;
      }
      if (!closed) {
        fail("unterminated block comment", start);
        return result;
      }
      continue;
    }
    if (c == '"') {
      std::size_t start = i;
      ++i;
      bool closed = false;
      while (i < n) {
        if (text[i] == '\\') {
          i += 2;
          continue;
        }
        if (text[i] == '"') {
          ++i;
          closed = true;
          break;
        }
        if (text[i] == '\n') break;
        ++i;
      }
      if (!closed) {
        fail("unterminated string literal", start);
        return result;
      }
      result.tokens.push_back(
          Token{TokKind::String, text.substr(start, i - start), start});
      continue;
    }
    if (c == '\'') {
      std::size_t start = i;
      ++i;
      bool closed = false;
      while (i < n) {
        if (text[i] == '\\') {
          i += 2;
          continue;
        }
        if (text[i] == '\'') {
          ++i;
          closed = true;
          break;
        }
        if (text[i] == '\n') break;
        ++i;
      }
      if (!closed) {
        fail("unterminated character literal", start);
        return result;
      }
      result.tokens.push_back(
          Token{TokKind::Char, text.substr(start, i - start), start});
      continue;
    }
    if (is_ident_start(c)) {
      std::size_t start = i;
      while (i < n && is_ident_char(text[i])) ++i;
      result.tokens.push_back(
          Token{TokKind::Identifier, text.substr(start, i - start), start});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = i;
      while (i < n && (is_ident_char(text[i]) || text[i] == '.')) ++i;
      result.tokens.push_back(
          Token{TokKind::Number, text.substr(start, i - start), start});
      continue;
    }
    result.tokens.push_back(Token{TokKind::Punct, text.substr(i, 1), i});
    ++i;
  }

  result.tokens.push_back(Token{TokKind::End, std::string_view(), n});
  return result;
}

}  // namespace mutbench
