#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace mutbench {

enum class Severity { Note, Warning, Error };

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string file;
  int line = 0;    // 1-based, 0 when the location is the whole file
  int column = 0;  // 1-based
  std::string message;

  std::string to_string() const;
};

class DiagnosticSink {
 public:
  void add(Severity severity, std::string file, int line, int column,
           std::string message);
  void note(std::string file, int line, int column, std::string message) {
    add(Severity::Note, std::move(file), line, column, std::move(message));
  }
  void warning(std::string file, int line, int column, std::string message) {
    add(Severity::Warning, std::move(file), line, column, std::move(message));
  }
  void error(std::string file, int line, int column, std::string message) {
    add(Severity::Error, std::move(file), line, column, std::move(message));
  }

  const std::vector<Diagnostic>& entries() const { return entries_; }
  std::size_t count(Severity severity) const;
  bool has_errors() const { return count(Severity::Error) > 0; }
  std::string render() const;

 private:
  std::vector<Diagnostic> entries_;
};

}  // namespace mutbench
