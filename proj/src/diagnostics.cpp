#include "mutbench/diagnostics.hpp"

#include <sstream>

namespace mutbench {

namespace {

const char* severity_label(Severity severity) {
  switch (severity) {
    case Severity::Note:
      return "note";
    case Severity::Warning:
      return "warning";
    case Severity::Error:
      return "error";
  }
  return "error";
}

}  // namespace

std::string Diagnostic::to_string() const {
  std::ostringstream out;
  out << file;
  if (line > 0) {
    out << ':' << line;
    if (column > 0) {
      out << ':' << column;
    }
  }
  out << ": " << severity_label(severity) << ": " << message;
  return out.str();
}

void DiagnosticSink::add(Severity severity, std::string file, int line,
                         int column, std::string message) {
  entries_.push_back(Diagnostic{severity, std::move(file), line, column,
                                std::move(message)});
}

std::size_t DiagnosticSink::count(Severity severity) const {
  std::size_t n = 0;
  for (const auto& entry : entries_) {
    if (entry.severity == severity) {
      ++n;
    }
  }
  return n;
}

std::string DiagnosticSink::render() const {
  std::string out;
  for (const auto& entry : entries_) {
    out += entry.to_string();
    out += '\n';
  }
  return out;
}

}  // namespace mutbench
