#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "mutbench/mutator.hpp"

namespace mutbench {

struct TraceRecord {
  long sequence = 0;  // strictly increasing within a trace
  std::string tag;    // "leak-<n>" or "leak-src-<n>"
  std::string payload;
};

struct ExecutionTrace {
  std::vector<TraceRecord> records;
  std::set<std::string> executed_tags;  // plain "leak-<n>" tags only
  long ignored_lines = 0;

  bool saw(const std::string& tag) const {
    return executed_tags.count(tag) > 0;
  }
};

enum class TraceFormat {
  Logcat,  // `...<level>/leak-<n>: payload`
  Bare,    // `leak-<n>\tpayload`
};

ExecutionTrace parse_trace(const std::string& text,
                           TraceFormat format = TraceFormat::Logcat);
ExecutionTrace load_trace(const std::filesystem::path& path,
                          TraceFormat format = TraceFormat::Logcat);

// Traces union in argument order; sequence numbers keep growing so the
// combined record order is the concatenation order.
ExecutionTrace merge_traces(const std::vector<ExecutionTrace>& traces);

struct FilterOptions {
  // Taint-split pairs additionally need their leak-src-<id> marker, observed
  // before the first sink record.
  bool strict_pairs = false;
};

struct FilterResult {
  std::set<int> executable;
  std::set<int> non_executable;
  long unknown_tags = 0;  // trace tags not present in the ledger
};

FilterResult filter_executable(const MutantLedger& ledger,
                               const ExecutionTrace& trace,
                               const FilterOptions& options = {});

// Mutant ids in first-occurrence order.
std::vector<int> execution_order(const ExecutionTrace& trace);

}  // namespace mutbench
