#include "mutbench/trace_filter.hpp"

#include <cctype>
#include <map>

#include "mutbench/text_util.hpp"

namespace mutbench {

namespace {

// Extracts a "leak-<digits>" or "leak-src-<digits>" tag starting at `pos`;
// returns its length or 0.
std::size_t match_tag(const std::string& line, std::size_t pos) {
  static const std::string head = "leak-";
  if (line.compare(pos, head.size(), head) != 0) return 0;
  std::size_t i = pos + head.size();
  if (line.compare(i, 4, "src-") == 0) i += 4;
  std::size_t digits_start = i;
  while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) {
    ++i;
  }
  if (i == digits_start) return 0;
  return i - pos;
}

bool is_plain_tag(const std::string& tag) {
  return tag.find("src-") == std::string::npos;
}

}  // namespace

ExecutionTrace parse_trace(const std::string& text, TraceFormat format) {
  ExecutionTrace trace;
  long sequence = 0;
  for (const std::string& line : split(text, '\n')) {
    if (line.empty()) continue;
    std::string tag;
    std::string payload;
    bool matched = false;
    if (format == TraceFormat::Logcat) {
      // `<anything><level>/leak-<n>:<space><payload>`; levels V D I W E.
      for (std::size_t i = 0; i + 1 < line.size() && !matched; ++i) {
        char level = line[i];
        if (line[i + 1] != '/' ||
            (level != 'V' && level != 'D' && level != 'I' && level != 'W' &&
             level != 'E')) {
          continue;
        }
        std::size_t len = match_tag(line, i + 2);
        if (len == 0) continue;
        std::size_t after = i + 2 + len;
        if (after >= line.size() || line[after] != ':') continue;
        tag = line.substr(i + 2, len);
        std::size_t payload_start = after + 1;
        if (payload_start < line.size() && line[payload_start] == ' ') {
          ++payload_start;
        }
        payload = line.substr(payload_start);
        matched = true;
      }
    } else {
      std::size_t len = match_tag(line, 0);
      if (len != 0 && len < line.size() && line[len] == '\t') {
        tag = line.substr(0, len);
        payload = line.substr(len + 1);
        matched = true;
      } else if (len != 0 && len == line.size()) {
        tag = line;
        matched = true;
      }
    }
    if (!matched) {
      ++trace.ignored_lines;
      continue;
    }
    trace.records.push_back(TraceRecord{++sequence, tag, payload});
    if (is_plain_tag(tag)) {
      trace.executed_tags.insert(tag);
    }
  }
  return trace;
}

ExecutionTrace load_trace(const std::filesystem::path& path,
                          TraceFormat format) {
  return parse_trace(read_file(path), format);
}

ExecutionTrace merge_traces(const std::vector<ExecutionTrace>& traces) {
  ExecutionTrace merged;
  long sequence = 0;
  for (const ExecutionTrace& trace : traces) {
    for (const TraceRecord& record : trace.records) {
      merged.records.push_back(
          TraceRecord{++sequence, record.tag, record.payload});
      if (is_plain_tag(record.tag)) {
        merged.executed_tags.insert(record.tag);
      }
    }
    merged.ignored_lines += trace.ignored_lines;
  }
  return merged;
}

FilterResult filter_executable(const MutantLedger& ledger,
                               const ExecutionTrace& trace,
                               const FilterOptions& options) {
  FilterResult result;

  std::map<std::string, long> first_seen;
  for (const TraceRecord& record : trace.records) {
    first_seen.emplace(record.tag, record.sequence);
  }

  std::set<std::string> known_tags;
  for (const Mutant& mutant : ledger.mutants) {
    known_tags.insert(mutant.tag);
    bool executed = trace.saw(mutant.tag);
    if (executed && options.strict_pairs &&
        mutant.category == PointCategory::TaintPair) {
      std::string marker = "leak-src-" + std::to_string(mutant.id);
      auto marker_it = first_seen.find(marker);
      auto sink_it = first_seen.find(mutant.tag);
      executed = marker_it != first_seen.end() &&
                 sink_it != first_seen.end() &&
                 marker_it->second < sink_it->second;
    }
    if (executed) {
      result.executable.insert(mutant.id);
    } else {
      result.non_executable.insert(mutant.id);
    }
  }
  for (const std::string& tag : trace.executed_tags) {
    if (known_tags.count(tag) == 0) ++result.unknown_tags;
  }
  return result;
}

std::vector<int> execution_order(const ExecutionTrace& trace) {
  std::vector<int> order;
  std::set<int> seen;
  for (const TraceRecord& record : trace.records) {
    if (!is_plain_tag(record.tag)) continue;
    int id = std::atoi(record.tag.c_str() + 5);
    if (seen.insert(id).second) {
      order.push_back(id);
    }
  }
  return order;
}

}  // namespace mutbench
