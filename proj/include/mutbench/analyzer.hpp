#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mutbench/classification.hpp"
#include "mutbench/code_model.hpp"
#include "mutbench/operators.hpp"

namespace mutbench {

// Configuration of the bundled source-sink reachability detector. The
// detector has a sound core (catalog-driven flows over the call graph) plus
// switches that reproduce commonly observed unsound choices: callback lists
// that miss entries, skipped implicit calls, unmodeled anonymous-class
// registrations, and missing cross-callback flows.
struct AnalyzerConfig {
  std::vector<CallbackEntry> known_callbacks;
  bool abstract_class_callbacks_supported = true;
  bool implicit_calls_supported = true;
  bool anonymous_classes_supported = true;
  bool async_pair_flows_supported = true;
  int max_call_depth = -1;  // call-graph hops from entry point; -1 unlimited
};

struct Detection {
  int mutant_id = -1;  // external reports may carry ids; the analyzer never does
  std::string file;
  int line = -1;
  std::string source_api;
  std::string sink_api;
};

struct ToolReport {
  std::string tool_name;
  std::vector<Detection> detections;
};

// `permissive` turns everything on with the full callback table;
// `flowdroid-like` drops fragment lifecycles and the incomplete-list
// callbacks and turns all four switches off.
AnalyzerConfig analyzer_preset(const std::string& name,
                               const ClassificationTable& table);

ToolReport analyze(const CodeModel& model, const SourceSinkCatalog& catalog,
                   const AnalyzerConfig& config);

AnalyzerConfig load_analyzer_config(const std::filesystem::path& path);
std::string analyzer_config_to_json(const AnalyzerConfig& config);

std::string serialize_report(const ToolReport& report);
ToolReport parse_report_text(const std::string& text, const std::string& name);
ToolReport load_report(const std::filesystem::path& path);

}  // namespace mutbench
