#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mutbench/analyzer.hpp"
#include "mutbench/code_model.hpp"
#include "mutbench/mutator.hpp"
#include "mutbench/operators.hpp"

namespace mutbench {

enum class FlawClass {
  FC1MissingCallbacks,
  FC2MissingImplicitCalls,
  FC3AnonymousClasses,
  FC4AsyncMethods,
  Unclassified,
};

std::string_view flaw_class_name(FlawClass flaw);

struct SurvivalReport {
  std::size_t injected_count = 0;
  std::size_t executable_count = 0;
  std::size_t detected_count = 0;
  std::size_t unresolvable_detections = 0;
  std::vector<int> undetected;  // sorted mutant ids
  std::map<std::string, std::size_t> undetected_by_category;
  std::map<std::string, FlawClass> category_hypotheses;
  std::map<int, FlawClass> per_mutant_hypotheses;

  double survival_rate_percent() const;  // rounded half-up to 1 decimal
};

// "48.7%" — never more or less than one decimal, round half up.
std::string format_rate(std::size_t numerator, std::size_t denominator);

// Correlates detections with ledger mutants: explicit id first, then exact
// (file, sink line), then (source api, sink api, file).
std::set<int> resolve_detections(const MutantLedger& ledger,
                                 const ToolReport& report,
                                 std::size_t* unresolvable);

// `model`/`graph` describe the mutated tree; they refine classification
// (implicit-call chains, anonymous enclosing classes) and may be null.
SurvivalReport survivors(const MutantLedger& ledger,
                         const std::set<int>& executable,
                         const ToolReport& report,
                         const CodeModel* model = nullptr,
                         const CallGraph* graph = nullptr);

FlawClass classify_flaw(const Mutant& mutant, const CodeModel* model,
                        const CallGraph* graph);

const Mutant& lookup_mutant(const MutantLedger& ledger, const std::string& tag);

struct CallChain {
  std::vector<int> methods;       // entry point first
  std::vector<CallEdge> edges;    // methods.size() - 1 entries
  bool crosses_implicit = false;
};

struct ChainOptions {
  int max_paths = 32;
  int max_depth = 12;
};

std::vector<CallChain> call_chains(const CodeModel& model,
                                   const CallGraph& graph, const Mutant& mutant,
                                   const MutantLedger* ledger = nullptr,
                                   const std::vector<int>* exec_order = nullptr,
                                   const ChainOptions& options = {});

struct MinimalExample {
  int mutant_id = 0;
  std::vector<int> chain;     // method ids in the mutated model
  std::string class_name;     // top-level skeleton class
  std::string java_path;      // suggested file name
  std::string java_text;
  std::string xml_path;       // empty when no layout stub is needed
  std::string xml_text;
};

MinimalExample synthesize_minimal(const CodeModel& model, const Mutant& mutant,
                                  const CallChain& chain,
                                  const SecurityOperator& op);

enum class ValidationOutcome { FlawConfirmed, DetectedRefineOrDiscard };

// `report` must come from analyzing the skeleton; the example's mutant is
// located by its sink line inside the skeleton unit.
ValidationOutcome validate_minimal(const MinimalExample& example,
                                   const ToolReport& report);

struct FunnelCounts {
  std::size_t injected = 0;
  std::size_t executable = 0;
  std::size_t undetected = 0;
};

FunnelCounts funnel(const MutantLedger& ledger, const std::set<int>& executable,
                    const ToolReport& report);
std::string render_funnel(const FunnelCounts& counts);

std::string render_survival(const SurvivalReport& report, bool records);

}  // namespace mutbench
