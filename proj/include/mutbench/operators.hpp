#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace mutbench {

enum class OperatorGoal { DataLeak, SslMisuse };

std::string_view operator_goal_name(OperatorGoal goal);

// A source/sink code template pair. `##` in the templates is replaced by the
// mutant id at instantiation; the sink logs under the tag `leak-<id>`.
struct SecurityOperator {
  std::string operator_id;
  OperatorGoal goal = OperatorGoal::DataLeak;
  std::string source_template;  // declares `String dataLeak## = ...;`
  std::string sink_template;    // logs `leak-##`
  std::vector<std::string> required_imports;
  std::string source_api;
  std::string sink_api;
};

struct OperatorInstance {
  int mutant_id = 0;
  std::string source_stmt;
  std::string sink_stmt;
  std::string tag;  // "leak-<id>"

  std::string variable() const;  // "dataLeak<id>"
  // Split forms used by the cross-callback placement: a field declaration,
  // an assignment (the declaration with the leading type stripped), and a
  // sink that reads a renamed variable.
  std::string field_decl() const;
  std::string source_assignment() const;
  std::string sink_for_variable(const std::string& variable) const;
  // Emitted in strict builds so pair execution can be checked end to end;
  // uses a verbose-level log so it is not itself a catalog sink.
  std::string source_marker() const;
};

OperatorInstance instantiate(const SecurityOperator& op, int mutant_id);

struct SourceSinkCatalog {
  std::vector<std::string> sources;
  std::vector<std::string> sinks;
};

// Line-oriented catalog: `<signature> -> SOURCE` / `<signature> -> SINK`,
// '%' starts a comment line. Duplicates are dropped, order preserved.
SourceSinkCatalog load_catalog(const std::filesystem::path& path);
SourceSinkCatalog parse_catalog(const std::string& text,
                                const std::string& name);
void validate_catalog(const SourceSinkCatalog& catalog, OperatorGoal goal);

// Builds an operator from one catalog source/sink pair. The source call is
// wrapped in String.valueOf so non-string sources still bind a string.
SecurityOperator operator_from_catalog(const SourceSinkCatalog& catalog,
                                       std::size_t source_index,
                                       std::size_t sink_index,
                                       const std::string& operator_id);

SecurityOperator default_data_leak_operator();
SecurityOperator ssl_operator();

SecurityOperator load_operator(const std::filesystem::path& path);
std::string operator_to_json(const SecurityOperator& op);

}  // namespace mutbench
