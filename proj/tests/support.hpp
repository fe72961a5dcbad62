#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mutbench/analyzer.hpp"
#include "mutbench/classification.hpp"
#include "mutbench/code_model.hpp"
#include "mutbench/mutator.hpp"
#include "mutbench/operators.hpp"
#include "mutbench/schemes.hpp"
#include "mutbench/trace_filter.hpp"

namespace testsupport {

namespace fs = std::filesystem;

inline fs::path fixtures_dir() { return fs::path(MUTBENCH_FIXTURES_DIR); }
inline fs::path data_dir() { return fs::path(MUTBENCH_DATA_DIR); }

// Fresh directory under the build tree's temp area.
inline fs::path temp_dir(const std::string& hint) {
  static std::mt19937_64 rng(std::random_device{}());
  fs::path base = fs::temp_directory_path() / "mutbench-tests";
  fs::create_directories(base);
  fs::path dir;
  do {
    dir = base / (hint + "-" + std::to_string(rng()));
  } while (fs::exists(dir));
  fs::create_directories(dir);
  return dir;
}

inline std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline mutbench::CodeModel model_for(const fs::path& corpus) {
  return mutbench::build_model_from_dir(
      corpus, mutbench::default_classification_table());
}

inline mutbench::CodeModel model_for_source(const std::string& text,
                                            const std::string& path) {
  std::vector<mutbench::SourceUnit> units;
  units.push_back(
      mutbench::parse_unit(text, mutbench::unit_kind_for_path(path), path));
  return mutbench::build_model(std::move(units),
                               mutbench::default_classification_table());
}

// Full in-memory pipeline over a corpus directory with all four schemes.
struct PipelineRun {
  mutbench::CodeModel model;
  mutbench::MutationResult mutation;
  mutbench::CodeModel mutated_model;
};

inline PipelineRun run_pipeline(const fs::path& corpus,
                                const mutbench::InjectOptions& inject = {}) {
  PipelineRun run;
  run.model = model_for(corpus);
  mutbench::SecurityOperator op = mutbench::default_data_leak_operator();
  std::vector<mutbench::Mip> mips;
  for (mutbench::MutationScheme scheme : mutbench::all_schemes()) {
    mips.push_back(mutbench::derive_mip(run.model, scheme, op));
  }
  run.mutation = mutbench::inject_all(run.model, mips, op, inject);
  std::vector<mutbench::SourceUnit> units;
  for (const auto& [path, text] : run.mutation.files) {
    units.push_back(
        mutbench::parse_unit(text, mutbench::unit_kind_for_path(path), path));
  }
  run.mutated_model = mutbench::build_model(
      std::move(units), mutbench::default_classification_table());
  return run;
}

inline mutbench::SourceSinkCatalog fixture_catalog() {
  mutbench::SourceSinkCatalog catalog;
  catalog.sources.push_back("java.util.Calendar.getTimeZone()");
  catalog.sinks.push_back("android.util.Log.d");
  return catalog;
}

// The mutants the fixture's execution traces are allowed to claim: everything
// outside the two intentionally dead methods.
inline bool fixture_mutant_is_dead(const mutbench::CodeModel& mutated_model,
                                   const mutbench::Mutant& mutant) {
  int method = mutated_model.method_enclosing_line(mutant.file,
                                                   mutant.sink_line);
  if (method < 0) return true;
  const mutbench::MethodDecl& decl =
      mutated_model.methods[static_cast<std::size_t>(method)];
  return decl.name == "unusedHelper" || decl.name == "deadCode";
}

inline mutbench::ExecutionTrace fixture_trace(const PipelineRun& run) {
  std::ostringstream text;
  for (const mutbench::Mutant& mutant : run.mutation.ledger.mutants) {
    if (fixture_mutant_is_dead(run.mutated_model, mutant)) continue;
    text << "09-08 14:22:01.000  1234  5678 D/" << mutant.tag << ": tz\n";
  }
  return mutbench::parse_trace(text.str());
}

}  // namespace testsupport
