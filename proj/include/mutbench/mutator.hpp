#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mutbench/code_model.hpp"
#include "mutbench/operators.hpp"
#include "mutbench/schemes.hpp"

namespace mutbench {

struct Mutant {
  int id = 0;  // dense 1..N per run
  MutationScheme scheme = MutationScheme::Reachability;
  PointCategory category = PointCategory::PlainMethod;
  std::string operator_id;
  std::string file;
  int source_line = 0;
  int sink_line = 0;
  std::string source_api;
  std::string sink_api;
  std::string tag;  // "leak-<id>"
};

struct MutantLedger {
  std::string run_id;
  std::uint64_t corpus_fingerprint = 0;
  std::vector<Mutant> mutants;

  std::map<std::string, std::size_t> counts_by_scheme() const;
  std::map<std::string, std::size_t> counts_by_category() const;
  const Mutant* find(int id) const;
};

struct InjectOptions {
  bool strict_pairs = false;  // also emit leak-src-<id> markers for pairs
  std::string run_id;
};

struct MutationResult {
  // Every unit of the corpus, mutated or byte-identical, keyed by relative
  // path in deterministic order.
  std::vector<std::pair<std::string, std::string>> files;
  MutantLedger ledger;
};

MutationResult inject_all(const CodeModel& model, const std::vector<Mip>& mips,
                          const SecurityOperator& op,
                          const InjectOptions& options = {});

// Renders the code a synth plan asks for. `payload` is placed where the
// operator statements belong. Throws when the plan's host is missing.
struct Scaffold {
  int unit = -1;
  std::size_t insert_offset = 0;
  std::string text;
};
Scaffold synthesize_scaffold(const CodeModel& model, const SynthPlan& plan,
                             const std::string& payload, int mutant_id);

void write_output(const MutationResult& result,
                  const std::filesystem::path& out_dir);

std::string serialize_ledger(const MutantLedger& ledger);
MutantLedger parse_ledger_text(const std::string& text,
                               const std::string& name);
MutantLedger load_ledger(const std::filesystem::path& path);

}  // namespace mutbench
