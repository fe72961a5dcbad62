#include "mutbench/cli.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "mutbench/analyzer.hpp"
#include "mutbench/classification.hpp"
#include "mutbench/code_model.hpp"
#include "mutbench/evaluator.hpp"
#include "mutbench/manifest.hpp"
#include "mutbench/mutator.hpp"
#include "mutbench/operators.hpp"
#include "mutbench/schemes.hpp"
#include "mutbench/text_util.hpp"
#include "mutbench/trace_filter.hpp"

namespace mutbench {

namespace {

namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CorpusError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shared flag values across subcommands.
struct Options {
  std::string corpus;
  std::string schemes = "all";
  std::string operator_file;
  std::string catalog_file;
  std::string config_file;
  std::string analyzer_config_file;
  std::string out_dir;
  std::string ledger_file;
  std::string executable_file;
  std::string report_file;
  std::string toy_preset;
  std::vector<std::string> trace_files;
  std::string trace_format = "logcat";
  std::string format = "human";
  std::string seed_note;
  int mutant_id = 0;
  int taint_k = 1;
  int nested_depth = 2;
  int max_paths = 32;
  int max_depth = 12;
  bool strict_pairs = false;
};

ClassificationTable load_table(const Options& options) {
  if (options.config_file.empty()) return default_classification_table();
  try {
    return load_classification_table(options.config_file);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

SecurityOperator load_operator_or_default(const Options& options) {
  if (options.operator_file.empty()) return default_data_leak_operator();
  try {
    return load_operator(options.operator_file);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

SourceSinkCatalog load_catalog_or_default(const Options& options) {
  if (options.catalog_file.empty()) {
    SourceSinkCatalog catalog;
    catalog.sources.push_back("java.util.Calendar.getTimeZone()");
    catalog.sinks.push_back("android.util.Log.d");
    return catalog;
  }
  try {
    SourceSinkCatalog catalog = load_catalog(options.catalog_file);
    validate_catalog(catalog, OperatorGoal::DataLeak);
    return catalog;
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

std::vector<MutationScheme> parse_schemes(const std::string& value) {
  if (value == "all") return all_schemes();
  std::vector<MutationScheme> schemes;
  for (const std::string& name : split(value, ',')) {
    std::string trimmed = trim(name);
    if (trimmed.empty()) continue;
    MutationScheme scheme;
    if (!scheme_from_name(trimmed, scheme)) {
      throw UsageError("unknown scheme: " + trimmed);
    }
    schemes.push_back(scheme);
  }
  if (schemes.empty()) {
    throw UsageError("no schemes selected");
  }
  return schemes;
}

CodeModel build_corpus_model(const Options& options,
                             const ClassificationTable& table) {
  if (options.corpus.empty()) {
    throw UsageError("--corpus is required");
  }
  if (!fs::exists(options.corpus)) {
    throw UsageError("corpus path does not exist: " + options.corpus);
  }
  CodeModel model = build_model_from_dir(options.corpus, table);
  if (!model.units.empty() && model.skipped_units.size() == model.units.size()) {
    throw CorpusError("every unit in the corpus failed to parse");
  }
  return model;
}

MutantLedger load_ledger_checked(const Options& options) {
  if (options.ledger_file.empty()) {
    throw UsageError("--ledger is required");
  }
  try {
    return load_ledger(options.ledger_file);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

std::set<int> load_id_set(const std::string& path) {
  std::set<int> ids;
  std::string text;
  try {
    text = read_file(path);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  for (const std::string& line : split(text, '\n')) {
    std::string trimmed = trim(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    try {
      ids.insert(std::stoi(trimmed));
    } catch (const std::exception&) {
      throw UsageError(path + ": malformed mutant id '" + trimmed + "'");
    }
  }
  return ids;
}

TraceFormat parse_trace_format(const std::string& value) {
  if (value == "logcat") return TraceFormat::Logcat;
  if (value == "bare") return TraceFormat::Bare;
  throw UsageError("unknown trace format: " + value);
}

AnalyzerConfig resolve_analyzer_config(const Options& options,
                                       const ClassificationTable& table) {
  if (!options.analyzer_config_file.empty()) {
    try {
      return load_analyzer_config(options.analyzer_config_file);
    } catch (const std::exception& e) {
      throw UsageError(e.what());
    }
  }
  if (options.toy_preset.empty()) {
    throw UsageError("--toy <preset> or --analyzer-config is required");
  }
  try {
    return analyzer_preset(options.toy_preset, table);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

int cmd_profile(const Options& options, std::ostream& out) {
  ClassificationTable table = load_table(options);
  SecurityOperator op = load_operator_or_default(options);
  std::vector<MutationScheme> schemes = parse_schemes(options.schemes);
  CodeModel model = build_corpus_model(options, table);
  SchemeOptions scheme_options{options.taint_k, options.nested_depth};
  for (MutationScheme scheme : schemes) {
    Mip mip = derive_mip(model, scheme, op, scheme_options);
    out << scheme_name(scheme) << ": " << mip.points.size() << " points\n";
    if (!options.out_dir.empty()) {
      fs::create_directories(options.out_dir);
      write_file_atomic(fs::path(options.out_dir) /
                            ("mip-" + std::string(scheme_name(scheme)) +
                             ".txt"),
                        dump_mip(mip, model));
    }
  }
  for (const std::string& skipped : model.skipped_units) {
    out << "skipped: " << skipped << "\n";
  }
  return 0;
}

int cmd_mutate(const Options& options, std::ostream& out) {
  ClassificationTable table = load_table(options);
  SecurityOperator op = load_operator_or_default(options);
  std::vector<MutationScheme> schemes = parse_schemes(options.schemes);
  if (options.out_dir.empty()) {
    throw UsageError("--out is required");
  }
  CodeModel model = build_corpus_model(options, table);
  SchemeOptions scheme_options{options.taint_k, options.nested_depth};

  std::vector<Mip> mips;
  for (MutationScheme scheme : schemes) {
    mips.push_back(derive_mip(model, scheme, op, scheme_options));
  }

  InjectOptions inject_options;
  inject_options.strict_pairs = options.strict_pairs;
  std::string config_digest = options.schemes + "|" + op.operator_id + "|" +
                              std::to_string(options.taint_k) + "|" +
                              std::to_string(options.nested_depth) + "|" +
                              (options.strict_pairs ? "strict" : "lenient");
  inject_options.run_id =
      "run-" + to_hex(model.fingerprint ^ fnv1a64(config_digest));

  RunManifest manifest;
  manifest.run_id = inject_options.run_id;
  manifest.corpus = options.corpus;
  for (MutationScheme scheme : schemes) {
    manifest.schemes.push_back(std::string(scheme_name(scheme)));
  }
  manifest.operator_file = options.operator_file;
  manifest.catalog_file = options.catalog_file;
  manifest.out_dir = options.out_dir;
  manifest.created_at = current_timestamp_utc();
  manifest.seed_note = options.seed_note;
  write_manifest(manifest, options.out_dir);

  MutationResult result = inject_all(model, mips, op, inject_options);
  write_output(result, options.out_dir);
  out << "injected: " << result.ledger.mutants.size() << "\n";
  for (const auto& [scheme, count] : result.ledger.counts_by_scheme()) {
    out << "  " << scheme << ": " << count << "\n";
  }
  return 0;
}

int cmd_filter(const Options& options, std::ostream& out) {
  MutantLedger ledger = load_ledger_checked(options);
  if (options.trace_files.empty()) {
    throw UsageError("at least one --trace file is required");
  }
  TraceFormat format = parse_trace_format(options.trace_format);
  std::vector<ExecutionTrace> traces;
  for (const std::string& path : options.trace_files) {
    try {
      traces.push_back(load_trace(path, format));
    } catch (const std::exception& e) {
      throw UsageError(e.what());
    }
  }
  ExecutionTrace trace = merge_traces(traces);
  FilterOptions filter_options;
  filter_options.strict_pairs = options.strict_pairs;
  FilterResult result = filter_executable(ledger, trace, filter_options);
  out << "executable: " << result.executable.size() << " / "
      << ledger.mutants.size() << "\n";
  out << "non-executable: " << result.non_executable.size() << " ("
      << format_rate(result.non_executable.size(), ledger.mutants.size())
      << " of injected)\n";
  if (result.unknown_tags > 0) {
    out << "warning: " << result.unknown_tags
        << " trace tag(s) missing from the ledger\n";
  }
  auto render_ids = [](const std::set<int>& ids) {
    std::ostringstream text;
    for (int id : ids) text << id << "\n";
    return text.str();
  };
  if (!options.out_dir.empty()) {
    fs::create_directories(options.out_dir);
    write_file_atomic(fs::path(options.out_dir) / "executable.txt",
                      render_ids(result.executable));
    write_file_atomic(fs::path(options.out_dir) / "non-executable.txt",
                      render_ids(result.non_executable));
  } else {
    out << "executable ids:\n" << render_ids(result.executable);
    out << "non-executable ids:\n" << render_ids(result.non_executable);
  }
  return 0;
}

int cmd_analyze(const Options& options, std::ostream& out) {
  ClassificationTable table = load_table(options);
  SourceSinkCatalog catalog = load_catalog_or_default(options);
  AnalyzerConfig config = resolve_analyzer_config(options, table);
  CodeModel model = build_corpus_model(options, table);
  ToolReport report;
  try {
    report = analyze(model, catalog, config);
  } catch (const std::exception& e) {
    throw CorpusError(e.what());
  }
  std::string text = serialize_report(report);
  if (!options.out_dir.empty()) {
    fs::create_directories(options.out_dir);
    fs::path path = fs::path(options.out_dir) / "report.txt";
    write_file_atomic(path, text);
    out << "report: " << path.string() << " (" << report.detections.size()
        << " detections)\n";
  } else {
    out << text;
  }
  return 0;
}

int cmd_evaluate(const Options& options, std::ostream& out) {
  ClassificationTable table = load_table(options);
  MutantLedger ledger = load_ledger_checked(options);
  if (options.executable_file.empty()) {
    throw UsageError("--executable is required");
  }
  std::set<int> executable = load_id_set(options.executable_file);

  ToolReport report;
  CodeModel model;
  CallGraph graph;
  bool have_model = false;
  if (!options.corpus.empty()) {
    model = build_corpus_model(options, table);
    graph = call_graph(model);
    have_model = true;
  }
  if (!options.report_file.empty()) {
    try {
      report = load_report(options.report_file);
    } catch (const std::exception& e) {
      throw UsageError(e.what());
    }
  } else {
    if (!have_model) {
      throw UsageError("--toy needs --corpus pointing at the mutated tree");
    }
    SourceSinkCatalog catalog = load_catalog_or_default(options);
    AnalyzerConfig config = resolve_analyzer_config(options, table);
    try {
      report = analyze(model, catalog, config);
    } catch (const std::exception& e) {
      throw CorpusError(e.what());
    }
  }

  SurvivalReport survival =
      survivors(ledger, executable, report, have_model ? &model : nullptr,
                have_model ? &graph : nullptr);
  std::string text = render_survival(survival, options.format == "records");
  out << text;
  if (!options.out_dir.empty()) {
    fs::create_directories(options.out_dir);
    std::string name =
        options.format == "records" ? "survival.records" : "survival.txt";
    write_file_atomic(fs::path(options.out_dir) / name, text);
  }
  return 0;
}

int cmd_synth(const Options& options, std::ostream& out) {
  ClassificationTable table = load_table(options);
  MutantLedger ledger = load_ledger_checked(options);
  SecurityOperator op = load_operator_or_default(options);
  if (options.mutant_id <= 0) {
    throw UsageError("--mutant-id is required");
  }
  const Mutant* mutant = ledger.find(options.mutant_id);
  if (mutant == nullptr) {
    throw UsageError("mutant id " + std::to_string(options.mutant_id) +
                     " is not in the ledger");
  }
  if (options.out_dir.empty()) {
    throw UsageError("--out is required");
  }
  CodeModel model = build_corpus_model(options, table);
  CallGraph graph = call_graph(model);
  ChainOptions chain_options{options.max_paths, options.max_depth};
  std::vector<CallChain> chains =
      call_chains(model, graph, *mutant, &ledger, nullptr, chain_options);
  CallChain chain;
  if (chains.empty()) {
    // Taint pairs synthesize from the sink callback alone.
    int sink_method =
        model.method_enclosing_line(mutant->file, mutant->sink_line);
    if (sink_method < 0) {
      throw CorpusError("mutant " + std::to_string(mutant->id) +
                        " is unreachable from every entry point and has no "
                        "enclosing method");
    }
    chain.methods = {sink_method};
  } else {
    chain = chains.front();
  }
  MinimalExample example = synthesize_minimal(model, *mutant, chain, op);
  fs::create_directories(options.out_dir);
  fs::path java_path = fs::path(options.out_dir) / example.java_path;
  write_file_atomic(java_path, example.java_text);
  if (!example.xml_path.empty()) {
    fs::path xml_path = fs::path(options.out_dir) / example.xml_path;
    fs::create_directories(xml_path.parent_path());
    write_file_atomic(xml_path, example.xml_text);
  }
  out << java_path.string() << "\n";
  return 0;
}

int cmd_funnel(const Options& options, std::ostream& out) {
  MutantLedger ledger = load_ledger_checked(options);
  if (options.executable_file.empty()) {
    throw UsageError("--executable is required");
  }
  std::set<int> executable = load_id_set(options.executable_file);
  ToolReport report;
  if (!options.report_file.empty()) {
    try {
      report = load_report(options.report_file);
    } catch (const std::exception& e) {
      throw UsageError(e.what());
    }
  }
  FunnelCounts counts = funnel(ledger, executable, report);
  out << render_funnel(counts);
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"mutation-driven soundness harness for data-leak analyzers"};
  app.require_subcommand(1);

  Options options;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", options.config_file,
                    "classification table (JSON)");
  };

  CLI::App* profile =
      app.add_subcommand("profile", "derive injection profiles");
  profile->add_option("--corpus", options.corpus, "source corpus directory");
  profile->add_option("--schemes", options.schemes,
                      "comma list or 'all'");
  profile->add_option("--operator", options.operator_file, "operator JSON");
  profile->add_option("--out", options.out_dir, "directory for MIP dumps");
  profile->add_option("--taint-k", options.taint_k, "pair adjacency bound");
  profile->add_option("--nested-depth", options.nested_depth,
                      "receiver nesting depth");
  add_common(profile);

  CLI::App* mutate = app.add_subcommand("mutate", "seed mutants into a tree");
  mutate->add_option("--corpus", options.corpus, "source corpus directory");
  mutate->add_option("--schemes", options.schemes, "comma list or 'all'");
  mutate->add_option("--operator", options.operator_file, "operator JSON");
  mutate->add_option("--catalog", options.catalog_file, "sources/sinks file");
  mutate->add_option("--out", options.out_dir, "output directory");
  mutate->add_option("--taint-k", options.taint_k, "pair adjacency bound");
  mutate->add_option("--nested-depth", options.nested_depth,
                     "receiver nesting depth");
  mutate->add_flag("--strict-pairs", options.strict_pairs,
                   "emit leak-src markers for taint pairs");
  mutate->add_option("--seed-note", options.seed_note,
                     "free-text note recorded in the manifest");
  add_common(mutate);

  CLI::App* filter =
      app.add_subcommand("filter", "partition mutants by executed traces");
  filter->add_option("--ledger", options.ledger_file, "ledger file");
  filter->add_option("--trace", options.trace_files, "trace file(s)");
  filter->add_option("--trace-format", options.trace_format,
                     "logcat or bare");
  filter->add_flag("--strict-pairs", options.strict_pairs,
                   "pairs need src markers before sinks");
  filter->add_option("--out", options.out_dir, "directory for id lists");

  CLI::App* analyze_cmd =
      app.add_subcommand("analyze", "run the bundled detector on a tree");
  analyze_cmd->add_option("--corpus", options.corpus, "mutated tree");
  analyze_cmd->add_option("--catalog", options.catalog_file,
                          "sources/sinks file");
  analyze_cmd->add_option("--toy", options.toy_preset,
                          "preset: permissive or flowdroid-like");
  analyze_cmd->add_option("--analyzer-config", options.analyzer_config_file,
                          "analyzer config JSON");
  analyze_cmd->add_option("--out", options.out_dir,
                          "directory for report.txt");
  add_common(analyze_cmd);

  CLI::App* evaluate =
      app.add_subcommand("evaluate", "survival statistics for a tool report");
  evaluate->add_option("--ledger", options.ledger_file, "ledger file");
  evaluate->add_option("--executable", options.executable_file,
                       "executable id list");
  evaluate->add_option("--report", options.report_file,
                       "external tool report");
  evaluate->add_option("--toy", options.toy_preset,
                       "run the bundled detector instead of --report");
  evaluate->add_option("--analyzer-config", options.analyzer_config_file,
                       "analyzer config JSON");
  evaluate->add_option("--corpus", options.corpus, "mutated tree");
  evaluate->add_option("--catalog", options.catalog_file,
                       "sources/sinks file");
  evaluate->add_option("--format", options.format, "human or records");
  evaluate->add_option("--out", options.out_dir, "directory for the report");
  evaluate->add_option("--max-paths", options.max_paths, "chain bound");
  evaluate->add_option("--max-depth", options.max_depth, "chain depth bound");
  add_common(evaluate);

  CLI::App* synth =
      app.add_subcommand("synth", "synthesize a minimal example");
  synth->add_option("--ledger", options.ledger_file, "ledger file");
  synth->add_option("--mutant-id", options.mutant_id, "survivor id");
  synth->add_option("--corpus", options.corpus, "mutated tree");
  synth->add_option("--operator", options.operator_file, "operator JSON");
  synth->add_option("--out", options.out_dir, "output directory");
  synth->add_option("--max-paths", options.max_paths, "chain bound");
  synth->add_option("--max-depth", options.max_depth, "chain depth bound");
  add_common(synth);

  CLI::App* funnel_cmd =
      app.add_subcommand("funnel", "print the injected/executable/undetected "
                                   "counts");
  funnel_cmd->add_option("--ledger", options.ledger_file, "ledger file");
  funnel_cmd->add_option("--executable", options.executable_file,
                         "executable id list");
  funnel_cmd->add_option("--report", options.report_file, "tool report");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (profile->parsed()) return cmd_profile(options, out);
    if (mutate->parsed()) return cmd_mutate(options, out);
    if (filter->parsed()) return cmd_filter(options, out);
    if (analyze_cmd->parsed()) return cmd_analyze(options, out);
    if (evaluate->parsed()) return cmd_evaluate(options, out);
    if (synth->parsed()) return cmd_synth(options, out);
    if (funnel_cmd->parsed()) return cmd_funnel(options, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const CorpusError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  err << "error: no subcommand\n";
  return 2;
}

}  // namespace mutbench
