#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cctype>
#include <set>

#include "mutbench/mutator.hpp"
#include "support.hpp"

using namespace mutbench;
using testsupport::fixtures_dir;
using testsupport::model_for;

namespace {

// Text-scan the mutated tree for plain leak tags (leak-src markers and the
// like do not count).
std::set<std::string> scan_tags(const MutationResult& result) {
  std::set<std::string> tags;
  for (const auto& [path, text] : result.files) {
    std::size_t pos = 0;
    while ((pos = text.find("\"leak-", pos)) != std::string::npos) {
      std::size_t start = pos + 1;
      std::size_t digits = pos + 6;
      std::size_t end = digits;
      while (end < text.size() &&
             std::isdigit(static_cast<unsigned char>(text[end]))) {
        ++end;
      }
      if (end > digits && end < text.size() && text[end] == '"') {
        tags.insert(text.substr(start, end - start));
      }
      pos = end;
    }
  }
  return tags;
}

MutationResult mutate_tiny() {
  CodeModel model = model_for(fixtures_dir() / "corpus_tiny");
  SecurityOperator op = default_data_leak_operator();
  std::vector<Mip> mips = {derive_mip(model, MutationScheme::Reachability, op)};
  return inject_all(model, mips, op);
}

}  // namespace

TEST_CASE("tiny corpus reachability injects seven re-parsing mutants") {
  MutationResult result = mutate_tiny();
  REQUIRE(result.ledger.mutants.size() == 7);
  for (std::size_t i = 0; i < result.ledger.mutants.size(); ++i) {
    CHECK(result.ledger.mutants[i].id == static_cast<int>(i) + 1);
  }
  std::set<std::string> tags = scan_tags(result);
  CHECK(tags.size() == 7);
  for (const auto& [path, text] : result.files) {
    SourceUnit unit = parse_unit(text, unit_kind_for_path(path), path);
    CHECK(unit.parsed_ok);
  }
}

TEST_CASE("empty profile set leaves the tree byte-identical") {
  CodeModel model = model_for(fixtures_dir() / "corpus_tiny");
  MutationResult result =
      inject_all(model, {}, default_data_leak_operator());
  CHECK(result.ledger.mutants.empty());
  for (const auto& [path, text] : result.files) {
    CHECK(text == testsupport::slurp(fixtures_dir() / "corpus_tiny" / path));
  }
}

TEST_CASE("full fixture run injects the sum of all profile sizes") {
  CodeModel model = model_for(fixtures_dir() / "corpus");
  SecurityOperator op = default_data_leak_operator();
  std::vector<Mip> mips;
  std::size_t total = 0;
  for (MutationScheme scheme : all_schemes()) {
    mips.push_back(derive_mip(model, scheme, op));
    total += mips.back().points.size();
  }
  MutationResult result = inject_all(model, mips, op);
  CHECK(result.ledger.mutants.size() == total);
  CHECK(total == 86);
}

TEST_CASE("ledger tags biject with the text-scanned tags") {
  testsupport::PipelineRun run = testsupport::run_pipeline(
      fixtures_dir() / "corpus");
  std::set<std::string> scanned = scan_tags(run.mutation);
  std::set<std::string> recorded;
  for (const Mutant& mutant : run.mutation.ledger.mutants) {
    recorded.insert(mutant.tag);
  }
  CHECK(scanned == recorded);

  // Ledger lines point at the statements they claim to.
  for (const Mutant& mutant : run.mutation.ledger.mutants) {
    const std::string* text = nullptr;
    for (const auto& [path, content] : run.mutation.files) {
      if (path == mutant.file) text = &content;
    }
    REQUIRE(text != nullptr);
    std::vector<std::string> lines = split(*text, '\n');
    REQUIRE(mutant.sink_line <= static_cast<int>(lines.size()));
    CHECK(lines[static_cast<std::size_t>(mutant.sink_line) - 1].find(
              "\"" + mutant.tag + "\"") != std::string::npos);
    REQUIRE(mutant.source_line <= static_cast<int>(lines.size()));
    CHECK(lines[static_cast<std::size_t>(mutant.source_line) - 1].find(
              "dataLeak" + std::to_string(mutant.id)) != std::string::npos);
  }
}

TEST_CASE("every mutated unit reparses and untouched regions are identical") {
  testsupport::PipelineRun run =
      testsupport::run_pipeline(fixtures_dir() / "corpus");
  CHECK(run.mutated_model.skipped_units.empty());
  // XML units receive no edits at all.
  for (const auto& [path, text] : run.mutation.files) {
    if (unit_kind_for_path(path) != UnitKind::Java) {
      CHECK(text == testsupport::slurp(fixtures_dir() / "corpus" / path));
    }
  }
}

TEST_CASE("injection is deterministic across runs") {
  testsupport::PipelineRun a =
      testsupport::run_pipeline(fixtures_dir() / "corpus");
  testsupport::PipelineRun b =
      testsupport::run_pipeline(fixtures_dir() / "corpus");
  REQUIRE(a.mutation.files.size() == b.mutation.files.size());
  for (std::size_t i = 0; i < a.mutation.files.size(); ++i) {
    CHECK(a.mutation.files[i].first == b.mutation.files[i].first);
    CHECK(a.mutation.files[i].second == b.mutation.files[i].second);
  }
  CHECK(serialize_ledger(a.mutation.ledger) ==
        serialize_ledger(b.mutation.ledger));
}

TEST_CASE("nested receiver scaffold matches the published shape") {
  CodeModel model = model_for(fixtures_dir() / "corpus_nested");
  SecurityOperator op = default_data_leak_operator();
  Mip mip = derive_mip(model, MutationScheme::AndroidAbstractions, op);
  const InjectionPoint* nested = nullptr;
  for (const InjectionPoint& point : mip.points) {
    if (point.synth.kind == SynthPlan::Kind::NestedReceiver) nested = &point;
  }
  REQUIRE(nested != nullptr);
  Scaffold scaffold = synthesize_scaffold(model, nested->synth, "int x = 0;", 6);
  CHECK(scaffold.text.find("new BroadcastReceiver()") != std::string::npos);
  CHECK(scaffold.text.find("addAction(\"android.intent.action.SEND\")") !=
        std::string::npos);
  CHECK(scaffold.text.find("registerReceiver(receiver6, filter6)") !=
        std::string::npos);
  CHECK(scaffold.text.find("public void onReceive(Context context, Intent "
                           "intent)") != std::string::npos);
}

TEST_CASE("xml handler scaffold appends the missing method") {
  CodeModel model = model_for(fixtures_dir() / "corpus");
  SecurityOperator op = default_data_leak_operator();
  Mip mip = derive_mip(model, MutationScheme::AndroidAbstractions, op);
  const InjectionPoint* synth = nullptr;
  for (const InjectionPoint& point : mip.points) {
    if (point.synth.kind == SynthPlan::Kind::XmlHandlerMethod) synth = &point;
  }
  REQUIRE(synth != nullptr);
  Scaffold scaffold = synthesize_scaffold(model, synth->synth, "int x = 0;", 13);
  CHECK(scaffold.text.find("public void openHelp(View view) {") !=
        std::string::npos);
}

TEST_CASE("scaffold plans with missing hosts fail without partial output") {
  CodeModel model = model_for(fixtures_dir() / "corpus_tiny");
  SynthPlan plan;
  plan.kind = SynthPlan::Kind::XmlHandlerMethod;
  plan.host_class = 999;
  plan.description = "create handler in a class that does not exist";
  CHECK_THROWS_WITH_AS(synthesize_scaffold(model, plan, "int x = 0;", 1),
                       doctest::Contains("does not exist"),
                       std::runtime_error);
}

TEST_CASE("write_output mirrors the input layout and is rerun-stable") {
  testsupport::PipelineRun run =
      testsupport::run_pipeline(fixtures_dir() / "corpus");
  auto out_a = testsupport::temp_dir("tree-a");
  write_output(run.mutation, out_a);
  CHECK(std::filesystem::exists(out_a / "ledger"));
  CHECK(std::filesystem::exists(out_a / "src/com/example/MainActivity.java"));
  CHECK(std::filesystem::exists(out_a / "res/layout/activity_main.xml"));

  // Re-running into the same directory replaces content deterministically.
  std::string before = testsupport::slurp(out_a / "ledger");
  write_output(run.mutation, out_a);
  CHECK(testsupport::slurp(out_a / "ledger") == before);
}

TEST_CASE("unwritable output path fails cleanly") {
  testsupport::PipelineRun run =
      testsupport::run_pipeline(fixtures_dir() / "corpus_tiny");
  auto dir = testsupport::temp_dir("blocked");
  std::filesystem::path file_in_the_way = dir / "out";
  write_file_atomic(file_in_the_way, "occupied");
  CHECK_THROWS(write_output(run.mutation, file_in_the_way));
}

TEST_CASE("ledger serialization round-trips") {
  testsupport::PipelineRun run =
      testsupport::run_pipeline(fixtures_dir() / "corpus");
  std::string text = serialize_ledger(run.mutation.ledger);
  MutantLedger parsed = parse_ledger_text(text, "ledger");
  REQUIRE(parsed.mutants.size() == run.mutation.ledger.mutants.size());
  CHECK(parsed.run_id == run.mutation.ledger.run_id);
  CHECK(parsed.corpus_fingerprint == run.mutation.ledger.corpus_fingerprint);
  for (std::size_t i = 0; i < parsed.mutants.size(); ++i) {
    const Mutant& a = parsed.mutants[i];
    const Mutant& b = run.mutation.ledger.mutants[i];
    CHECK(a.id == b.id);
    CHECK(a.scheme == b.scheme);
    CHECK(a.category == b.category);
    CHECK(a.file == b.file);
    CHECK(a.sink_line == b.sink_line);
    CHECK(a.tag == b.tag);
  }
}

TEST_CASE("strict pair builds add source markers") {
  InjectOptions strict;
  strict.strict_pairs = true;
  testsupport::PipelineRun run =
      testsupport::run_pipeline(fixtures_dir() / "corpus", strict);
  bool marker_found = false;
  for (const auto& [path, text] : run.mutation.files) {
    if (text.find("android.util.Log.v(\"leak-src-") != std::string::npos) {
      marker_found = true;
    }
  }
  CHECK(marker_found);
  // Markers never collide with the plain tag bijection.
  std::set<std::string> tags = scan_tags(run.mutation);
  CHECK(tags.size() == run.mutation.ledger.mutants.size());
}

TEST_CASE("taint pairs split source and sink across methods") {
  testsupport::PipelineRun run =
      testsupport::run_pipeline(fixtures_dir() / "corpus");
  for (const Mutant& mutant : run.mutation.ledger.mutants) {
    if (mutant.category != PointCategory::TaintPair) continue;
    CHECK(mutant.source_line != mutant.sink_line);
    int source_method = run.mutated_model.method_enclosing_line(
        mutant.file, mutant.source_line);
    int sink_method = run.mutated_model.method_enclosing_line(
        mutant.file, mutant.sink_line);
    REQUIRE(source_method >= 0);
    REQUIRE(sink_method >= 0);
    CHECK(source_method != sink_method);
  }
}
