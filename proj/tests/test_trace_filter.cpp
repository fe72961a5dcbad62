#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "mutbench/trace_filter.hpp"
#include "support.hpp"

using namespace mutbench;

namespace {

MutantLedger ledger_of(int count,
                       PointCategory category = PointCategory::PlainMethod) {
  MutantLedger ledger;
  for (int id = 1; id <= count; ++id) {
    Mutant mutant;
    mutant.id = id;
    mutant.category = category;
    mutant.tag = "leak-" + std::to_string(id);
    mutant.file = "A.java";
    mutant.source_line = id;
    mutant.sink_line = id + 1;
    ledger.mutants.push_back(mutant);
  }
  return ledger;
}

}  // namespace

TEST_CASE("logcat lines with leak tags become records") {
  ExecutionTrace trace = parse_trace(
      "D/leak-1: x\n"
      "some noise\n"
      "D/leak-3: y\n");
  CHECK(trace.records.size() == 2);
  CHECK(trace.executed_tags == std::set<std::string>{"leak-1", "leak-3"});
  CHECK(trace.ignored_lines == 1);
}

TEST_CASE("empty stream parses to an empty trace") {
  ExecutionTrace trace = parse_trace("");
  CHECK(trace.records.empty());
  CHECK(trace.executed_tags.empty());
}

TEST_CASE("duplicate tags keep record order but collapse in the tag set") {
  ExecutionTrace trace = parse_trace(
      "D/leak-1: first\n"
      "D/leak-1: second\n");
  REQUIRE(trace.records.size() == 2);
  CHECK(trace.records[0].sequence < trace.records[1].sequence);
  CHECK(trace.records[0].payload == "first");
  CHECK(trace.records[1].payload == "second");
  CHECK(trace.executed_tags.size() == 1);
}

TEST_CASE("fixture trace file parses with noise ignored") {
  ExecutionTrace trace =
      load_trace(testsupport::fixtures_dir() / "traces" / "small.log");
  CHECK(trace.executed_tags ==
        std::set<std::string>{"leak-1", "leak-2", "leak-3"});
  CHECK(trace.records.size() == 4);
  CHECK(trace.ignored_lines == 3);
  CHECK(trace.records[0].payload == "tz-a");
}

TEST_CASE("bare format parses tab-separated tags") {
  ExecutionTrace trace = load_trace(
      testsupport::fixtures_dir() / "traces" / "bare.log", TraceFormat::Bare);
  CHECK(trace.executed_tags == std::set<std::string>{"leak-2", "leak-9"});
  CHECK(trace.ignored_lines == 1);
}

TEST_CASE("filter partitions the ledger") {
  MutantLedger ledger = ledger_of(4);
  ExecutionTrace trace = parse_trace("D/leak-1: x\nD/leak-2: y\n");
  FilterResult result = filter_executable(ledger, trace);
  CHECK(result.executable == std::set<int>{1, 2});
  CHECK(result.non_executable == std::set<int>{3, 4});
}

TEST_CASE("reported-scale funnel arithmetic holds") {
  MutantLedger ledger = ledger_of(7584);
  std::string lines;
  for (int id = 1; id <= 2026; ++id) {
    lines += "D/leak-" + std::to_string(id) + ": v\n";
  }
  ExecutionTrace trace = parse_trace(lines);
  FilterResult result = filter_executable(ledger, trace);
  CHECK(result.executable.size() == 2026);
  CHECK(result.non_executable.size() == 5558);
}

TEST_CASE("empty trace marks everything non-executable") {
  MutantLedger ledger = ledger_of(3);
  FilterResult result = filter_executable(ledger, parse_trace(""));
  CHECK(result.executable.empty());
  CHECK(result.non_executable.size() == 3);
}

TEST_CASE("unknown trace tags are counted and ignored") {
  MutantLedger ledger = ledger_of(2);
  ExecutionTrace trace = parse_trace("D/leak-1: x\nD/leak-99: y\n");
  FilterResult result = filter_executable(ledger, trace);
  CHECK(result.executable == std::set<int>{1});
  CHECK(result.unknown_tags == 1);
}

TEST_CASE("partition and monotonicity properties hold on random traces") {
  std::mt19937 rng(31);
  for (int round = 0; round < 30; ++round) {
    int count = 1 + static_cast<int>(rng() % 40);
    MutantLedger ledger = ledger_of(count);
    std::string lines;
    ExecutionTrace previous;
    std::size_t previous_executable = 0;
    for (int step = 0; step < 5; ++step) {
      lines += "D/leak-" + std::to_string(1 + rng() % count) + ": v\n";
      ExecutionTrace trace = parse_trace(lines);
      FilterResult result = filter_executable(ledger, trace);
      REQUIRE(result.executable.size() + result.non_executable.size() ==
              static_cast<std::size_t>(count));
      for (int id : result.executable) {
        REQUIRE(result.non_executable.count(id) == 0);
      }
      REQUIRE(result.executable.size() >= previous_executable);
      previous_executable = result.executable.size();
      REQUIRE(result.executable.size() <= ledger.mutants.size());
    }
  }
}

TEST_CASE("execution order is first-occurrence") {
  ExecutionTrace trace = parse_trace(
      "D/leak-3: a\n"
      "D/leak-1: b\n"
      "D/leak-3: c\n"
      "D/leak-2: d\n");
  CHECK(execution_order(trace) == std::vector<int>{3, 1, 2});
  CHECK(execution_order(parse_trace("")).empty());
}

TEST_CASE("source markers appear in record order before their sinks") {
  ExecutionTrace trace = load_trace(testsupport::fixtures_dir() / "traces" /
                                    "pairs_strict.log");
  // leak-src-5 is a record but not an executed tag.
  CHECK(trace.executed_tags ==
        std::set<std::string>{"leak-5", "leak-6", "leak-7"});
  long src_seq = -1;
  long sink_seq = -1;
  for (const TraceRecord& record : trace.records) {
    if (record.tag == "leak-src-5") src_seq = record.sequence;
    if (record.tag == "leak-5") sink_seq = record.sequence;
  }
  REQUIRE(src_seq > 0);
  REQUIRE(sink_seq > 0);
  CHECK(src_seq < sink_seq);
}

TEST_CASE("strict mode requires markers before sinks for taint pairs") {
  MutantLedger ledger = ledger_of(7, PointCategory::TaintPair);
  ExecutionTrace trace = load_trace(testsupport::fixtures_dir() / "traces" /
                                    "pairs_strict.log");
  FilterOptions lenient;
  FilterResult loose = filter_executable(ledger, trace, lenient);
  CHECK(loose.executable == std::set<int>{5, 6, 7});

  FilterOptions strict;
  strict.strict_pairs = true;
  FilterResult tight = filter_executable(ledger, trace, strict);
  // 5 has src-before-sink; 6 has no marker; 7's marker arrives after the
  // sink.
  CHECK(tight.executable == std::set<int>{5});
  CHECK(tight.non_executable == std::set<int>{1, 2, 3, 4, 6, 7});
}

TEST_CASE("merging traces unions tags in argument order") {
  ExecutionTrace a = parse_trace("D/leak-1: x\n");
  ExecutionTrace b = parse_trace("D/leak-2: y\nD/leak-1: z\n");
  ExecutionTrace merged = merge_traces({a, b});
  CHECK(merged.executed_tags == std::set<std::string>{"leak-1", "leak-2"});
  REQUIRE(merged.records.size() == 3);
  CHECK(merged.records[0].tag == "leak-1");
  CHECK(merged.records[1].tag == "leak-2");
  CHECK(merged.records[2].sequence == 3);
  CHECK(execution_order(merged) == std::vector<int>{1, 2});

  // Union grows monotonically with extra traces.
  MutantLedger ledger = ledger_of(3);
  FilterResult one = filter_executable(ledger, a);
  FilterResult two = filter_executable(ledger, merged);
  for (int id : one.executable) {
    CHECK(two.executable.count(id) == 1);
  }
}
