#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "mutbench/schemes.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace mutbench;
using testsupport::fixtures_dir;
using testsupport::model_for;
using testsupport::model_for_source;

namespace {

Mip derive(const CodeModel& model, MutationScheme scheme,
           const SchemeOptions& options = {}) {
  return derive_mip(model, scheme, default_data_leak_operator(), options);
}

}  // namespace

TEST_CASE("reachability enumerates the start of every method") {
  CodeModel model = model_for(fixtures_dir() / "corpus_tiny");
  Mip mip = derive(model, MutationScheme::Reachability);
  int expected =
      oracles::count_method_decls_in_dir(fixtures_dir() / "corpus_tiny");
  CHECK(static_cast<int>(mip.points.size()) == expected);
  CHECK(expected == 7);
  for (const InjectionPoint& point : mip.points) {
    CHECK(point.category == PointCategory::PlainMethod);
    const MethodDecl& method =
        model.methods[static_cast<std::size_t>(point.source_method)];
    CHECK(point.source_anchor.offset == method.body_entry.offset);
  }
}

TEST_CASE("reachability size equals method count on every fixture corpus") {
  for (const char* corpus :
       {"corpus", "corpus_tiny", "corpus_cycle", "corpus_nested"}) {
    CodeModel model = model_for(fixtures_dir() / corpus);
    Mip mip = derive(model, MutationScheme::Reachability);
    CHECK(mip.points.size() == model.methods.size());
  }
}

TEST_CASE("android scheme includes a nested-receiver synthesis point") {
  CodeModel model = model_for(fixtures_dir() / "corpus_nested");
  Mip mip = derive(model, MutationScheme::AndroidAbstractions);
  int nested = 0;
  for (const InjectionPoint& point : mip.points) {
    if (point.category == PointCategory::NestedReceiver) {
      ++nested;
      CHECK(point.synth.kind == SynthPlan::Kind::NestedReceiver);
      REQUIRE(point.synth.host_method >= 0);
      const MethodDecl& host =
          model.methods[static_cast<std::size_t>(point.synth.host_method)];
      CHECK(host.name == "onReceive");
    }
  }
  // Default depth is 2: only the outer receiver hosts a new one.
  CHECK(nested == 1);

  SchemeOptions deeper;
  deeper.nested_receiver_depth = 3;
  Mip deep_mip = derive(model, MutationScheme::AndroidAbstractions, deeper);
  int deep_nested = 0;
  for (const InjectionPoint& point : deep_mip.points) {
    if (point.category == PointCategory::NestedReceiver) ++deep_nested;
  }
  CHECK(deep_nested == 2);
}

TEST_CASE("taint split pairs adjacent lifecycle callbacks") {
  CodeModel model = model_for_source(
      "public class A extends Activity {\n"
      "    protected void onStart() { int a = 0; }\n"
      "    protected void onResume() { int b = 0; }\n"
      "}\n",
      "A.java");
  Mip mip = derive(model, MutationScheme::TaintSplit);
  REQUIRE(mip.points.size() == 1);
  const InjectionPoint& point = mip.points[0];
  CHECK(point.category == PointCategory::TaintPair);
  CHECK(model.methods[static_cast<std::size_t>(point.source_method)].name ==
        "onStart");
  CHECK(model.methods[static_cast<std::size_t>(point.sink_method)].name ==
        "onResume");
}

TEST_CASE("taint pair counts follow the combinatorial oracle") {
  const char* three_callbacks =
      "public class A extends Activity {\n"
      "    protected void onStart() { int a = 0; }\n"
      "    protected void onResume() { int b = 0; }\n"
      "    protected void onPause() { int c = 0; }\n"
      "}\n";
  CodeModel model = model_for_source(three_callbacks, "A.java");

  SchemeOptions k1;
  k1.taint_adjacency_k = 1;
  CHECK(static_cast<int>(derive(model, MutationScheme::TaintSplit, k1)
                             .points.size()) ==
        oracles::count_adjacent_pairs(3, 1));
  CHECK(derive(model, MutationScheme::TaintSplit, k1).points.size() == 2);

  SchemeOptions k2;
  k2.taint_adjacency_k = 2;
  CHECK(static_cast<int>(derive(model, MutationScheme::TaintSplit, k2)
                             .points.size()) ==
        oracles::count_adjacent_pairs(3, 2));
  CHECK(derive(model, MutationScheme::TaintSplit, k2).points.size() == 3);
}

TEST_CASE("single lifecycle callback produces no pairs") {
  CodeModel model = model_for_source(
      "public class A extends Activity {\n"
      "    protected void onStart() { int a = 0; }\n"
      "}\n",
      "A.java");
  CHECK(derive(model, MutationScheme::TaintSplit).points.empty());
}

TEST_CASE("taint pairs respect the lifecycle ordering invariant") {
  CodeModel model = model_for(fixtures_dir() / "corpus");
  Mip mip = derive(model, MutationScheme::TaintSplit);
  REQUIRE(mip.points.size() == 3);
  for (const InjectionPoint& point : mip.points) {
    const MethodDecl& source =
        model.methods[static_cast<std::size_t>(point.source_method)];
    const MethodDecl& sink =
        model.methods[static_cast<std::size_t>(point.sink_method)];
    CHECK(source.owner == sink.owner);
    CHECK(source.lifecycle_order < sink.lifecycle_order);
    CHECK(source.id != sink.id);
  }
}

TEST_CASE("android points cover the expected categories") {
  CodeModel model = model_for_source(
      "public class A extends Activity {\n"
      "    protected void onCreate(Bundle b) { int x = 0; }\n"
      "}\n",
      "A.java");
  Mip mip = derive(model, MutationScheme::AndroidAbstractions);
  REQUIRE(mip.points.size() == 1);
  CHECK(mip.points[0].category == PointCategory::LifecycleActivity);

  CodeModel fragment = model_for_source(
      "public class F extends Fragment {\n"
      "    public View onCreateView(LayoutInflater i, ViewGroup c, Bundle s) "
      "{ return null; }\n"
      "}\n",
      "F.java");
  Mip fragment_mip = derive(fragment, MutationScheme::AndroidAbstractions);
  REQUIRE(fragment_mip.points.size() == 1);
  CHECK(fragment_mip.points[0].category == PointCategory::LifecycleFragment);
}

TEST_CASE("missing xml handler becomes a synthesis point") {
  CodeModel model = model_for(fixtures_dir() / "corpus");
  Mip mip = derive(model, MutationScheme::AndroidAbstractions);
  const InjectionPoint* synth = nullptr;
  for (const InjectionPoint& point : mip.points) {
    if (point.synth.kind == SynthPlan::Kind::XmlHandlerMethod) synth = &point;
  }
  REQUIRE(synth != nullptr);
  CHECK(synth->synth.handler_name == "openHelp");
  CHECK(synth->synth.description.find("public void openHelp(View view)") !=
        std::string::npos);
  const ClassDecl& host =
      model.classes[static_cast<std::size_t>(synth->synth.host_class)];
  CHECK(host.simple_name == "MainActivity");
}

TEST_CASE("complex-path points mirror reachability anchors") {
  CodeModel model = model_for(fixtures_dir() / "corpus");
  Mip reach = derive(model, MutationScheme::Reachability);
  Mip complex = derive(model, MutationScheme::ComplexPath);
  REQUIRE(reach.points.size() == complex.points.size());
  for (std::size_t i = 0; i < reach.points.size(); ++i) {
    CHECK(reach.points[i].source_anchor.offset ==
          complex.points[i].source_anchor.offset);
    CHECK(reach.points[i].source_anchor.unit ==
          complex.points[i].source_anchor.unit);
    CHECK(complex.points[i].category == PointCategory::ComplexPath);
  }
}

TEST_CASE("derivation is deterministic") {
  CodeModel model = model_for(fixtures_dir() / "corpus");
  for (MutationScheme scheme : all_schemes()) {
    Mip a = derive(model, scheme);
    Mip b = derive(model, scheme);
    CHECK(dump_mip(a, model) == dump_mip(b, model));
  }
}

TEST_CASE("empty model derives empty profiles") {
  CodeModel model = build_model({}, default_classification_table());
  for (MutationScheme scheme : all_schemes()) {
    CHECK(derive(model, scheme).points.empty());
  }
}

TEST_CASE("complex path rule emits the builder loop") {
  std::string rule = complex_path_rule("dataLeak3", 3);
  CHECK(rule.find("StringBuilder builder3 = new StringBuilder();") !=
        std::string::npos);
  CHECK(rule.find("dataLeak3.charAt(index3)") != std::string::npos);
  CHECK(rule.find("String dataLeak3x = builder3.toString();") !=
        std::string::npos);
}

TEST_CASE("complex path meta-evaluation is the identity") {
  CHECK(complex_path_meta_eval("") == "");
  CHECK(complex_path_meta_eval("abc") == "abc");
  std::mt19937 rng(23);
  for (int round = 0; round < 200; ++round) {
    std::string input;
    int length = static_cast<int>(rng() % 257);
    for (int i = 0; i < length; ++i) {
      input += static_cast<char>(rng() % 256);
    }
    REQUIRE(complex_path_meta_eval(input) == input);
  }
}

TEST_CASE("tiny corpus reachability dump matches the golden file") {
  CodeModel model = model_for(fixtures_dir() / "corpus_tiny");
  Mip mip = derive(model, MutationScheme::Reachability);
  std::string expected =
      testsupport::slurp(fixtures_dir() / "golden" / "mip_reachability_tiny.txt");
  CHECK(dump_mip(mip, model) == expected);
}
