#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "mutbench/code_model.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace mutbench;
using testsupport::fixtures_dir;
using testsupport::model_for;
using testsupport::model_for_source;

TEST_CASE("empty class parses to one class and no methods") {
  SourceUnit unit = parse_unit("class A {}", UnitKind::Java, "A.java");
  REQUIRE(unit.parsed_ok);
  CHECK(unit.java.classes.size() == 1);
  CHECK(unit.java.methods.empty());
  CHECK(unit.text == "class A {}");
}

TEST_CASE("activity with onCreate classifies as lifecycle") {
  CodeModel model = model_for_source(
      "public class MainActivity extends Activity {\n"
      "    protected void onCreate(Bundle b) {\n"
      "        int x = 1;\n"
      "    }\n"
      "}\n",
      "MainActivity.java");
  REQUIRE(model.classes.size() == 1);
  CHECK(model.classes[0].kind == ClassKind::Activity);
  REQUIRE(model.methods.size() == 1);
  CHECK(model.methods[0].callback_kind == CallbackKind::Lifecycle);
  CHECK(model.methods[0].lifecycle_order == 1);
}

TEST_CASE("layout onClick attribute lands in the handler map") {
  CodeModel model = model_for_source(
      "<?xml version=\"1.0\"?>\n"
      "<LinearLayout xmlns:android=\"http://x\">\n"
      "  <Button android:id=\"@+id/b1\" android:onClick=\"sendMessage\" />\n"
      "</LinearLayout>\n",
      "res/layout/main.xml");
  REQUIRE(model.xml_handlers.size() == 1);
  CHECK(model.xml_handlers[0].widget_id == "b1");
  CHECK(model.xml_handlers[0].method_name == "sendMessage");
  CHECK(model.xml_handlers[0].resolved_method == -1);
  // Unresolvable handler is a warning, not an error.
  CHECK(model.diagnostics.count(Severity::Warning) == 1);
  CHECK(model.diagnostics.count(Severity::Error) == 0);
}

TEST_CASE("nested receiver fixture yields two anonymous receiver classes") {
  CodeModel model = model_for(fixtures_dir() / "corpus_nested");
  int anonymous_receivers = 0;
  for (const ClassDecl& cls : model.classes) {
    if (cls.is_anonymous && cls.kind == ClassKind::BroadcastReceiver) {
      ++anonymous_receivers;
    }
  }
  CHECK(anonymous_receivers == 2);

  std::vector<const RegistrationEdge*> receiver_edges;
  for (const RegistrationEdge& edge : model.registration_edges) {
    if (edge.kind == RegKind::DynamicReceiver) receiver_edges.push_back(&edge);
  }
  REQUIRE(receiver_edges.size() == 2);

  // One of the two registrations happens inside the outer receiver's
  // onReceive; its site must lie within that method's body span.
  const RegistrationEdge* inner_edge = nullptr;
  for (const RegistrationEdge* edge : receiver_edges) {
    const MethodDecl& registrar =
        model.methods[static_cast<std::size_t>(edge->registrar_method)];
    if (registrar.callback_kind == CallbackKind::ReceiverOnReceive) {
      inner_edge = edge;
    }
  }
  REQUIRE(inner_edge != nullptr);
  const MethodDecl& outer_on_receive =
      model.methods[static_cast<std::size_t>(inner_edge->registrar_method)];
  CHECK(inner_edge->site.offset > outer_on_receive.body_open);
  CHECK(inner_edge->site.offset < outer_on_receive.body_close);
}

TEST_CASE("zero units build an empty model") {
  CodeModel model = build_model({}, default_classification_table());
  CHECK(model.units.empty());
  CHECK(model.methods.empty());
  CHECK(model.entry_points.empty());
}

TEST_CASE("tiny corpus reports exactly the scanner-counted methods") {
  CodeModel model = model_for(fixtures_dir() / "corpus_tiny");
  int expected =
      oracles::count_method_decls_in_dir(fixtures_dir() / "corpus_tiny");
  CHECK(expected == 7);
  CHECK(static_cast<int>(model.methods.size()) == expected);
}

TEST_CASE("call graph contains transitive chains") {
  CodeModel model = model_for_source(
      "class Chain {\n"
      "    void a() { b(); }\n"
      "    void b() { c(); }\n"
      "    void c() { int x = 0; }\n"
      "}\n",
      "Chain.java");
  CallGraph graph = call_graph(model);
  auto has_edge = [&](const char* from, const char* to) {
    for (const MethodDecl& method : model.methods) {
      if (method.name != from) continue;
      for (const CallEdge& edge : graph.edges_from(method.id)) {
        if (model.methods[static_cast<std::size_t>(edge.callee)].name == to) {
          return true;
        }
      }
    }
    return false;
  };
  CHECK(has_edge("a", "b"));
  CHECK(has_edge("b", "c"));
  CHECK_FALSE(has_edge("a", "c"));
}

TEST_CASE("listener registration creates registrar-to-callback edge") {
  CodeModel model = model_for_source(
      "public class A extends Activity {\n"
      "    protected void onCreate(Bundle b) {\n"
      "        Button button = findViewById(R.id.x);\n"
      "        button.setOnClickListener(new View.OnClickListener() {\n"
      "            public void onClick(View v) { int y = 0; }\n"
      "        });\n"
      "    }\n"
      "}\n",
      "A.java");
  CallGraph graph = call_graph(model);
  int on_create = -1;
  int on_click = -1;
  for (const MethodDecl& method : model.methods) {
    if (method.name == "onCreate") on_create = method.id;
    if (method.name == "onClick") on_click = method.id;
  }
  REQUIRE(on_create >= 0);
  REQUIRE(on_click >= 0);
  bool found = false;
  for (const CallEdge& edge : graph.edges_from(on_create)) {
    if (edge.callee == on_click &&
        edge.kind == CallEdge::Kind::Registration) {
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("cyclic corpus keeps the cycle and terminates") {
  CodeModel model = model_for(fixtures_dir() / "corpus_cycle");
  CallGraph graph = call_graph(model);
  int step_a = -1;
  int step_b = -1;
  for (const MethodDecl& method : model.methods) {
    if (method.name == "stepA") step_a = method.id;
    if (method.name == "stepB") step_b = method.id;
  }
  REQUIRE(step_a >= 0);
  REQUIRE(step_b >= 0);
  auto edge_between = [&](int from, int to) {
    for (const CallEdge& edge : graph.edges_from(from)) {
      if (edge.callee == to) return true;
    }
    return false;
  };
  CHECK(edge_between(step_a, step_b));
  CHECK(edge_between(step_b, step_a));
}

TEST_CASE("unmodified units render byte-identically") {
  CodeModel model = model_for(fixtures_dir() / "corpus");
  for (const SourceUnit& unit : model.units) {
    std::filesystem::path original = fixtures_dir() / "corpus" / unit.path;
    CHECK(unit.text == testsupport::slurp(original));
  }
}

TEST_CASE("model construction is deterministic") {
  CodeModel a = model_for(fixtures_dir() / "corpus");
  CodeModel b = model_for(fixtures_dir() / "corpus");
  CHECK(dump_model(a) == dump_model(b));
  CHECK(a.fingerprint == b.fingerprint);
}

TEST_CASE("lifecycle order is strictly increasing over the core callbacks") {
  const ClassificationTable table = default_classification_table();
  const char* sequence[] = {"onCreate", "onStart",  "onResume",
                            "onPause",  "onStop",   "onDestroy"};
  int previous = -1;
  for (const char* name : sequence) {
    const LifecycleEntry* entry = table.lifecycle_for(ClassKind::Activity, name);
    REQUIRE(entry != nullptr);
    CHECK(entry->order > previous);
    previous = entry->order;
  }
}

TEST_CASE("every registration edge resolves to a parsed class") {
  CodeModel model = model_for(fixtures_dir() / "corpus");
  REQUIRE_FALSE(model.registration_edges.empty());
  for (const RegistrationEdge& edge : model.registration_edges) {
    REQUIRE(edge.registered_class >= 0);
    REQUIRE(edge.registered_class < static_cast<int>(model.classes.size()));
  }
}

TEST_CASE("bad units are skipped with diagnostics and the rest survive") {
  CodeModel model = model_for(fixtures_dir() / "bad");
  CHECK(model.skipped_units.size() == 2);  // Broken.java, broken_layout.xml
  CHECK(model.diagnostics.count(Severity::Error) == 2);
  // Fine.java still contributes.
  CHECK(model.methods.size() == 1);
  for (const Diagnostic& diagnostic : model.diagnostics.entries()) {
    if (diagnostic.severity != Severity::Error) continue;
    CHECK(diagnostic.line > 0);
    CHECK(diagnostic.column > 0);
  }
}

TEST_CASE("anonymous classes carry their enclosing method") {
  CodeModel model = model_for(fixtures_dir() / "corpus");
  for (const ClassDecl& cls : model.classes) {
    if (cls.is_anonymous) {
      CHECK(cls.enclosing_method >= 0);
    }
  }
}

TEST_CASE("fixture entry points cover the expected callback kinds") {
  CodeModel model = model_for(fixtures_dir() / "corpus");
  bool lifecycle = false;
  bool xml_handler = false;
  bool listener = false;
  for (int id : model.entry_points) {
    const MethodDecl& method = model.methods[static_cast<std::size_t>(id)];
    if (method.callback_kind == CallbackKind::Lifecycle) lifecycle = true;
    if (method.callback_kind == CallbackKind::XmlDeclared) xml_handler = true;
    if (method.callback_kind == CallbackKind::UiListener) listener = true;
  }
  CHECK(lifecycle);
  CHECK(xml_handler);
  CHECK(listener);
}
