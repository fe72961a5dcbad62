#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "mutbench/classification.hpp"
#include "mutbench/diagnostics.hpp"
#include "mutbench/java_ast.hpp"
#include "mutbench/text_util.hpp"
#include "mutbench/xml_doc.hpp"

namespace mutbench {

enum class UnitKind { Java, XmlLayout, XmlManifest };

std::string_view unit_kind_name(UnitKind kind);
// Classifies a corpus-relative path (.java, layout .xml, other .xml).
UnitKind unit_kind_for_path(const std::string& path);

struct SourceUnit {
  std::string path;  // corpus-relative, '/' separated
  UnitKind kind = UnitKind::Java;
  std::string text;
  LineIndex lines;
  bool parsed_ok = false;
  ParsedJavaFile java;  // valid when kind == Java && parsed_ok
  ParsedXmlFile xml;    // valid for XML kinds when parsed_ok
};

SourceUnit parse_unit(std::string text, UnitKind kind, const std::string& path);

// A byte position inside a unit, with the redundant line/column kept for
// reporting.
struct Anchor {
  int unit = -1;
  std::size_t offset = 0;
  int line = 0;
  int column = 0;
};

enum class CallbackKind { Lifecycle, UiListener, ReceiverOnReceive, XmlDeclared, None };
std::string_view callback_kind_name(CallbackKind kind);

struct ClassDecl {
  int id = -1;
  int unit = -1;
  int parsed_index = -1;  // index into the unit's ParsedJavaFile::classes
  std::string qualified_name;
  std::string simple_name;
  ClassKind kind = ClassKind::Plain;
  std::vector<std::string> extends_types;
  std::vector<std::string> implements_types;
  bool is_anonymous = false;
  int enclosing_method = -1;  // model method id
  int enclosing_class = -1;   // model class id
  std::vector<int> methods;   // model method ids
  std::size_t decl_offset = 0;
  std::size_t body_open = 0;
  std::size_t body_close = 0;

  std::vector<std::string> supertypes() const {
    std::vector<std::string> all = extends_types;
    all.insert(all.end(), implements_types.begin(), implements_types.end());
    return all;
  }
};

struct MethodDecl {
  int id = -1;
  int owner = -1;  // model class id
  int unit = -1;
  int parsed_index = -1;  // index into the unit's ParsedJavaFile::methods
  std::string name;
  int arity = 0;
  std::string params_text;
  Anchor body_entry;
  std::vector<Anchor> statement_anchors;  // first element == body_entry
  CallbackKind callback_kind = CallbackKind::None;
  int lifecycle_order = -1;  // -1 when absent
  std::size_t decl_offset = 0;
  std::size_t body_open = 0;
  std::size_t body_close = 0;
};

enum class RegKind { DynamicReceiver, ListenerAttach, XmlOnclick };
std::string_view reg_kind_name(RegKind kind);

struct RegistrationEdge {
  Anchor site;
  int registrar_method = -1;
  int registered_class = -1;
  RegKind kind = RegKind::DynamicReceiver;
  std::string attach_name;     // call that performed the registration
  std::string receiver_type;   // declared type of the attach receiver, "" if none
};

struct ImplicitEdge {
  Anchor site;
  int caller_method = -1;
  int callee_method = -1;
  std::string invoker;  // e.g. "submit", "runOnUiThread", "start"
};

struct XmlHandler {
  std::string widget_id;
  std::string method_name;
  int unit = -1;
  std::size_t offset = 0;
  int resolved_method = -1;  // -1 when no such method exists in the corpus
};

struct CodeModel {
  std::vector<SourceUnit> units;
  std::vector<ClassDecl> classes;
  std::vector<MethodDecl> methods;
  std::vector<RegistrationEdge> registration_edges;
  std::vector<ImplicitEdge> implicit_edges;
  std::vector<XmlHandler> xml_handlers;
  std::vector<int> entry_points;  // sorted method ids
  std::vector<std::string> skipped_units;
  DiagnosticSink diagnostics;
  int unresolved_calls = 0;
  std::uint64_t fingerprint = 0;  // content hash over (path, text) pairs
  // Layout base name (e.g. "activity_main") -> activity class id, from
  // setContentView(R.layout.<name>) calls.
  std::map<std::string, int> layout_activity;

  const SourceUnit& unit_of(const MethodDecl& m) const {
    return units[static_cast<std::size_t>(m.unit)];
  }
  const ClassDecl& owner_of(const MethodDecl& m) const {
    return classes[static_cast<std::size_t>(m.owner)];
  }
  const JavaMethod& parsed_method(const MethodDecl& m) const {
    return units[static_cast<std::size_t>(m.unit)]
        .java.methods[static_cast<std::size_t>(m.parsed_index)];
  }
  int find_class_by_simple_name(std::string_view name) const;
  int find_method(int class_id, std::string_view name) const;
  // Method whose body span contains the given (unit path, line).
  int method_enclosing_line(const std::string& path, int line) const;
  bool is_entry_point(int method_id) const;
  // True when the class (or an enclosing one) is an anonymous class.
  bool inside_anonymous_class(int class_id) const;
  // Number of broadcast-receiver classes on the enclosing chain, counting
  // the class itself.
  int receiver_nesting_level(int class_id) const;
};

CodeModel build_model(std::vector<SourceUnit> units,
                      const ClassificationTable& table);

// Loads every .java/.xml file under root (sorted, recursive) and builds the
// model. Unparseable units are skipped with a diagnostic.
CodeModel build_model_from_dir(const std::filesystem::path& root,
                               const ClassificationTable& table);

struct CallEdge {
  int caller = -1;
  int callee = -1;
  enum class Kind { Direct, Registration, Implicit } kind = Kind::Direct;
  int unit = -1;
  std::size_t offset = 0;
};

struct CallGraph {
  std::vector<std::vector<CallEdge>> out;  // indexed by caller method id

  const std::vector<CallEdge>& edges_from(int method) const {
    return out[static_cast<std::size_t>(method)];
  }
};

CallGraph call_graph(const CodeModel& model);

std::string dump_model(const CodeModel& model);

}  // namespace mutbench
