#include "mutbench/code_model.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace mutbench {

std::string_view unit_kind_name(UnitKind kind) {
  switch (kind) {
    case UnitKind::Java:
      return "java";
    case UnitKind::XmlLayout:
      return "xml-layout";
    case UnitKind::XmlManifest:
      return "xml-manifest";
  }
  return "java";
}

UnitKind unit_kind_for_path(const std::string& path) {
  if (ends_with(path, ".java")) return UnitKind::Java;
  if (path.find("layout") != std::string::npos) return UnitKind::XmlLayout;
  return UnitKind::XmlManifest;
}

std::string_view callback_kind_name(CallbackKind kind) {
  switch (kind) {
    case CallbackKind::Lifecycle:
      return "lifecycle";
    case CallbackKind::UiListener:
      return "ui-listener";
    case CallbackKind::ReceiverOnReceive:
      return "receiver-on-receive";
    case CallbackKind::XmlDeclared:
      return "xml-declared";
    case CallbackKind::None:
      return "none";
  }
  return "none";
}

std::string_view reg_kind_name(RegKind kind) {
  switch (kind) {
    case RegKind::DynamicReceiver:
      return "dynamic-receiver";
    case RegKind::ListenerAttach:
      return "listener-attach";
    case RegKind::XmlOnclick:
      return "xml-onclick";
  }
  return "dynamic-receiver";
}

SourceUnit parse_unit(std::string text, UnitKind kind,
                      const std::string& path) {
  SourceUnit unit;
  unit.path = path;
  unit.kind = kind;
  unit.text = std::move(text);
  unit.lines = LineIndex::build(unit.text);
  if (kind == UnitKind::Java) {
    unit.java = parse_java(unit.text, path);
    unit.parsed_ok = unit.java.ok;
  } else {
    unit.xml = parse_xml(unit.text, path);
    unit.parsed_ok = unit.xml.ok;
  }
  return unit;
}

namespace {

const char* kReceiverCallback = "onReceive";

struct Builder {
  CodeModel& model;
  const ClassificationTable& table;

  // (unit index, parsed class index) -> model class id, same for methods.
  std::map<std::pair<int, int>, int> class_ids;
  std::map<std::pair<int, int>, int> method_ids;

  Anchor make_anchor(int unit, std::size_t offset) const {
    const SourceUnit& u = model.units[static_cast<std::size_t>(unit)];
    auto [line, column] = u.lines.locate(offset);
    return Anchor{unit, offset, line, column};
  }

  void import_units() {
    for (int ui = 0; ui < static_cast<int>(model.units.size()); ++ui) {
      SourceUnit& unit = model.units[static_cast<std::size_t>(ui)];
      if (!unit.parsed_ok || unit.kind != UnitKind::Java) continue;
      for (const JavaClass& pc : unit.java.classes) {
        ClassDecl decl;
        decl.id = static_cast<int>(model.classes.size());
        decl.unit = ui;
        decl.parsed_index = pc.id;
        decl.simple_name = pc.name;
        decl.extends_types = pc.extends_types;
        decl.implements_types = pc.implements_types;
        decl.is_anonymous = pc.is_anonymous;
        decl.decl_offset = pc.decl_offset;
        decl.body_open = pc.body_open;
        decl.body_close = pc.body_close;
        class_ids[{ui, pc.id}] = decl.id;
        model.classes.push_back(std::move(decl));
      }
      for (const JavaMethod& pm : unit.java.methods) {
        MethodDecl decl;
        decl.id = static_cast<int>(model.methods.size());
        decl.unit = ui;
        decl.parsed_index = pm.id;
        decl.owner = class_ids.at({ui, pm.owner});
        decl.name = pm.name;
        decl.arity = static_cast<int>(pm.params.size());
        decl.params_text = pm.params_text;
        decl.decl_offset = pm.decl_offset;
        decl.body_open = pm.body_open;
        decl.body_close = pm.body_close;
        decl.body_entry = make_anchor(ui, pm.body_entry);
        decl.statement_anchors.push_back(decl.body_entry);
        for (std::size_t anchor : pm.statement_anchors) {
          decl.statement_anchors.push_back(make_anchor(ui, anchor));
        }
        method_ids[{ui, pm.id}] = decl.id;
        model.methods.push_back(std::move(decl));
      }
      // Wire up cross references.
      for (const JavaClass& pc : unit.java.classes) {
        ClassDecl& decl =
            model.classes[static_cast<std::size_t>(class_ids.at({ui, pc.id}))];
        if (pc.enclosing_class >= 0) {
          decl.enclosing_class = class_ids.at({ui, pc.enclosing_class});
        }
        if (pc.enclosing_method >= 0) {
          decl.enclosing_method = method_ids.at({ui, pc.enclosing_method});
        }
        for (int m : pc.methods) {
          decl.methods.push_back(method_ids.at({ui, m}));
        }
      }
      // Qualified names: package prefix from the path is omitted on purpose;
      // the corpus-relative path plus the simple name is unambiguous enough
      // for reporting, and nested names use '$'.
      for (const JavaClass& pc : unit.java.classes) {
        ClassDecl& decl =
            model.classes[static_cast<std::size_t>(class_ids.at({ui, pc.id}))];
        std::string name = decl.simple_name;
        int enclosing = decl.enclosing_class;
        while (enclosing >= 0) {
          const ClassDecl& outer =
              model.classes[static_cast<std::size_t>(enclosing)];
          name = outer.simple_name + "$" + name;
          enclosing = outer.enclosing_class;
        }
        decl.qualified_name = name;
      }
    }
  }

  // Nearest-ancestor-first class kind derivation over the supertype closure.
  void classify_classes() {
    for (ClassDecl& cls : model.classes) {
      cls.kind = derive_kind(cls.id, 0);
    }
  }

  ClassKind derive_kind(int class_id, int guard) {
    if (guard > 16) return ClassKind::Plain;
    const ClassDecl& cls = model.classes[static_cast<std::size_t>(class_id)];
    for (const std::string& super : cls.supertypes()) {
      if (auto kind = table.kind_for_supertype(super)) return *kind;
    }
    // Listener interfaces imply listener-impl when nothing else matched.
    for (const std::string& super : cls.supertypes()) {
      for (const auto& entry : table.listener_callbacks) {
        if (type_name_matches(super, entry.owner)) {
          return ClassKind::ListenerImpl;
        }
      }
    }
    // Follow supertypes declared in the corpus itself.
    for (const std::string& super : cls.supertypes()) {
      int parent = find_class(super);
      if (parent >= 0 && parent != class_id) {
        ClassKind kind = derive_kind(parent, guard + 1);
        if (kind != ClassKind::Plain) return kind;
      }
    }
    return ClassKind::Plain;
  }

  int find_class(std::string_view name) const {
    std::string simple(name);
    std::size_t dot = simple.rfind('.');
    if (dot != std::string::npos) simple = simple.substr(dot + 1);
    for (const ClassDecl& cls : model.classes) {
      if (!cls.is_anonymous && cls.simple_name == simple) return cls.id;
    }
    return -1;
  }

  // The supertype closure of a class as written names, following corpus
  // classes transitively.
  std::vector<std::string> supertype_closure(int class_id) const {
    std::vector<std::string> out;
    std::set<int> seen;
    std::vector<int> work = {class_id};
    while (!work.empty()) {
      int current = work.back();
      work.pop_back();
      if (!seen.insert(current).second) continue;
      const ClassDecl& cls = model.classes[static_cast<std::size_t>(current)];
      for (const std::string& super : cls.supertypes()) {
        out.push_back(super);
        int parent = find_class(super);
        if (parent >= 0) work.push_back(parent);
      }
    }
    return out;
  }

  void classify_methods() {
    for (MethodDecl& method : model.methods) {
      const ClassDecl& owner =
          model.classes[static_cast<std::size_t>(method.owner)];
      if (const LifecycleEntry* entry =
              table.lifecycle_for(owner.kind, method.name)) {
        method.callback_kind = CallbackKind::Lifecycle;
        method.lifecycle_order = entry->order;
        continue;
      }
      if (owner.kind == ClassKind::BroadcastReceiver &&
          method.name == kReceiverCallback) {
        method.callback_kind = CallbackKind::ReceiverOnReceive;
        continue;
      }
      bool listener = false;
      if (table.listener_for(owner.simple_name, method.name) != nullptr) {
        listener = true;
      } else {
        for (const std::string& super : supertype_closure(method.owner)) {
          if (table.listener_for(super, method.name) != nullptr) {
            listener = true;
            break;
          }
        }
      }
      if (listener) {
        method.callback_kind = CallbackKind::UiListener;
      }
    }
  }

  void scan_xml_units() {
    for (int ui = 0; ui < static_cast<int>(model.units.size()); ++ui) {
      const SourceUnit& unit = model.units[static_cast<std::size_t>(ui)];
      if (!unit.parsed_ok || unit.kind != UnitKind::XmlLayout) continue;
      int widget_counter = 0;
      for (const XmlElement& element : unit.xml.elements) {
        const XmlAttribute* on_click =
            unit.xml.find_attribute(element, "android:onClick");
        if (on_click == nullptr) continue;
        XmlHandler handler;
        handler.method_name = on_click->value;
        handler.unit = ui;
        handler.offset = on_click->offset;
        const XmlAttribute* id =
            unit.xml.find_attribute(element, "android:id");
        if (id != nullptr) {
          std::string value = id->value;
          std::size_t slash = value.rfind('/');
          handler.widget_id =
              slash == std::string::npos ? value : value.substr(slash + 1);
        } else {
          handler.widget_id =
              "widget" + std::to_string(++widget_counter);
        }
        model.xml_handlers.push_back(std::move(handler));
      }
    }
  }

  void resolve_xml_handlers() {
    for (XmlHandler& handler : model.xml_handlers) {
      for (MethodDecl& method : model.methods) {
        const ClassDecl& owner =
            model.classes[static_cast<std::size_t>(method.owner)];
        if (owner.is_anonymous) continue;
        if (method.name == handler.method_name) {
          handler.resolved_method = method.id;
          if (method.callback_kind == CallbackKind::None) {
            method.callback_kind = CallbackKind::XmlDeclared;
          }
          break;
        }
      }
      if (handler.resolved_method < 0) {
        const SourceUnit& unit =
            model.units[static_cast<std::size_t>(handler.unit)];
        auto [line, column] = unit.lines.locate(handler.offset);
        model.diagnostics.warning(
            unit.path, line, column,
            "XML handler '" + handler.method_name +
                "' does not resolve to any method in the corpus");
      }
    }
  }

  // Local variable resolution within one parsed method: name -> binding.
  const JavaLocalBinding* find_binding(const JavaMethod& pm,
                                       std::string_view name) const {
    const JavaLocalBinding* found = nullptr;
    for (const JavaLocalBinding& binding : pm.locals) {
      if (binding.name == name) found = &binding;  // last one wins
    }
    return found;
  }

  int resolve_arg_class(int unit, const JavaMethod& pm,
                        const JavaArg& arg) const {
    if (arg.kind == ArgKind::AnonClass) {
      return class_ids.at({unit, arg.anon_class});
    }
    if (arg.kind == ArgKind::NewInstance) {
      return find_class(arg.text);
    }
    if (arg.kind == ArgKind::Var) {
      const JavaLocalBinding* binding = find_binding(pm, arg.text);
      if (binding == nullptr) return -1;
      if (binding->anon_class >= 0) {
        return class_ids.at({unit, binding->anon_class});
      }
      if (!binding->new_type.empty()) return find_class(binding->new_type);
      if (!binding->type.empty()) return find_class(binding->type);
    }
    return -1;
  }

  void scan_registrations_and_calls() {
    for (const MethodDecl& method : model.methods) {
      const SourceUnit& unit =
          model.units[static_cast<std::size_t>(method.unit)];
      const JavaMethod& pm = unit.java.methods[
          static_cast<std::size_t>(method.parsed_index)];
      for (const JavaCallSite& call : pm.calls) {
        process_call(method, unit, pm, call);
      }
    }
  }

  void process_call(const MethodDecl& method, const SourceUnit& unit,
                    const JavaMethod& pm, const JavaCallSite& call) {
    // Dynamic receiver registration.
    for (const std::string& reg : table.receiver_register_methods) {
      if (call.name == reg && !call.args.empty()) {
        int registered = resolve_arg_class(method.unit, pm, call.args[0]);
        if (registered >= 0) {
          RegistrationEdge edge;
          edge.site = make_anchor(method.unit, call.offset);
          edge.registrar_method = method.id;
          edge.registered_class = registered;
          edge.kind = RegKind::DynamicReceiver;
          edge.attach_name = call.name;
          model.registration_edges.push_back(edge);
        } else {
          ++model.unresolved_calls;
        }
        return;
      }
    }
    // Listener attachment.
    if (table.is_listener_attach(call.name) && !call.args.empty()) {
      int registered = resolve_arg_class(method.unit, pm, call.args[0]);
      if (registered >= 0) {
        RegistrationEdge edge;
        edge.site = make_anchor(method.unit, call.offset);
        edge.registrar_method = method.id;
        edge.registered_class = registered;
        edge.kind = RegKind::ListenerAttach;
        edge.attach_name = call.name;
        if (!call.receiver.empty()) {
          const JavaLocalBinding* binding =
              find_binding(pm, call.receiver);
          if (binding != nullptr && !binding->type.empty()) {
            edge.receiver_type = binding->type;
          }
        }
        model.registration_edges.push_back(edge);
      } else {
        ++model.unresolved_calls;
      }
      return;
    }
    // Runnable hand-off.
    if (table.is_implicit_invoker(call.name) && !call.args.empty()) {
      int runnable = resolve_arg_class(method.unit, pm, call.args[0]);
      if (runnable >= 0) {
        int run = model.find_method(runnable, "run");
        if (run >= 0) {
          ImplicitEdge edge;
          edge.site = make_anchor(method.unit, call.offset);
          edge.caller_method = method.id;
          edge.callee_method = run;
          edge.invoker = call.name;
          model.implicit_edges.push_back(edge);
          return;
        }
      }
      ++model.unresolved_calls;
      return;
    }
    // Thread start: `t.start()` where t = new Thread(runnable).
    if (call.name == table.thread_start_method && !call.receiver.empty()) {
      const JavaLocalBinding* binding = find_binding(pm, call.receiver);
      if (binding != nullptr &&
          type_name_matches(binding->new_type, table.thread_type)) {
        for (const std::string& var : binding->ctor_arg_vars) {
          const JavaLocalBinding* runnable_binding = find_binding(pm, var);
          if (runnable_binding == nullptr) continue;
          int runnable = -1;
          if (runnable_binding->anon_class >= 0) {
            runnable = class_ids.at({method.unit,
                                     runnable_binding->anon_class});
          } else if (!runnable_binding->new_type.empty()) {
            runnable = find_class(runnable_binding->new_type);
          }
          if (runnable >= 0) {
            int run = model.find_method(runnable, "run");
            if (run >= 0) {
              ImplicitEdge edge;
              edge.site = make_anchor(method.unit, call.offset);
              edge.caller_method = method.id;
              edge.callee_method = run;
              edge.invoker = "start";
              model.implicit_edges.push_back(edge);
              return;
            }
          }
        }
      }
      return;
    }
    // setContentView(R.layout.<name>) establishes the layout -> activity
    // link used when synthesizing missing XML handlers.
    if (call.name == "setContentView" && !call.args.empty()) {
      const std::string& text = call.args[0].text;
      const std::string prefix = "R.layout.";
      std::size_t pos = text.find(prefix);
      if (pos != std::string::npos) {
        std::string layout = trim(text.substr(pos + prefix.size()));
        const ClassDecl& owner =
            model.classes[static_cast<std::size_t>(method.owner)];
        if (owner.kind == ClassKind::Activity &&
            model.layout_activity.find(layout) ==
                model.layout_activity.end()) {
          model.layout_activity[layout] = owner.id;
        }
      }
      return;
    }
  }

  void compute_entry_points() {
    std::set<int> entries;
    for (const MethodDecl& method : model.methods) {
      if (method.callback_kind != CallbackKind::None) {
        entries.insert(method.id);
      }
    }
    for (const RegistrationEdge& edge : model.registration_edges) {
      const ClassDecl& cls =
          model.classes[static_cast<std::size_t>(edge.registered_class)];
      for (int m : cls.methods) {
        const MethodDecl& method = model.methods[static_cast<std::size_t>(m)];
        if (method.callback_kind != CallbackKind::None) {
          entries.insert(m);
        }
      }
    }
    model.entry_points.assign(entries.begin(), entries.end());
  }
};

}  // namespace

int CodeModel::find_class_by_simple_name(std::string_view name) const {
  for (const ClassDecl& cls : classes) {
    if (!cls.is_anonymous && cls.simple_name == name) return cls.id;
  }
  return -1;
}

int CodeModel::find_method(int class_id, std::string_view name) const {
  if (class_id < 0) return -1;
  const ClassDecl& cls = classes[static_cast<std::size_t>(class_id)];
  for (int m : cls.methods) {
    if (methods[static_cast<std::size_t>(m)].name == name) return m;
  }
  return -1;
}

int CodeModel::method_enclosing_line(const std::string& path,
                                     int line) const {
  int best = -1;
  std::size_t best_span = 0;
  for (const MethodDecl& method : methods) {
    const SourceUnit& unit = units[static_cast<std::size_t>(method.unit)];
    if (unit.path != path) continue;
    auto [open_line, open_col] = unit.lines.locate(method.body_open);
    auto [close_line, close_col] = unit.lines.locate(method.body_close);
    (void)open_col;
    (void)close_col;
    if (line < open_line || line > close_line) continue;
    std::size_t span = method.body_close - method.body_open;
    if (best < 0 || span < best_span) {
      best = method.id;
      best_span = span;
    }
  }
  return best;
}

bool CodeModel::is_entry_point(int method_id) const {
  return std::binary_search(entry_points.begin(), entry_points.end(),
                            method_id);
}

bool CodeModel::inside_anonymous_class(int class_id) const {
  int current = class_id;
  int guard = 0;
  while (current >= 0 && guard++ < 32) {
    const ClassDecl& cls = classes[static_cast<std::size_t>(current)];
    if (cls.is_anonymous) return true;
    current = cls.enclosing_class;
  }
  return false;
}

int CodeModel::receiver_nesting_level(int class_id) const {
  int level = 0;
  int current = class_id;
  int guard = 0;
  while (current >= 0 && guard++ < 32) {
    const ClassDecl& cls = classes[static_cast<std::size_t>(current)];
    if (cls.kind == ClassKind::BroadcastReceiver) ++level;
    if (cls.enclosing_method >= 0) {
      current = methods[static_cast<std::size_t>(cls.enclosing_method)].owner;
    } else {
      current = cls.enclosing_class;
    }
  }
  return level;
}

CodeModel build_model(std::vector<SourceUnit> units,
                      const ClassificationTable& table) {
  CodeModel model;
  // Deterministic unit order; also fingerprints the corpus.
  std::sort(units.begin(), units.end(),
            [](const SourceUnit& a, const SourceUnit& b) {
              return a.path < b.path;
            });
  std::string digest;
  for (SourceUnit& unit : units) {
    digest += unit.path;
    digest += '\0';
    digest += to_hex(fnv1a64(unit.text));
    digest += '\n';
    if (!unit.parsed_ok) {
      const Diagnostic& err =
          unit.kind == UnitKind::Java ? unit.java.error : unit.xml.error;
      model.diagnostics.error(err.file, err.line, err.column, err.message);
      model.skipped_units.push_back(unit.path);
    }
  }
  model.fingerprint = fnv1a64(digest);
  model.units = std::move(units);

  Builder builder{model, table};
  builder.import_units();
  builder.classify_classes();
  builder.classify_methods();
  builder.scan_xml_units();
  builder.scan_registrations_and_calls();
  builder.resolve_xml_handlers();
  builder.compute_entry_points();
  return model;
}

CodeModel build_model_from_dir(const std::filesystem::path& root,
                               const ClassificationTable& table) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  if (fs::exists(root)) {
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
      if (!entry.is_regular_file()) continue;
      std::string ext = entry.path().extension().string();
      if (ext == ".java" || ext == ".xml") files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<SourceUnit> units;
  units.reserve(files.size());
  for (const fs::path& file : files) {
    std::string relative = fs::relative(file, root).generic_string();
    units.push_back(
        parse_unit(read_file(file), unit_kind_for_path(relative), relative));
  }
  return build_model(std::move(units), table);
}

CallGraph call_graph(const CodeModel& model) {
  CallGraph graph;
  graph.out.resize(model.methods.size());

  auto add_edge = [&](int caller, int callee, CallEdge::Kind kind, int unit,
                      std::size_t offset) {
    if (caller < 0 || callee < 0) return;
    graph.out[static_cast<std::size_t>(caller)].push_back(
        CallEdge{caller, callee, kind, unit, offset});
  };

  // Direct calls, resolved with local bindings and simple name lookup.
  for (const MethodDecl& method : model.methods) {
    const SourceUnit& unit = model.units[static_cast<std::size_t>(method.unit)];
    const JavaMethod& pm =
        unit.java.methods[static_cast<std::size_t>(method.parsed_index)];
    for (const JavaCallSite& call : pm.calls) {
      int callee = -1;
      if (call.receiver.empty() || call.receiver == "this") {
        // Same class, then lexically enclosing classes.
        int cls = method.owner;
        int guard = 0;
        while (cls >= 0 && guard++ < 32) {
          callee = model.find_method(cls, call.name);
          if (callee >= 0) break;
          const ClassDecl& decl = model.classes[static_cast<std::size_t>(cls)];
          if (decl.enclosing_method >= 0) {
            cls = model
                      .methods[static_cast<std::size_t>(decl.enclosing_method)]
                      .owner;
          } else {
            cls = decl.enclosing_class;
          }
        }
      } else if (!call.receiver_new_type.empty()) {
        int cls = model.find_class_by_simple_name(call.receiver_new_type);
        callee = model.find_method(cls, call.name);
      } else if (call.receiver.find('.') == std::string::npos) {
        // Local variable with a corpus type, or a corpus class name.
        const JavaLocalBinding* binding = nullptr;
        for (const JavaLocalBinding& b : pm.locals) {
          if (b.name == call.receiver) binding = &b;
        }
        if (binding != nullptr) {
          std::string type =
              !binding->new_type.empty() ? binding->new_type : binding->type;
          if (!type.empty()) {
            int cls = model.find_class_by_simple_name(type);
            callee = model.find_method(cls, call.name);
          }
        } else {
          int cls = model.find_class_by_simple_name(call.receiver);
          callee = model.find_method(cls, call.name);
        }
      }
      if (callee >= 0) {
        add_edge(method.id, callee, CallEdge::Kind::Direct, method.unit,
                 call.offset);
      }
    }
  }

  for (const RegistrationEdge& edge : model.registration_edges) {
    const ClassDecl& cls =
        model.classes[static_cast<std::size_t>(edge.registered_class)];
    for (int m : cls.methods) {
      const MethodDecl& method = model.methods[static_cast<std::size_t>(m)];
      if (method.callback_kind != CallbackKind::None) {
        add_edge(edge.registrar_method, m, CallEdge::Kind::Registration,
                 edge.site.unit, edge.site.offset);
      }
    }
  }

  for (const ImplicitEdge& edge : model.implicit_edges) {
    add_edge(edge.caller_method, edge.callee_method, CallEdge::Kind::Implicit,
             edge.site.unit, edge.site.offset);
  }

  for (auto& edges : graph.out) {
    std::sort(edges.begin(), edges.end(),
              [&](const CallEdge& a, const CallEdge& b) {
                const std::string& pa =
                    model.units[static_cast<std::size_t>(a.unit)].path;
                const std::string& pb =
                    model.units[static_cast<std::size_t>(b.unit)].path;
                if (pa != pb) return pa < pb;
                if (a.offset != b.offset) return a.offset < b.offset;
                return a.callee < b.callee;
              });
    edges.erase(std::unique(edges.begin(), edges.end(),
                            [](const CallEdge& a, const CallEdge& b) {
                              return a.caller == b.caller &&
                                     a.callee == b.callee && a.kind == b.kind;
                            }),
                edges.end());
  }
  return graph;
}

std::string dump_model(const CodeModel& model) {
  std::ostringstream out;
  out << "units " << model.units.size() << " classes " << model.classes.size()
      << " methods " << model.methods.size() << "\n";
  for (const ClassDecl& cls : model.classes) {
    out << "class " << cls.id << " " << cls.qualified_name << " kind="
        << class_kind_name(cls.kind)
        << (cls.is_anonymous ? " anonymous" : "") << " unit="
        << model.units[static_cast<std::size_t>(cls.unit)].path << "\n";
  }
  for (const MethodDecl& method : model.methods) {
    out << "method " << method.id << " "
        << model.classes[static_cast<std::size_t>(method.owner)].qualified_name
        << "." << method.name << "/" << method.arity
        << " kind=" << callback_kind_name(method.callback_kind);
    if (method.lifecycle_order >= 0) {
      out << " order=" << method.lifecycle_order;
    }
    out << " entry=" << method.body_entry.line << ":"
        << method.body_entry.column << "\n";
  }
  for (const RegistrationEdge& edge : model.registration_edges) {
    out << "registration " << reg_kind_name(edge.kind) << " registrar="
        << edge.registrar_method << " class=" << edge.registered_class
        << " site=" << edge.site.line << ":" << edge.site.column << "\n";
  }
  for (const ImplicitEdge& edge : model.implicit_edges) {
    out << "implicit " << edge.invoker << " caller=" << edge.caller_method
        << " callee=" << edge.callee_method << "\n";
  }
  for (const XmlHandler& handler : model.xml_handlers) {
    out << "xml-handler " << handler.widget_id << " -> "
        << handler.method_name << " resolved=" << handler.resolved_method
        << "\n";
  }
  out << "entry-points";
  for (int m : model.entry_points) out << " " << m;
  out << "\n";
  return out.str();
}

}  // namespace mutbench
