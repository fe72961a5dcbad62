#include "mutbench/analyzer.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "mutbench/text_util.hpp"

namespace mutbench {

namespace {

struct SinkSignature {
  std::string cls;
  std::string method;
  std::string original;
};

SinkSignature split_signature(const std::string& signature) {
  std::string stripped = signature;
  if (ends_with(stripped, "()")) {
    stripped = stripped.substr(0, stripped.size() - 2);
  }
  SinkSignature out;
  out.original = signature;
  std::size_t dot = stripped.rfind('.');
  if (dot == std::string::npos) {
    out.method = stripped;
  } else {
    out.cls = stripped.substr(0, dot);
    out.method = stripped.substr(dot + 1);
  }
  return out;
}

bool statement_matches(const std::string& stmt, const SinkSignature& sig) {
  if (!sig.cls.empty() && stmt.find(sig.cls) == std::string::npos) {
    return false;
  }
  return stmt.find("." + sig.method + "(") != std::string::npos ||
         starts_with(stmt, sig.method + "(");
}

std::vector<std::string> identifiers_in(const std::string& text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$') {
      std::size_t start = i;
      while (i < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[i])) ||
              text[i] == '_' || text[i] == '$')) {
        ++i;
      }
      out.push_back(text.substr(start, i - start));
      continue;
    }
    if (c == '"') {
      ++i;
      while (i < text.size() && text[i] != '"') {
        if (text[i] == '\\') ++i;
        ++i;
      }
      if (i < text.size()) ++i;
      continue;
    }
    ++i;
  }
  return out;
}

// Balanced argument slice following the first `.method(` of `sig` in stmt.
std::string sink_args_slice(const std::string& stmt, const SinkSignature& sig) {
  std::string needle = "." + sig.method + "(";
  std::size_t at = stmt.find(needle);
  std::size_t open;
  if (at == std::string::npos) {
    if (!starts_with(stmt, sig.method + "(")) return "";
    open = sig.method.size();
  } else {
    open = at + needle.size() - 1;
  }
  int depth = 0;
  for (std::size_t i = open; i < stmt.size(); ++i) {
    if (stmt[i] == '(') ++depth;
    if (stmt[i] == ')') {
      --depth;
      if (depth == 0) {
        return stmt.substr(open + 1, i - open - 1);
      }
    }
  }
  return "";
}

struct SlotTaint {
  int method = -1;  // assigning method
  std::string origin;
};

struct Reachability {
  std::set<int> methods;
  std::map<int, int> depth;
};

bool is_nested_registration(const CodeModel& model, const CallEdge& edge) {
  const MethodDecl& registrar =
      model.methods[static_cast<std::size_t>(edge.caller)];
  return registrar.callback_kind == CallbackKind::ReceiverOnReceive ||
         registrar.callback_kind == CallbackKind::UiListener ||
         registrar.callback_kind == CallbackKind::XmlDeclared;
}

}  // namespace

AnalyzerConfig analyzer_preset(const std::string& name,
                               const ClassificationTable& table) {
  auto full_callbacks = [&]() {
    std::vector<CallbackEntry> out;
    for (const LifecycleEntry& entry : table.activity_lifecycle) {
      out.push_back(CallbackEntry{"Activity", entry.method, false});
    }
    for (const LifecycleEntry& entry : table.fragment_lifecycle) {
      out.push_back(CallbackEntry{"Fragment", entry.method, false});
    }
    for (const LifecycleEntry& entry : table.dialog_fragment_lifecycle) {
      out.push_back(CallbackEntry{"DialogFragment", entry.method, false});
    }
    out.push_back(CallbackEntry{"BroadcastReceiver", "onReceive", false});
    for (const CallbackEntry& entry : table.listener_callbacks) {
      out.push_back(entry);
    }
    return out;
  };

  if (name == "permissive") {
    AnalyzerConfig config;
    config.known_callbacks = full_callbacks();
    config.abstract_class_callbacks_supported = true;
    config.implicit_calls_supported = true;
    config.anonymous_classes_supported = true;
    config.async_pair_flows_supported = true;
    config.max_call_depth = -1;
    return config;
  }
  if (name == "flowdroid-like") {
    AnalyzerConfig config;
    // The callback list misses fragment lifecycles and the entries that
    // postdate (or never made it into) the list; abstract-class callbacks,
    // implicit calls, nested anonymous registrations and cross-callback
    // flows are unsupported.
    for (const LifecycleEntry& entry : table.activity_lifecycle) {
      config.known_callbacks.push_back(
          CallbackEntry{"Activity", entry.method, false});
    }
    config.known_callbacks.push_back(
        CallbackEntry{"BroadcastReceiver", "onReceive", false});
    static const char* kKnownListenerOwners[] = {
        "View.OnClickListener", "DialogInterface.OnClickListener",
        "DialogInterface.OnDismissListener", "LocationListener",
        "AdapterView.OnItemClickListener"};
    for (const CallbackEntry& entry : table.listener_callbacks) {
      for (const char* owner : kKnownListenerOwners) {
        if (entry.owner == owner) {
          config.known_callbacks.push_back(entry);
          break;
        }
      }
    }
    config.abstract_class_callbacks_supported = false;
    config.implicit_calls_supported = false;
    config.anonymous_classes_supported = false;
    config.async_pair_flows_supported = false;
    config.max_call_depth = -1;
    return config;
  }
  throw std::runtime_error("unknown analyzer preset: " + name);
}

namespace {

bool is_known_callback(const CodeModel& model, const AnalyzerConfig& config,
                       const MethodDecl& method,
                       const std::vector<std::string>& supertypes) {
  for (const CallbackEntry& entry : config.known_callbacks) {
    if (entry.method != method.name) continue;
    bool owner_matches = false;
    const ClassDecl& owner =
        model.classes[static_cast<std::size_t>(method.owner)];
    if (type_name_matches(owner.simple_name, entry.owner)) {
      owner_matches = true;
    } else {
      for (const std::string& super : supertypes) {
        if (type_name_matches(super, entry.owner)) {
          owner_matches = true;
          break;
        }
      }
    }
    if (!owner_matches) continue;
    if (entry.abstract_owner && !config.abstract_class_callbacks_supported) {
      continue;
    }
    return true;
  }
  return false;
}

std::vector<std::string> supertype_closure_of(const CodeModel& model,
                                              int class_id) {
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
      int parent = model.find_class_by_simple_name([&super] {
        std::size_t dot = super.rfind('.');
        return dot == std::string::npos ? super : super.substr(dot + 1);
      }());
      if (parent >= 0) work.push_back(parent);
    }
  }
  return out;
}

Reachability compute_reachability(const CodeModel& model,
                                  const CallGraph& graph,
                                  const AnalyzerConfig& config) {
  Reachability reach;
  std::deque<int> queue;
  for (const MethodDecl& method : model.methods) {
    if (model.inside_anonymous_class(method.owner)) continue;
    bool entry = method.callback_kind == CallbackKind::XmlDeclared;
    if (!entry) {
      std::vector<std::string> closure =
          supertype_closure_of(model, method.owner);
      entry = is_known_callback(model, config, method, closure);
    }
    if (entry) {
      reach.methods.insert(method.id);
      reach.depth[method.id] = 0;
      queue.push_back(method.id);
    }
  }
  while (!queue.empty()) {
    int current = queue.front();
    queue.pop_front();
    int depth = reach.depth[current];
    if (config.max_call_depth >= 0 && depth >= config.max_call_depth) {
      continue;
    }
    for (const CallEdge& edge : graph.edges_from(current)) {
      if (edge.kind == CallEdge::Kind::Implicit &&
          !config.implicit_calls_supported) {
        continue;
      }
      if (edge.kind == CallEdge::Kind::Registration) {
        const MethodDecl& callee =
            model.methods[static_cast<std::size_t>(edge.callee)];
        std::vector<std::string> closure =
            supertype_closure_of(model, callee.owner);
        if (!is_known_callback(model, config, callee, closure)) continue;
        if (!config.anonymous_classes_supported &&
            is_nested_registration(model, edge)) {
          continue;
        }
      }
      if (reach.methods.count(edge.callee) > 0) continue;
      reach.methods.insert(edge.callee);
      reach.depth[edge.callee] = depth + 1;
      queue.push_back(edge.callee);
    }
  }
  return reach;
}

}  // namespace

ToolReport analyze(const CodeModel& model, const SourceSinkCatalog& catalog,
                   const AnalyzerConfig& config) {
  if (!model.skipped_units.empty()) {
    throw std::runtime_error("analyzer requires a fully parseable tree; " +
                             std::to_string(model.skipped_units.size()) +
                             " unit(s) failed to parse");
  }
  validate_catalog(catalog, OperatorGoal::DataLeak);

  std::vector<SinkSignature> sources;
  std::vector<SinkSignature> sinks;
  for (const std::string& sig : catalog.sources) {
    sources.push_back(split_signature(sig));
  }
  for (const std::string& sig : catalog.sinks) {
    sinks.push_back(split_signature(sig));
  }

  CallGraph graph = call_graph(model);
  Reachability reach = compute_reachability(model, graph, config);

  // Methods in deterministic order.
  std::vector<int> order(reach.methods.begin(), reach.methods.end());
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const MethodDecl& ma = model.methods[static_cast<std::size_t>(a)];
    const MethodDecl& mb = model.methods[static_cast<std::size_t>(b)];
    const std::string& pa = model.units[static_cast<std::size_t>(ma.unit)].path;
    const std::string& pb = model.units[static_cast<std::size_t>(mb.unit)].path;
    if (pa != pb) return pa < pb;
    return ma.body_open < mb.body_open;
  });

  // (class, variable) -> taints written by reachable methods.
  std::map<std::pair<int, std::string>, std::vector<SlotTaint>> slots;
  // Per-method local taints, kept for the sink pass.
  std::map<int, std::map<std::string, std::string>> local_taints;

  auto scan_method = [&](int method_id, bool sink_pass,
                         std::vector<Detection>& out) {
    const MethodDecl& method =
        model.methods[static_cast<std::size_t>(method_id)];
    const SourceUnit& unit = model.units[static_cast<std::size_t>(method.unit)];
    const JavaMethod& pm =
        unit.java.methods[static_cast<std::size_t>(method.parsed_index)];
    std::set<std::string> locals;
    for (const JavaParam& param : pm.params) locals.insert(param.name);
    for (const JavaLocalBinding& binding : pm.locals) {
      locals.insert(binding.name);
    }
    std::map<std::string, std::string>& taints = local_taints[method_id];

    for (const JavaStatement& stmt : pm.statements) {
      std::string text(unit.text.substr(stmt.start, stmt.end - stmt.start));

      std::string origin;
      for (const SinkSignature& sig : sources) {
        if (statement_matches(text, sig)) {
          origin = sig.original;
          break;
        }
      }

      // Declaration or assignment.
      std::size_t eq = text.find('=');
      bool handled_assignment = false;
      if (eq != std::string::npos && eq + 1 < text.size() &&
          text[eq + 1] != '=' && (eq == 0 || text[eq - 1] != '=') &&
          (eq == 0 || (text[eq - 1] != '<' && text[eq - 1] != '>' &&
                       text[eq - 1] != '!'))) {
        std::string lhs = trim(text.substr(0, eq));
        std::string rhs = text.substr(eq + 1);
        std::vector<std::string> lhs_idents = identifiers_in(lhs);
        if (!lhs_idents.empty() && lhs.find('(') == std::string::npos) {
          handled_assignment = true;
          std::string target = lhs_idents.back();
          std::string rhs_origin = origin;
          if (rhs_origin.empty()) {
            for (const std::string& ident : identifiers_in(rhs)) {
              auto it = taints.find(ident);
              if (it != taints.end()) {
                rhs_origin = it->second;
                break;
              }
            }
          }
          if (!rhs_origin.empty()) {
            if (locals.count(target) > 0) {
              taints[target] = rhs_origin;
            } else if (!sink_pass) {
              slots[{method.owner, target}].push_back(
                  SlotTaint{method_id, rhs_origin});
            }
          }
        }
      }

      // Receiver-variable propagation: `recv.method(...tainted...)`.
      if (!handled_assignment || true) {
        std::vector<std::string> idents = identifiers_in(text);
        for (std::size_t i = 0; i + 1 < idents.size(); ++i) {
          const std::string& recv = idents[i];
          if (locals.count(recv) == 0) continue;
          std::string needle = recv + ".";
          std::size_t at = text.find(needle);
          if (at == std::string::npos) continue;
          std::size_t open = text.find('(', at);
          if (open == std::string::npos) continue;
          int depth = 0;
          std::size_t close = open;
          for (std::size_t j = open; j < text.size(); ++j) {
            if (text[j] == '(') ++depth;
            if (text[j] == ')') {
              --depth;
              if (depth == 0) {
                close = j;
                break;
              }
            }
          }
          if (close <= open) continue;
          std::string args = text.substr(open + 1, close - open - 1);
          for (const std::string& ident : identifiers_in(args)) {
            auto it = taints.find(ident);
            if (it != taints.end()) {
              taints[recv] = it->second;
              break;
            }
          }
        }
      }

      if (!sink_pass) continue;

      auto [line, column] = unit.lines.locate(stmt.start);
      (void)column;
      for (const SinkSignature& sig : sinks) {
        if (!statement_matches(text, sig)) continue;
        std::string args = sink_args_slice(text, sig);
        if (args.empty()) continue;
        for (const std::string& ident : identifiers_in(args)) {
          auto local_it = taints.find(ident);
          if (local_it != taints.end()) {
            out.push_back(Detection{-1, unit.path, line, local_it->second,
                                    sig.original});
            break;
          }
          auto slot_it = slots.find({method.owner, ident});
          if (slot_it != slots.end()) {
            const MethodDecl& sink_method = method;
            bool flows = false;
            std::string slot_origin;
            for (const SlotTaint& taint : slot_it->second) {
              if (taint.method == method_id) {
                flows = true;
                slot_origin = taint.origin;
                break;
              }
              const MethodDecl& source_method =
                  model.methods[static_cast<std::size_t>(taint.method)];
              if (config.async_pair_flows_supported &&
                  source_method.owner == sink_method.owner &&
                  source_method.callback_kind == CallbackKind::Lifecycle &&
                  sink_method.callback_kind == CallbackKind::Lifecycle &&
                  source_method.lifecycle_order >= 0 &&
                  sink_method.lifecycle_order >= 0 &&
                  source_method.lifecycle_order <
                      sink_method.lifecycle_order) {
                flows = true;
                slot_origin = taint.origin;
                break;
              }
            }
            if (flows) {
              out.push_back(
                  Detection{-1, unit.path, line, slot_origin, sig.original});
              break;
            }
          }
        }
      }
    }
  };

  std::vector<Detection> detections;
  for (int method_id : order) {
    scan_method(method_id, false, detections);
  }
  for (int method_id : order) {
    scan_method(method_id, true, detections);
  }

  std::sort(detections.begin(), detections.end(),
            [](const Detection& a, const Detection& b) {
              if (a.file != b.file) return a.file < b.file;
              if (a.line != b.line) return a.line < b.line;
              if (a.source_api != b.source_api) {
                return a.source_api < b.source_api;
              }
              return a.sink_api < b.sink_api;
            });
  detections.erase(
      std::unique(detections.begin(), detections.end(),
                  [](const Detection& a, const Detection& b) {
                    return a.file == b.file && a.line == b.line &&
                           a.source_api == b.source_api &&
                           a.sink_api == b.sink_api;
                  }),
      detections.end());

  ToolReport report;
  report.tool_name = "mutbench-analyzer";
  report.detections = std::move(detections);
  return report;
}

namespace {

using nlohmann::json;

}  // namespace

AnalyzerConfig load_analyzer_config(const std::filesystem::path& path) {
  json doc;
  {
    std::ifstream in(path);
    if (!in) {
      throw std::runtime_error("cannot open analyzer config: " +
                               path.string());
    }
    try {
      in >> doc;
    } catch (const json::exception& e) {
      throw std::runtime_error("malformed analyzer config " + path.string() +
                               ": " + e.what());
    }
  }
  AnalyzerConfig config;
  try {
    for (const auto& item : doc.at("known-callbacks")) {
      config.known_callbacks.push_back(
          CallbackEntry{item.at("owner").get<std::string>(),
                        item.at("method").get<std::string>(),
                        item.value("abstract", false)});
    }
    config.abstract_class_callbacks_supported =
        doc.value("abstract-class-callbacks-supported", true);
    config.implicit_calls_supported = doc.value("implicit-calls-supported", true);
    config.anonymous_classes_supported =
        doc.value("anonymous-classes-supported", true);
    config.async_pair_flows_supported =
        doc.value("async-pair-flows-supported", true);
    config.max_call_depth = doc.value("max-call-depth", -1);
  } catch (const json::exception& e) {
    throw std::runtime_error("invalid analyzer config " + path.string() +
                             ": " + e.what());
  }
  if (config.max_call_depth == 0) {
    throw std::runtime_error("max-call-depth must be >= 1 or -1 (unlimited)");
  }
  return config;
}

std::string analyzer_config_to_json(const AnalyzerConfig& config) {
  json doc;
  doc["known-callbacks"] = json::array();
  for (const CallbackEntry& entry : config.known_callbacks) {
    doc["known-callbacks"].push_back({{"owner", entry.owner},
                                      {"method", entry.method},
                                      {"abstract", entry.abstract_owner}});
  }
  doc["abstract-class-callbacks-supported"] =
      config.abstract_class_callbacks_supported;
  doc["implicit-calls-supported"] = config.implicit_calls_supported;
  doc["anonymous-classes-supported"] = config.anonymous_classes_supported;
  doc["async-pair-flows-supported"] = config.async_pair_flows_supported;
  doc["max-call-depth"] = config.max_call_depth;
  return doc.dump(2) + "\n";
}

std::string serialize_report(const ToolReport& report) {
  std::ostringstream out;
  out << "#tool " << report.tool_name << "\n";
  for (const Detection& detection : report.detections) {
    if (detection.mutant_id >= 0) {
      out << "id=" << detection.mutant_id << "\n";
    } else {
      out << "file=" << detection.file << " line=" << detection.line
          << " src=" << detection.source_api << " sink=" << detection.sink_api
          << "\n";
    }
  }
  return out.str();
}

ToolReport parse_report_text(const std::string& text,
                             const std::string& name) {
  ToolReport report;
  report.tool_name = "external";
  int line_number = 0;
  for (const std::string& raw : split(text, '\n')) {
    ++line_number;
    std::string line = trim(raw);
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::vector<std::string> header = split(line, ' ');
      if (header[0] == "#tool" && header.size() >= 2) {
        report.tool_name = header[1];
      }
      continue;
    }
    if (starts_with(line, "id=")) {
      Detection detection;
      try {
        detection.mutant_id = std::stoi(line.substr(3));
      } catch (const std::exception&) {
        throw std::runtime_error(name + ":" + std::to_string(line_number) +
                                 ": malformed id record");
      }
      report.detections.push_back(detection);
      continue;
    }
    Detection detection;
    bool have_file = false;
    for (const std::string& field : split(line, ' ')) {
      if (field.empty()) continue;
      if (starts_with(field, "file=")) {
        detection.file = field.substr(5);
        have_file = true;
      } else if (starts_with(field, "line=")) {
        detection.line = std::stoi(field.substr(5));
      } else if (starts_with(field, "src=")) {
        detection.source_api = field.substr(4);
      } else if (starts_with(field, "sink=")) {
        detection.sink_api = field.substr(5);
      } else {
        throw std::runtime_error(name + ":" + std::to_string(line_number) +
                                 ": unknown report field '" + field + "'");
      }
    }
    if (!have_file || detection.line < 0) {
      throw std::runtime_error(name + ":" + std::to_string(line_number) +
                               ": report record needs file= and line=");
    }
    report.detections.push_back(std::move(detection));
  }
  return report;
}

ToolReport load_report(const std::filesystem::path& path) {
  return parse_report_text(read_file(path), path.string());
}

}  // namespace mutbench
