#include "mutbench/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "mutbench/schemes.hpp"
#include "mutbench/text_util.hpp"

namespace mutbench {

std::string_view flaw_class_name(FlawClass flaw) {
  switch (flaw) {
    case FlawClass::FC1MissingCallbacks:
      return "FC1-missing-callbacks";
    case FlawClass::FC2MissingImplicitCalls:
      return "FC2-missing-implicit-calls";
    case FlawClass::FC3AnonymousClasses:
      return "FC3-anonymous-classes";
    case FlawClass::FC4AsyncMethods:
      return "FC4-async-methods";
    case FlawClass::Unclassified:
      return "unclassified";
  }
  return "unclassified";
}

std::string format_rate(std::size_t numerator, std::size_t denominator) {
  if (denominator == 0) return "0.0%";
  double percent =
      100.0 * static_cast<double>(numerator) / static_cast<double>(denominator);
  long long tenths = static_cast<long long>(std::floor(percent * 10.0 + 0.5));
  std::ostringstream out;
  out << tenths / 10 << '.' << tenths % 10 << '%';
  return out.str();
}

double SurvivalReport::survival_rate_percent() const {
  if (executable_count == 0) return 0.0;
  double percent = 100.0 * static_cast<double>(undetected.size()) /
                   static_cast<double>(executable_count);
  return std::floor(percent * 10.0 + 0.5) / 10.0;
}

std::set<int> resolve_detections(const MutantLedger& ledger,
                                 const ToolReport& report,
                                 std::size_t* unresolvable) {
  std::map<std::pair<std::string, int>, int> by_sink_line;
  std::map<std::tuple<std::string, std::string, std::string>, int> by_api;
  std::set<int> ids;
  for (const Mutant& mutant : ledger.mutants) {
    ids.insert(mutant.id);
    by_sink_line.emplace(std::make_pair(mutant.file, mutant.sink_line),
                         mutant.id);
    by_api.emplace(
        std::make_tuple(mutant.source_api, mutant.sink_api, mutant.file),
        mutant.id);
  }
  std::set<int> resolved;
  std::size_t misses = 0;
  for (const Detection& detection : report.detections) {
    if (detection.mutant_id >= 0) {
      if (ids.count(detection.mutant_id) > 0) {
        resolved.insert(detection.mutant_id);
      } else {
        ++misses;
      }
      continue;
    }
    auto line_it = by_sink_line.find({detection.file, detection.line});
    if (line_it != by_sink_line.end()) {
      resolved.insert(line_it->second);
      continue;
    }
    auto api_it = by_api.find(std::make_tuple(
        detection.source_api, detection.sink_api, detection.file));
    if (api_it != by_api.end()) {
      resolved.insert(api_it->second);
      continue;
    }
    ++misses;
  }
  if (unresolvable != nullptr) *unresolvable = misses;
  return resolved;
}

FlawClass classify_flaw(const Mutant& mutant, const CodeModel* model,
                        const CallGraph* graph) {
  switch (mutant.category) {
    case PointCategory::LifecycleActivity:
    case PointCategory::LifecycleFragment:
    case PointCategory::UiListener:
    case PointCategory::XmlCallback:
      return FlawClass::FC1MissingCallbacks;
    case PointCategory::TaintPair:
      return FlawClass::FC4AsyncMethods;
    case PointCategory::NestedReceiver:
      return FlawClass::FC3AnonymousClasses;
    default:
      break;
  }
  if (model == nullptr || graph == nullptr) {
    return FlawClass::Unclassified;
  }
  std::vector<CallChain> chains = call_chains(*model, *graph, mutant);
  for (const CallChain& chain : chains) {
    if (chain.crosses_implicit) return FlawClass::FC2MissingImplicitCalls;
  }
  int method = model->method_enclosing_line(mutant.file, mutant.sink_line);
  if (method >= 0) {
    const MethodDecl& decl =
        model->methods[static_cast<std::size_t>(method)];
    if (model->inside_anonymous_class(decl.owner)) {
      return FlawClass::FC3AnonymousClasses;
    }
  }
  return FlawClass::Unclassified;
}

SurvivalReport survivors(const MutantLedger& ledger,
                         const std::set<int>& executable,
                         const ToolReport& report, const CodeModel* model,
                         const CallGraph* graph) {
  SurvivalReport out;
  out.injected_count = ledger.mutants.size();
  out.executable_count = executable.size();
  std::set<int> detected =
      resolve_detections(ledger, report, &out.unresolvable_detections);

  for (int id : executable) {
    const Mutant* mutant = ledger.find(id);
    if (mutant == nullptr) {
      throw std::runtime_error("executable set references unknown mutant " +
                               std::to_string(id));
    }
    if (detected.count(id) > 0) {
      ++out.detected_count;
    } else {
      out.undetected.push_back(id);
      ++out.undetected_by_category[std::string(
          category_name(mutant->category))];
    }
  }
  std::sort(out.undetected.begin(), out.undetected.end());

  std::map<std::string, std::map<FlawClass, std::size_t>> votes;
  for (int id : out.undetected) {
    const Mutant* mutant = ledger.find(id);
    FlawClass flaw = classify_flaw(*mutant, model, graph);
    out.per_mutant_hypotheses[id] = flaw;
    ++votes[std::string(category_name(mutant->category))][flaw];
  }
  for (const auto& [category, tally] : votes) {
    FlawClass best = FlawClass::Unclassified;
    std::size_t best_count = 0;
    for (const auto& [flaw, count] : tally) {
      if (count > best_count ||
          (count == best_count &&
           static_cast<int>(flaw) < static_cast<int>(best))) {
        best = flaw;
        best_count = count;
      }
    }
    out.category_hypotheses[category] = best;
  }
  return out;
}

const Mutant& lookup_mutant(const MutantLedger& ledger,
                            const std::string& tag) {
  for (const Mutant& mutant : ledger.mutants) {
    if (mutant.tag == tag) return mutant;
  }
  throw std::runtime_error("no mutant with tag '" + tag + "' in the ledger");
}

std::vector<CallChain> call_chains(const CodeModel& model,
                                   const CallGraph& graph, const Mutant& mutant,
                                   const MutantLedger* ledger,
                                   const std::vector<int>* exec_order,
                                   const ChainOptions& options) {
  int target = model.method_enclosing_line(mutant.file, mutant.sink_line);
  std::vector<CallChain> chains;
  if (target < 0) return chains;

  // Bounded DFS over simple paths from each entry point.
  std::vector<int> path;
  std::vector<CallEdge> path_edges;
  std::set<int> on_path;

  std::function<void(int)> dfs = [&](int current) {
    if (static_cast<int>(chains.size()) >= options.max_paths) return;
    if (static_cast<int>(path.size()) > options.max_depth) return;
    if (current == target) {
      CallChain chain;
      chain.methods = path;
      chain.edges = path_edges;
      for (const CallEdge& edge : path_edges) {
        if (edge.kind == CallEdge::Kind::Implicit) {
          chain.crosses_implicit = true;
          break;
        }
      }
      chains.push_back(std::move(chain));
      return;
    }
    for (const CallEdge& edge : graph.edges_from(current)) {
      if (on_path.count(edge.callee) > 0) continue;
      on_path.insert(edge.callee);
      path.push_back(edge.callee);
      path_edges.push_back(edge);
      dfs(edge.callee);
      path_edges.pop_back();
      path.pop_back();
      on_path.erase(edge.callee);
    }
  };

  for (int entry : model.entry_points) {
    if (static_cast<int>(chains.size()) >= options.max_paths) break;
    path = {entry};
    path_edges.clear();
    on_path = {entry};
    dfs(entry);
  }

  if (ledger != nullptr && exec_order != nullptr && !exec_order->empty()) {
    // Methods hosting earlier-executed mutants get smaller ranks. A chain is
    // consistent with the observed ordering when its ranked methods appear
    // in non-decreasing rank order.
    std::map<int, int> method_rank;
    int rank = 0;
    for (int id : *exec_order) {
      ++rank;
      const Mutant* m = ledger->find(id);
      if (m == nullptr) continue;
      int method = model.method_enclosing_line(m->file, m->sink_line);
      if (method >= 0) method_rank.emplace(method, rank);
    }
    auto consistent = [&](const CallChain& chain) {
      int last = 0;
      for (int method : chain.methods) {
        auto it = method_rank.find(method);
        if (it == method_rank.end()) continue;
        if (it->second < last) return false;
        last = it->second;
      }
      return true;
    };
    std::stable_partition(chains.begin(), chains.end(), consistent);
  }
  return chains;
}

namespace {

std::string mutant_payload(const Mutant& mutant, const SecurityOperator& op) {
  OperatorInstance instance = instantiate(op, mutant.id);
  if (mutant.category == PointCategory::ComplexPath) {
    return instance.source_stmt + "\n" +
           complex_path_rule(instance.variable(), instance.mutant_id) + "\n" +
           instance.sink_for_variable(
               complex_path_output_var(instance.variable()));
  }
  return instance.source_stmt + "\n" + instance.sink_stmt;
}

std::string indent_block(const std::string& text, const std::string& indent) {
  std::string out = indent;
  for (char c : text) {
    out += c;
    if (c == '\n') out += indent;
  }
  return out;
}

}  // namespace

MinimalExample synthesize_minimal(const CodeModel& model, const Mutant& mutant,
                                  const CallChain& chain,
                                  const SecurityOperator& op) {
  if (chain.methods.empty()) {
    throw std::runtime_error("cannot synthesize a minimal example from an "
                             "empty call chain");
  }
  MinimalExample example;
  example.mutant_id = mutant.id;
  example.chain = chain.methods;
  example.class_name = "MinimalCase" + std::to_string(mutant.id);
  example.java_path = example.class_name + ".java";

  const MethodDecl& entry_method =
      model.methods[static_cast<std::size_t>(chain.methods.front())];
  const ClassDecl& entry_owner =
      model.classes[static_cast<std::size_t>(entry_method.owner)];

  OperatorInstance instance = instantiate(op, mutant.id);

  // Taint pairs reproduce the two callbacks plus the carrying field.
  if (mutant.category == PointCategory::TaintPair) {
    int sink_method_id =
        model.method_enclosing_line(mutant.file, mutant.sink_line);
    int source_method_id =
        model.method_enclosing_line(mutant.file, mutant.source_line);
    if (sink_method_id < 0 || source_method_id < 0) {
      throw std::runtime_error("taint pair methods not found in the model");
    }
    const MethodDecl& source_method =
        model.methods[static_cast<std::size_t>(source_method_id)];
    const MethodDecl& sink_method =
        model.methods[static_cast<std::size_t>(sink_method_id)];
    std::ostringstream out;
    out << "public class " << example.class_name << " extends Activity {\n\n";
    out << "    " << instance.field_decl() << "\n\n";
    out << "    protected void " << source_method.name << "("
        << source_method.params_text << ") {\n";
    out << "        " << instance.source_assignment() << "\n";
    out << "    }\n\n";
    out << "    protected void " << sink_method.name << "("
        << sink_method.params_text << ") {\n";
    out << "        " << instance.sink_stmt << "\n";
    out << "    }\n";
    out << "}\n";
    example.java_text = out.str();
    return example;
  }

  // General case: rebuild the chain inside one top-level class that keeps
  // the entry owner's supertypes, flattening direct calls into local
  // methods and re-creating registration / hand-off structure.
  std::string payload = mutant_payload(mutant, op);

  struct Renderer {
    const CodeModel& model;
    const CallChain& chain;
    const std::string& payload;
    std::vector<std::string> hoisted;  // flattened direct callees

    std::string method_body(std::size_t index) {
      if (index + 1 >= chain.methods.size()) {
        return payload;
      }
      const CallEdge& edge = chain.edges[index];
      const MethodDecl& callee =
          model.methods[static_cast<std::size_t>(chain.methods[index + 1])];
      const ClassDecl& callee_owner =
          model.classes[static_cast<std::size_t>(callee.owner)];
      std::string inner_body = method_body(index + 1);
      std::string params =
          callee.callback_kind == CallbackKind::None ? "" : callee.params_text;

      if (edge.kind == CallEdge::Kind::Direct) {
        std::ostringstream m;
        m << "void " << callee.name << "(" << params << ") {\n"
          << indent_block(inner_body, "    ") << "\n}";
        hoisted.push_back(m.str());
        return callee.name + "();";
      }
      if (edge.kind == CallEdge::Kind::Implicit) {
        int n = static_cast<int>(index) + 1;
        std::ostringstream body;
        std::string runnable = "new Runnable() {\n"
                               "    public void run() {\n" +
                               indent_block(inner_body, "        ") +
                               "\n    }\n}";
        // Reproduce the hand-off pattern that the original edge used.
        const ImplicitEdge* original = nullptr;
        for (const ImplicitEdge& ie : model.implicit_edges) {
          if (ie.caller_method == chain.methods[index] &&
              ie.callee_method == callee.id) {
            original = &ie;
            break;
          }
        }
        std::string invoker = original != nullptr ? original->invoker : "post";
        if (invoker == "runOnUiThread") {
          body << "runOnUiThread(" << runnable << ");";
        } else if (invoker == "start") {
          body << "Runnable task" << n << " = " << runnable << ";\n"
               << "Thread worker" << n << " = new Thread(task" << n << ");\n"
               << "worker" << n << ".start();";
        } else {
          body << "java.util.concurrent.ExecutorService pool" << n
               << " = java.util.concurrent.Executors.newSingleThreadExecutor();\n"
               << "pool" << n << "." << invoker << "(" << runnable << ");";
        }
        return body.str();
      }
      // Registration edge: re-create the registration with an anonymous
      // class of the same supertype and the callee callback inside.
      const RegistrationEdge* original = nullptr;
      for (const RegistrationEdge& re : model.registration_edges) {
        if (re.registrar_method == chain.methods[index] &&
            model.find_method(re.registered_class, callee.name) == callee.id) {
          original = &re;
          break;
        }
      }
      std::string supertype = callee_owner.supertypes().empty()
                                  ? "Runnable"
                                  : callee_owner.supertypes().front();
      int n = static_cast<int>(index) + 1;
      std::ostringstream body;
      std::string anon = "new " + supertype + "() {\n" +
                         "    public void " + callee.name + "(" +
                         callee.params_text + ") {\n" +
                         indent_block(inner_body, "        ") +
                         "\n    }\n}";
      if (original != nullptr && original->kind == RegKind::DynamicReceiver) {
        body << "BroadcastReceiver receiver" << n << " = " << anon << ";\n"
             << "IntentFilter filter" << n << " = new IntentFilter();\n"
             << "filter" << n << ".addAction(\"android.intent.action.SEND\");\n"
             << "registerReceiver(receiver" << n << ", filter" << n << ");";
        return body.str();
      }
      std::string attach =
          original != nullptr ? original->attach_name : "setOnClickListener";
      std::string holder_type = original != nullptr &&
                                        !original->receiver_type.empty()
                                    ? original->receiver_type
                                    : "";
      if (holder_type.empty()) {
        body << "bindTarget" << n << "()." << attach << "(" << anon << ");";
        hoisted.push_back("Object bindTarget" + std::to_string(n) +
                          "() {\n    return null;\n}");
        // An Object receiver keeps the skeleton parseable; the structure,
        // not the receiver type, is what the registration models.
      } else {
        body << holder_type << " holder" << n << " = makeHolder" << n
             << "();\n"
             << "holder" << n << "." << attach << "(" << anon << ");";
        hoisted.push_back(holder_type + " makeHolder" + std::to_string(n) +
                          "() {\n    return null;\n}");
      }
      return body.str();
    }
  };

  Renderer renderer{model, chain, payload, {}};
  std::string entry_body = renderer.method_body(0);

  std::ostringstream out;
  out << "public class " << example.class_name;
  if (!entry_owner.extends_types.empty()) {
    out << " extends " << entry_owner.extends_types.front();
  }
  if (!entry_owner.implements_types.empty()) {
    out << " implements ";
    for (std::size_t i = 0; i < entry_owner.implements_types.size(); ++i) {
      if (i > 0) out << ", ";
      out << entry_owner.implements_types[i];
    }
  }
  out << " {\n\n";
  out << "    public void " << entry_method.name << "("
      << entry_method.params_text << ") {\n"
      << indent_block(entry_body, "        ") << "\n    }\n";
  for (const std::string& method : renderer.hoisted) {
    out << "\n" << indent_block(method, "    ") << "\n";
  }
  out << "}\n";
  example.java_text = out.str();

  if (entry_method.callback_kind == CallbackKind::XmlDeclared) {
    example.xml_path = "layout/minimal_case_" + std::to_string(mutant.id) +
                       ".xml";
    std::ostringstream xml;
    xml << "<?xml version=\"1.0\" encoding=\"utf-8\"?>\n"
        << "<LinearLayout xmlns:android=\"http://schemas.android.com/apk/res/"
           "android\">\n"
        << "    <Button\n"
        << "        android:id=\"@+id/minimal_case_button\"\n"
        << "        android:onClick=\"" << entry_method.name << "\" />\n"
        << "</LinearLayout>\n";
    example.xml_text = xml.str();
  }
  return example;
}

ValidationOutcome validate_minimal(const MinimalExample& example,
                                   const ToolReport& report) {
  std::string tag = "\"leak-" + std::to_string(example.mutant_id) + "\"";
  int sink_line = -1;
  int line = 1;
  std::size_t start = 0;
  const std::string& text = example.java_text;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    std::string_view slice(text.data() + start,
                           (end == std::string::npos ? text.size() : end) -
                               start);
    if (slice.find(tag) != std::string_view::npos) {
      sink_line = line;
      // The sink is the last occurrence (complex-path payloads mention the
      // tag only once anyway).
    }
    if (end == std::string::npos) break;
    start = end + 1;
    ++line;
  }
  for (const Detection& detection : report.detections) {
    if (detection.mutant_id == example.mutant_id && detection.mutant_id >= 0) {
      return ValidationOutcome::DetectedRefineOrDiscard;
    }
    if (detection.file == example.java_path && detection.line == sink_line) {
      return ValidationOutcome::DetectedRefineOrDiscard;
    }
  }
  return ValidationOutcome::FlawConfirmed;
}

FunnelCounts funnel(const MutantLedger& ledger, const std::set<int>& executable,
                    const ToolReport& report) {
  SurvivalReport survival = survivors(ledger, executable, report);
  FunnelCounts counts;
  counts.injected = survival.injected_count;
  counts.executable = survival.executable_count;
  counts.undetected = survival.undetected.size();
  if (counts.injected < counts.executable ||
      counts.executable < counts.undetected) {
    throw std::runtime_error(
        "funnel ordering violated: injected >= executable >= undetected "
        "expected");
  }
  return counts;
}

std::string render_funnel(const FunnelCounts& counts) {
  std::ostringstream out;
  out << "injected: " << counts.injected << "\n";
  out << "executable: " << counts.executable << " ("
      << format_rate(counts.executable, counts.injected) << " of injected, "
      << counts.injected - counts.executable << " non-executable = "
      << format_rate(counts.injected - counts.executable, counts.injected)
      << ")\n";
  out << "undetected: " << counts.undetected << " ("
      << format_rate(counts.undetected, counts.executable)
      << " of executable)\n";
  return out.str();
}

std::string render_survival(const SurvivalReport& report, bool records) {
  std::ostringstream out;
  if (records) {
    out << "injected\t" << report.injected_count << "\n";
    out << "executable\t" << report.executable_count << "\n";
    out << "detected\t" << report.detected_count << "\n";
    out << "undetected\t" << report.undetected.size() << "\n";
    out << "survival-rate\t"
        << format_rate(report.undetected.size(), report.executable_count)
        << "\n";
    out << "unresolvable\t" << report.unresolvable_detections << "\n";
    for (const auto& [category, count] : report.undetected_by_category) {
      auto it = report.category_hypotheses.find(category);
      out << "category\t" << category << "\t" << count << "\t"
          << flaw_class_name(it == report.category_hypotheses.end()
                                 ? FlawClass::Unclassified
                                 : it->second)
          << "\n";
    }
    for (int id : report.undetected) {
      auto it = report.per_mutant_hypotheses.find(id);
      out << "survivor\t" << id << "\t"
          << flaw_class_name(it == report.per_mutant_hypotheses.end()
                                 ? FlawClass::Unclassified
                                 : it->second)
          << "\n";
    }
    return out.str();
  }
  out << "injected:   " << report.injected_count << "\n";
  out << "executable: " << report.executable_count << "\n";
  out << "detected:   " << report.detected_count << "\n";
  out << "undetected: " << report.undetected.size() << " / "
      << report.executable_count << " ("
      << format_rate(report.undetected.size(), report.executable_count)
      << ")\n";
  if (report.unresolvable_detections > 0) {
    out << "unresolvable detections: " << report.unresolvable_detections
        << "\n";
  }
  if (!report.undetected_by_category.empty()) {
    out << "survivors by category (flaw-class hypothesis):\n";
    for (const auto& [category, count] : report.undetected_by_category) {
      auto it = report.category_hypotheses.find(category);
      out << "  " << category << ": " << count << "  -> "
          << flaw_class_name(it == report.category_hypotheses.end()
                                 ? FlawClass::Unclassified
                                 : it->second)
          << "\n";
    }
  }
  return out.str();
}

}  // namespace mutbench
