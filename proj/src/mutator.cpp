#include "mutbench/mutator.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "mutbench/text_util.hpp"

namespace mutbench {

namespace {

enum class Role { None, Source, Sink };

struct Segment {
  std::string text;
  Role role = Role::None;
  int mutant_id = 0;
};

struct Edit {
  std::size_t offset = 0;
  long sequence = 0;  // creation order; ties at one offset keep this order
  std::vector<Segment> segments;
};

std::string indent_lines(const std::string& text, const std::string& indent) {
  std::string out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    out += text[i];
    if (text[i] == '\n') out += indent;
  }
  return out;
}

struct EditPlanner {
  const CodeModel& model;
  std::map<int, std::vector<Edit>> edits_by_unit;
  long sequence = 0;

  void add(int unit, std::size_t offset, std::vector<Segment> segments) {
    Edit edit;
    edit.offset = offset;
    edit.sequence = ++sequence;
    edit.segments = std::move(segments);
    edits_by_unit[unit].push_back(std::move(edit));
  }

  std::string body_indent(const MethodDecl& method) const {
    const SourceUnit& unit =
        model.units[static_cast<std::size_t>(method.unit)];
    return line_indent_at(unit.text, method.decl_offset) + "    ";
  }
};

}  // namespace

std::map<std::string, std::size_t> MutantLedger::counts_by_scheme() const {
  std::map<std::string, std::size_t> counts;
  for (const Mutant& mutant : mutants) {
    ++counts[std::string(scheme_name(mutant.scheme))];
  }
  return counts;
}

std::map<std::string, std::size_t> MutantLedger::counts_by_category() const {
  std::map<std::string, std::size_t> counts;
  for (const Mutant& mutant : mutants) {
    ++counts[std::string(category_name(mutant.category))];
  }
  return counts;
}

const Mutant* MutantLedger::find(int id) const {
  for (const Mutant& mutant : mutants) {
    if (mutant.id == id) return &mutant;
  }
  return nullptr;
}

Scaffold synthesize_scaffold(const CodeModel& model, const SynthPlan& plan,
                             const std::string& payload, int mutant_id) {
  std::string n = std::to_string(mutant_id);
  if (plan.kind == SynthPlan::Kind::NestedReceiver) {
    if (plan.host_method < 0 ||
        plan.host_method >= static_cast<int>(model.methods.size())) {
      throw std::runtime_error("nested-receiver plan has no host method: " +
                               plan.description);
    }
    const MethodDecl& host =
        model.methods[static_cast<std::size_t>(plan.host_method)];
    std::string ind = line_indent_at(
        model.units[static_cast<std::size_t>(host.unit)].text,
        host.decl_offset) + "    ";
    std::ostringstream out;
    out << "\n"
        << ind << "BroadcastReceiver receiver" << n
        << " = new BroadcastReceiver() {\n"
        << ind << "    public void onReceive(Context context, Intent intent) {\n"
        << ind << "        " << indent_lines(payload, ind + "        ") << "\n"
        << ind << "    }\n"
        << ind << "};\n"
        << ind << "IntentFilter filter" << n << " = new IntentFilter();\n"
        << ind << "filter" << n
        << ".addAction(\"android.intent.action.SEND\");\n"
        << ind << "registerReceiver(receiver" << n << ", filter" << n << ");";
    Scaffold scaffold;
    scaffold.unit = host.unit;
    scaffold.insert_offset = host.body_entry.offset;
    scaffold.text = out.str();
    return scaffold;
  }
  if (plan.kind == SynthPlan::Kind::XmlHandlerMethod) {
    if (plan.host_class < 0 ||
        plan.host_class >= static_cast<int>(model.classes.size())) {
      throw std::runtime_error("xml-handler plan has no host class: " +
                               plan.description);
    }
    const ClassDecl& host =
        model.classes[static_cast<std::size_t>(plan.host_class)];
    const SourceUnit& unit = model.units[static_cast<std::size_t>(host.unit)];
    std::string class_ind = line_indent_at(unit.text, host.decl_offset);
    std::string ind = class_ind + "    ";
    std::ostringstream out;
    out << "\n"
        << ind << "public void " << plan.handler_name << "(View view) {\n"
        << ind << "    " << indent_lines(payload, ind + "    ") << "\n"
        << ind << "}\n" << class_ind;
    Scaffold scaffold;
    scaffold.unit = host.unit;
    scaffold.insert_offset = host.body_close;
    scaffold.text = out.str();
    return scaffold;
  }
  throw std::runtime_error("plan has nothing to synthesize: " +
                           plan.description);
}

MutationResult inject_all(const CodeModel& model, const std::vector<Mip>& mips,
                          const SecurityOperator& op,
                          const InjectOptions& options) {
  MutationResult result;
  result.ledger.corpus_fingerprint = model.fingerprint;
  result.ledger.run_id = options.run_id.empty()
                             ? "run-" + to_hex(model.fingerprint)
                             : options.run_id;

  EditPlanner planner{model, {}, 0};
  int next_id = 0;

  for (const Mip& mip : mips) {
    for (const InjectionPoint& point : mip.points) {
      OperatorInstance instance = instantiate(op, ++next_id);
      Mutant mutant;
      mutant.id = instance.mutant_id;
      mutant.scheme = point.scheme;
      mutant.category = point.category;
      mutant.operator_id = op.operator_id;
      mutant.source_api = op.source_api;
      mutant.sink_api = op.sink_api;
      mutant.tag = instance.tag;
      mutant.file =
          model.units[static_cast<std::size_t>(point.source_anchor.unit)].path;

      if (point.synth.kind != SynthPlan::Kind::None) {
        std::string payload = instance.source_stmt + "\n" + instance.sink_stmt;
        Scaffold scaffold =
            synthesize_scaffold(model, point.synth, payload, instance.mutant_id);
        // Re-render with role markers: split the scaffold at the payload.
        std::size_t at = scaffold.text.find(instance.source_stmt.substr(
            0, instance.source_stmt.find('\n')));
        if (at == std::string::npos) {
          throw std::runtime_error("scaffold lost its payload for point " +
                                   std::to_string(point.point_id));
        }
        // The sink statement is the last payload line before the scaffold
        // tail; locate it for the ledger's sink line.
        std::size_t sink_at = scaffold.text.rfind(instance.sink_stmt);
        if (sink_at == std::string::npos) {
          throw std::runtime_error("scaffold lost its sink for point " +
                                   std::to_string(point.point_id));
        }
        std::vector<Segment> segments;
        segments.push_back(Segment{scaffold.text.substr(0, at), Role::None, 0});
        segments.push_back(Segment{scaffold.text.substr(at, sink_at - at),
                                   Role::Source, instance.mutant_id});
        segments.push_back(Segment{scaffold.text.substr(sink_at), Role::Sink,
                                   instance.mutant_id});
        planner.add(scaffold.unit, scaffold.insert_offset,
                    std::move(segments));
        result.ledger.mutants.push_back(std::move(mutant));
        continue;
      }

      const MethodDecl& source_method =
          model.methods[static_cast<std::size_t>(point.source_method)];
      std::string ind = planner.body_indent(source_method);

      if (point.category == PointCategory::TaintPair) {
        const MethodDecl& sink_method =
            model.methods[static_cast<std::size_t>(point.sink_method)];
        const ClassDecl& owner =
            model.classes[static_cast<std::size_t>(source_method.owner)];
        const SourceUnit& unit =
            model.units[static_cast<std::size_t>(owner.unit)];
        std::string class_ind =
            line_indent_at(unit.text, owner.decl_offset) + "    ";
        planner.add(owner.unit, owner.body_open + 1,
                    {Segment{"\n" + class_ind + instance.field_decl(),
                             Role::None, 0}});
        std::vector<Segment> source_segments;
        source_segments.push_back(Segment{"\n" + ind, Role::None, 0});
        source_segments.push_back(Segment{instance.source_assignment(),
                                          Role::Source, instance.mutant_id});
        if (options.strict_pairs) {
          source_segments.push_back(
              Segment{"\n" + ind + instance.source_marker(), Role::None, 0});
        }
        planner.add(point.source_anchor.unit, point.source_anchor.offset,
                    std::move(source_segments));
        std::string sink_ind = planner.body_indent(sink_method);
        planner.add(point.sink_anchor.unit, point.sink_anchor.offset,
                    {Segment{"\n" + sink_ind, Role::None, 0},
                     Segment{instance.sink_stmt, Role::Sink,
                             instance.mutant_id}});
        result.ledger.mutants.push_back(std::move(mutant));
        continue;
      }

      std::vector<Segment> segments;
      segments.push_back(Segment{"\n" + ind, Role::None, 0});
      segments.push_back(Segment{indent_lines(instance.source_stmt, ind),
                                 Role::Source, instance.mutant_id});
      if (point.category == PointCategory::ComplexPath) {
        std::string rule = complex_path_rule(instance.variable(),
                                             instance.mutant_id);
        segments.push_back(
            Segment{"\n" + ind + indent_lines(rule, ind), Role::None, 0});
        segments.push_back(Segment{"\n" + ind, Role::None, 0});
        segments.push_back(Segment{
            instance.sink_for_variable(
                complex_path_output_var(instance.variable())),
            Role::Sink, instance.mutant_id});
      } else {
        segments.push_back(Segment{"\n" + ind, Role::None, 0});
        segments.push_back(
            Segment{instance.sink_stmt, Role::Sink, instance.mutant_id});
      }
      planner.add(point.source_anchor.unit, point.source_anchor.offset,
                  std::move(segments));
      result.ledger.mutants.push_back(std::move(mutant));
    }
  }

  // Apply the edits per unit, lowest offset first; insertions never move
  // original bytes before them, so original-coordinate anchors stay valid.
  std::map<int, std::map<int, std::pair<int, int>>> lines_by_mutant;
  for (int ui = 0; ui < static_cast<int>(model.units.size()); ++ui) {
    const SourceUnit& unit = model.units[static_cast<std::size_t>(ui)];
    auto it = planner.edits_by_unit.find(ui);
    if (it == planner.edits_by_unit.end()) {
      result.files.emplace_back(unit.path, unit.text);
      continue;
    }
    std::vector<Edit>& edits = it->second;
    std::sort(edits.begin(), edits.end(), [](const Edit& a, const Edit& b) {
      if (a.offset != b.offset) return a.offset < b.offset;
      return a.sequence < b.sequence;
    });
    std::string out;
    out.reserve(unit.text.size() + edits.size() * 128);
    std::size_t pos = 0;
    int line = 1;
    auto append_text = [&](const std::string& text) {
      out += text;
      line += static_cast<int>(std::count(text.begin(), text.end(), '\n'));
    };
    for (const Edit& edit : edits) {
      if (edit.offset < pos) {
        throw std::runtime_error("edit offsets overlap; cannot remap");
      }
      std::string chunk(unit.text.substr(pos, edit.offset - pos));
      append_text(chunk);
      pos = edit.offset;
      for (const Segment& segment : edit.segments) {
        // Role segments begin with statement text; the preceding segment
        // ends with a newline plus indent, so the statement sits on the
        // current line.
        if (segment.role == Role::Source) {
          lines_by_mutant[segment.mutant_id][0] = {0, line};
        }
        if (segment.role == Role::Sink) {
          lines_by_mutant[segment.mutant_id][1] = {0, line};
        }
        append_text(segment.text);
      }
    }
    append_text(std::string(unit.text.substr(pos)));
    result.files.emplace_back(unit.path, std::move(out));
  }

  for (Mutant& mutant : result.ledger.mutants) {
    auto it = lines_by_mutant.find(mutant.id);
    if (it == lines_by_mutant.end()) {
      throw std::runtime_error("mutant " + std::to_string(mutant.id) +
                               " produced no edits");
    }
    mutant.source_line = it->second.at(0).second;
    mutant.sink_line = it->second.at(1).second;
  }
  return result;
}

void write_output(const MutationResult& result,
                  const std::filesystem::path& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (!fs::is_directory(out_dir)) {
    throw std::runtime_error("output directory is not writable: " +
                             out_dir.string());
  }
  for (const auto& [path, content] : result.files) {
    fs::path target = out_dir / path;
    fs::create_directories(target.parent_path(), ec);
    write_file_atomic(target, content);
  }
  write_file_atomic(out_dir / "ledger", serialize_ledger(result.ledger));
}

std::string serialize_ledger(const MutantLedger& ledger) {
  std::ostringstream out;
  out << "#ledger v1\n";
  out << "#corpus-fnv1a64 " << to_hex(ledger.corpus_fingerprint) << "\n";
  out << "#run-id " << ledger.run_id << "\n";
  out << "#count " << ledger.mutants.size() << "\n";
  for (const auto& [scheme, count] : ledger.counts_by_scheme()) {
    out << "#count-scheme " << scheme << " " << count << "\n";
  }
  for (const auto& [category, count] : ledger.counts_by_category()) {
    out << "#count-category " << category << " " << count << "\n";
  }
  for (const Mutant& mutant : ledger.mutants) {
    out << mutant.id << '\t' << scheme_name(mutant.scheme) << '\t'
        << category_name(mutant.category) << '\t' << mutant.operator_id
        << '\t' << mutant.file << '\t' << mutant.source_line << '\t'
        << mutant.sink_line << '\t' << mutant.source_api << '\t'
        << mutant.sink_api << '\t' << mutant.tag << '\n';
  }
  return out.str();
}

MutantLedger parse_ledger_text(const std::string& text,
                               const std::string& name) {
  MutantLedger ledger;
  int line_number = 0;
  for (const std::string& raw : split(text, '\n')) {
    ++line_number;
    if (raw.empty()) continue;
    if (raw[0] == '#') {
      std::vector<std::string> header = split(raw, ' ');
      if (header[0] == "#corpus-fnv1a64" && header.size() >= 2) {
        ledger.corpus_fingerprint = std::stoull(header[1], nullptr, 16);
      } else if (header[0] == "#run-id" && header.size() >= 2) {
        ledger.run_id = header[1];
      }
      continue;
    }
    std::vector<std::string> fields = split(raw, '\t');
    if (fields.size() != 10) {
      throw std::runtime_error(name + ":" + std::to_string(line_number) +
                               ": ledger record must have 10 fields");
    }
    Mutant mutant;
    mutant.id = std::stoi(fields[0]);
    if (!scheme_from_name(fields[1], mutant.scheme)) {
      throw std::runtime_error(name + ":" + std::to_string(line_number) +
                               ": unknown scheme " + fields[1]);
    }
    if (!category_from_name(fields[2], mutant.category)) {
      throw std::runtime_error(name + ":" + std::to_string(line_number) +
                               ": unknown category " + fields[2]);
    }
    mutant.operator_id = fields[3];
    mutant.file = fields[4];
    mutant.source_line = std::stoi(fields[5]);
    mutant.sink_line = std::stoi(fields[6]);
    mutant.source_api = fields[7];
    mutant.sink_api = fields[8];
    mutant.tag = fields[9];
    ledger.mutants.push_back(std::move(mutant));
  }
  for (std::size_t i = 0; i < ledger.mutants.size(); ++i) {
    if (ledger.mutants[i].id != static_cast<int>(i) + 1) {
      throw std::runtime_error(name + ": ledger ids are not dense 1..N");
    }
  }
  return ledger;
}

MutantLedger load_ledger(const std::filesystem::path& path) {
  return parse_ledger_text(read_file(path), path.string());
}

}  // namespace mutbench
