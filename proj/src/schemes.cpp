#include "mutbench/schemes.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace mutbench {

std::string_view scheme_name(MutationScheme scheme) {
  switch (scheme) {
    case MutationScheme::AndroidAbstractions:
      return "android-abstractions";
    case MutationScheme::Reachability:
      return "reachability";
    case MutationScheme::TaintSplit:
      return "taint-split";
    case MutationScheme::ComplexPath:
      return "complex-path";
  }
  return "reachability";
}

bool scheme_from_name(std::string_view name, MutationScheme& out) {
  for (MutationScheme scheme : all_schemes()) {
    if (scheme_name(scheme) == name) {
      out = scheme;
      return true;
    }
  }
  return false;
}

std::vector<MutationScheme> all_schemes() {
  return {MutationScheme::AndroidAbstractions, MutationScheme::Reachability,
          MutationScheme::TaintSplit, MutationScheme::ComplexPath};
}

std::string_view category_name(PointCategory category) {
  switch (category) {
    case PointCategory::LifecycleActivity:
      return "lifecycle-activity";
    case PointCategory::LifecycleFragment:
      return "lifecycle-fragment";
    case PointCategory::UiListener:
      return "ui-listener";
    case PointCategory::DynamicReceiver:
      return "dynamic-receiver";
    case PointCategory::NestedReceiver:
      return "nested-receiver";
    case PointCategory::XmlCallback:
      return "xml-callback";
    case PointCategory::PlainMethod:
      return "plain-method";
    case PointCategory::TaintPair:
      return "taint-pair";
    case PointCategory::ComplexPath:
      return "complex-path";
  }
  return "plain-method";
}

bool category_from_name(std::string_view name, PointCategory& out) {
  static const PointCategory all[] = {
      PointCategory::LifecycleActivity, PointCategory::LifecycleFragment,
      PointCategory::UiListener,        PointCategory::DynamicReceiver,
      PointCategory::NestedReceiver,    PointCategory::XmlCallback,
      PointCategory::PlainMethod,       PointCategory::TaintPair,
      PointCategory::ComplexPath};
  for (PointCategory category : all) {
    if (category_name(category) == name) {
      out = category;
      return true;
    }
  }
  return false;
}

namespace {

int category_rank(PointCategory category) {
  return static_cast<int>(category);
}

void sort_points(std::vector<InjectionPoint>& points, const CodeModel& model) {
  std::stable_sort(
      points.begin(), points.end(),
      [&](const InjectionPoint& a, const InjectionPoint& b) {
        const std::string& pa =
            model.units[static_cast<std::size_t>(a.source_anchor.unit)].path;
        const std::string& pb =
            model.units[static_cast<std::size_t>(b.source_anchor.unit)].path;
        if (pa != pb) return pa < pb;
        if (a.source_anchor.offset != b.source_anchor.offset) {
          return a.source_anchor.offset < b.source_anchor.offset;
        }
        if (a.category != b.category) {
          return category_rank(a.category) < category_rank(b.category);
        }
        return a.sink_anchor.offset < b.sink_anchor.offset;
      });
  for (std::size_t i = 0; i < points.size(); ++i) {
    points[i].point_id = static_cast<int>(i) + 1;
  }
}

InjectionPoint method_entry_point(const CodeModel& model, int method_id,
                                  MutationScheme scheme,
                                  PointCategory category) {
  const MethodDecl& method =
      model.methods[static_cast<std::size_t>(method_id)];
  InjectionPoint point;
  point.scheme = scheme;
  point.category = category;
  point.source_anchor = method.body_entry;
  point.sink_anchor = method.body_entry;
  point.source_method = method_id;
  point.sink_method = method_id;
  return point;
}

}  // namespace

std::vector<InjectionPoint> points_android(const CodeModel& model,
                                           const SchemeOptions& options) {
  std::vector<InjectionPoint> points;

  for (const MethodDecl& method : model.methods) {
    const ClassDecl& owner =
        model.classes[static_cast<std::size_t>(method.owner)];
    switch (method.callback_kind) {
      case CallbackKind::Lifecycle: {
        PointCategory category = owner.kind == ClassKind::Activity
                                     ? PointCategory::LifecycleActivity
                                     : PointCategory::LifecycleFragment;
        points.push_back(method_entry_point(
            model, method.id, MutationScheme::AndroidAbstractions, category));
        break;
      }
      case CallbackKind::UiListener:
        points.push_back(method_entry_point(
            model, method.id, MutationScheme::AndroidAbstractions,
            PointCategory::UiListener));
        break;
      case CallbackKind::ReceiverOnReceive:
        points.push_back(method_entry_point(
            model, method.id, MutationScheme::AndroidAbstractions,
            PointCategory::DynamicReceiver));
        break;
      default:
        break;
    }
  }

  // One synthesized receiver nested inside each dynamically registered
  // receiver's onReceive, up to the configured nesting depth.
  for (const RegistrationEdge& edge : model.registration_edges) {
    if (edge.kind != RegKind::DynamicReceiver) continue;
    int level = model.receiver_nesting_level(edge.registered_class);
    if (level + 1 > options.nested_receiver_depth) continue;
    int host = model.find_method(edge.registered_class, "onReceive");
    if (host < 0) continue;
    InjectionPoint point = method_entry_point(
        model, host, MutationScheme::AndroidAbstractions,
        PointCategory::NestedReceiver);
    point.source_method = -1;
    point.sink_method = -1;
    point.synth.kind = SynthPlan::Kind::NestedReceiver;
    point.synth.host_method = host;
    point.synth.description =
        "create nested receiver inside " +
        model.classes[static_cast<std::size_t>(edge.registered_class)]
            .qualified_name +
        ".onReceive";
    points.push_back(std::move(point));
  }

  // XML-declared handlers; a missing handler method is synthesized.
  for (const XmlHandler& handler : model.xml_handlers) {
    if (handler.resolved_method >= 0) {
      points.push_back(method_entry_point(
          model, handler.resolved_method, MutationScheme::AndroidAbstractions,
          PointCategory::XmlCallback));
      continue;
    }
    // Pick the activity that uses this layout, else the first activity.
    const SourceUnit& unit =
        model.units[static_cast<std::size_t>(handler.unit)];
    std::string layout = unit.path;
    std::size_t slash = layout.rfind('/');
    if (slash != std::string::npos) layout = layout.substr(slash + 1);
    if (ends_with(layout, ".xml")) {
      layout = layout.substr(0, layout.size() - 4);
    }
    int target_class = -1;
    auto it = model.layout_activity.find(layout);
    if (it != model.layout_activity.end()) {
      target_class = it->second;
    } else {
      for (const ClassDecl& cls : model.classes) {
        if (cls.kind == ClassKind::Activity && !cls.is_anonymous) {
          target_class = cls.id;
          break;
        }
      }
    }
    if (target_class < 0) continue;  // no activity to host the handler
    const ClassDecl& host =
        model.classes[static_cast<std::size_t>(target_class)];
    InjectionPoint point;
    point.scheme = MutationScheme::AndroidAbstractions;
    point.category = PointCategory::XmlCallback;
    // Anchor at the host class's closing brace; the synthesized method is
    // inserted there.
    const SourceUnit& host_unit =
        model.units[static_cast<std::size_t>(host.unit)];
    auto [line, column] = host_unit.lines.locate(host.body_close);
    point.source_anchor = Anchor{host.unit, host.body_close, line, column};
    point.sink_anchor = point.source_anchor;
    point.synth.kind = SynthPlan::Kind::XmlHandlerMethod;
    point.synth.host_class = target_class;
    point.synth.handler_name = handler.method_name;
    point.synth.description = "create public void " + handler.method_name +
                              "(View view) in " + host.qualified_name;
    points.push_back(std::move(point));
  }

  sort_points(points, model);
  return points;
}

std::vector<InjectionPoint> points_taint_pairs(const CodeModel& model,
                                               int adjacency_k) {
  std::vector<InjectionPoint> points;
  for (const ClassDecl& cls : model.classes) {
    std::vector<int> lifecycle;
    for (int m : cls.methods) {
      const MethodDecl& method = model.methods[static_cast<std::size_t>(m)];
      if (method.callback_kind == CallbackKind::Lifecycle &&
          method.lifecycle_order >= 0) {
        lifecycle.push_back(m);
      }
    }
    std::sort(lifecycle.begin(), lifecycle.end(), [&](int a, int b) {
      return model.methods[static_cast<std::size_t>(a)].lifecycle_order <
             model.methods[static_cast<std::size_t>(b)].lifecycle_order;
    });
    // Adjacency is measured over the callbacks the class actually defines:
    // consecutive defined callbacks execute in sequence even when the class
    // omits intermediate ones.
    for (std::size_t i = 0; i < lifecycle.size(); ++i) {
      for (std::size_t j = i + 1;
           j < lifecycle.size() &&
           j - i <= static_cast<std::size_t>(adjacency_k);
           ++j) {
        const MethodDecl& source =
            model.methods[static_cast<std::size_t>(lifecycle[i])];
        const MethodDecl& sink =
            model.methods[static_cast<std::size_t>(lifecycle[j])];
        if (source.lifecycle_order >= sink.lifecycle_order) continue;
        InjectionPoint point;
        point.scheme = MutationScheme::TaintSplit;
        point.category = PointCategory::TaintPair;
        point.source_anchor = source.body_entry;
        point.sink_anchor = sink.body_entry;
        point.source_method = source.id;
        point.sink_method = sink.id;
        points.push_back(std::move(point));
      }
    }
  }
  sort_points(points, model);
  return points;
}

Mip derive_mip(const CodeModel& model, MutationScheme scheme,
               const SecurityOperator& op, const SchemeOptions& options) {
  Mip mip;
  mip.scheme = scheme;
  mip.operator_id = op.operator_id;
  switch (scheme) {
    case MutationScheme::AndroidAbstractions:
      mip.points = points_android(model, options);
      break;
    case MutationScheme::Reachability:
    case MutationScheme::ComplexPath: {
      PointCategory category = scheme == MutationScheme::Reachability
                                   ? PointCategory::PlainMethod
                                   : PointCategory::ComplexPath;
      for (const MethodDecl& method : model.methods) {
        mip.points.push_back(
            method_entry_point(model, method.id, scheme, category));
      }
      sort_points(mip.points, model);
      break;
    }
    case MutationScheme::TaintSplit:
      mip.points = points_taint_pairs(model, options.taint_adjacency_k);
      break;
  }
  return mip;
}

std::string complex_path_output_var(const std::string& input_var) {
  return input_var + "x";
}

std::string complex_path_rule(const std::string& input_var, int id) {
  std::string n = std::to_string(id);
  std::ostringstream out;
  out << "StringBuilder builder" << n << " = new StringBuilder();\n"
      << "for (int index" << n << " = 0; index" << n << " < " << input_var
      << ".length(); index" << n << "++) {\n"
      << "    builder" << n << ".append(" << input_var << ".charAt(index" << n
      << "));\n"
      << "}\n"
      << "String " << complex_path_output_var(input_var) << " = builder" << n
      << ".toString();";
  return out.str();
}

std::string complex_path_meta_eval(const std::string& input) {
  // Mirrors the generated loop: append every character to a builder and
  // read the builder back.
  std::string builder;
  for (std::size_t index = 0; index < input.length(); ++index) {
    builder.push_back(input.at(index));
  }
  return builder;
}

std::string dump_mip(const Mip& mip, const CodeModel& model) {
  std::ostringstream out;
  out << "mip scheme=" << scheme_name(mip.scheme)
      << " operator=" << mip.operator_id << " points=" << mip.points.size()
      << "\n";
  for (const InjectionPoint& point : mip.points) {
    out << point.point_id << " " << category_name(point.category) << " "
        << model.units[static_cast<std::size_t>(point.source_anchor.unit)].path
        << ":" << point.source_anchor.line << ":"
        << point.source_anchor.column;
    if (point.sink_anchor.offset != point.source_anchor.offset ||
        point.sink_anchor.unit != point.source_anchor.unit) {
      out << " sink="
          << model.units[static_cast<std::size_t>(point.sink_anchor.unit)].path
          << ":" << point.sink_anchor.line << ":" << point.sink_anchor.column;
    }
    if (point.synth.kind != SynthPlan::Kind::None) {
      out << " synth=\"" << point.synth.description << "\"";
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace mutbench
