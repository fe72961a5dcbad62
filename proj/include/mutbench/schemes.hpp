#pragma once

#include <string>
#include <vector>

#include "mutbench/code_model.hpp"
#include "mutbench/operators.hpp"

namespace mutbench {

enum class MutationScheme {
  AndroidAbstractions,
  Reachability,
  TaintSplit,
  ComplexPath,
};

std::string_view scheme_name(MutationScheme scheme);
bool scheme_from_name(std::string_view name, MutationScheme& out);
std::vector<MutationScheme> all_schemes();

enum class PointCategory {
  LifecycleActivity,
  LifecycleFragment,
  UiListener,
  DynamicReceiver,
  NestedReceiver,
  XmlCallback,
  PlainMethod,
  TaintPair,
  ComplexPath,
};

std::string_view category_name(PointCategory category);
bool category_from_name(std::string_view name, PointCategory& out);

struct SynthPlan {
  enum class Kind { None, NestedReceiver, XmlHandlerMethod };
  Kind kind = Kind::None;
  int host_method = -1;   // nested receiver: onReceive hosting the new one
  int host_class = -1;    // xml handler: class receiving the new method
  std::string handler_name;
  std::string description;
};

struct InjectionPoint {
  int point_id = -1;
  MutationScheme scheme = MutationScheme::Reachability;
  PointCategory category = PointCategory::PlainMethod;
  Anchor source_anchor;
  Anchor sink_anchor;      // == source_anchor except for taint pairs
  int source_method = -1;  // enclosing methods, -1 for synthesized code
  int sink_method = -1;
  SynthPlan synth;
};

struct Mip {
  MutationScheme scheme = MutationScheme::Reachability;
  std::string operator_id;
  std::vector<InjectionPoint> points;
};

struct SchemeOptions {
  int taint_adjacency_k = 1;
  int nested_receiver_depth = 2;
};

Mip derive_mip(const CodeModel& model, MutationScheme scheme,
               const SecurityOperator& op, const SchemeOptions& options = {});

std::vector<InjectionPoint> points_android(const CodeModel& model,
                                           const SchemeOptions& options = {});
std::vector<InjectionPoint> points_taint_pairs(const CodeModel& model,
                                               int adjacency_k);

// The source-to-sink path complication rule: rebuilds `input_var` character
// by character through a StringBuilder into `<input_var>x`.
std::string complex_path_rule(const std::string& input_var, int id);
// The rule's semantics as a plain string function (used to check that the
// transformation preserves the leaked value).
std::string complex_path_meta_eval(const std::string& input);
// Name of the variable the rule binds.
std::string complex_path_output_var(const std::string& input_var);

std::string dump_mip(const Mip& mip, const CodeModel& model);

}  // namespace mutbench
