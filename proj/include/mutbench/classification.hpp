#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mutbench {

enum class ClassKind {
  Activity,
  Fragment,
  DialogFragment,
  BroadcastReceiver,
  ListenerImpl,
  SqliteHelper,
  Plain,
};

std::string_view class_kind_name(ClassKind kind);

struct SupertypeRule {
  std::string supertype;
  ClassKind kind = ClassKind::Plain;
};

struct LifecycleEntry {
  std::string method;
  int order = 0;
};

// Listener-style callback: a method that the platform invokes on classes
// extending/implementing `owner`. `abstract_owner` distinguishes abstract
// classes from interfaces; some analyzers treat the two differently.
struct CallbackEntry {
  std::string owner;
  std::string method;
  bool abstract_owner = false;
};

// Data-driven view of the Android surface the model needs: which supertypes
// imply which component kind, the lifecycle orders, which methods attach
// listeners or hand off runnables. Shipped as a config file so tests (and
// platform evolution) can toggle entries without code changes.
struct ClassificationTable {
  std::vector<SupertypeRule> supertype_rules;
  std::vector<LifecycleEntry> activity_lifecycle;
  std::vector<LifecycleEntry> fragment_lifecycle;
  std::vector<LifecycleEntry> dialog_fragment_lifecycle;  // additions
  std::vector<CallbackEntry> listener_callbacks;
  std::vector<std::string> receiver_register_methods;
  std::vector<std::string> listener_attach_methods;  // exact names
  std::string listener_attach_prefix = "setOn";
  std::string listener_attach_suffix = "Listener";
  std::vector<std::string> implicit_invokers;  // runnable hand-off methods
  std::string thread_type = "Thread";
  std::string thread_start_method = "start";

  std::optional<ClassKind> kind_for_supertype(std::string_view name) const;
  const LifecycleEntry* lifecycle_for(ClassKind kind,
                                      std::string_view method) const;
  const CallbackEntry* listener_for(std::string_view owner,
                                    std::string_view method) const;
  bool is_listener_attach(std::string_view method) const;
  bool is_implicit_invoker(std::string_view method) const;
};

// True when a supertype written in source (possibly qualified) refers to a
// table entry (possibly unqualified), or vice versa.
bool type_name_matches(std::string_view written, std::string_view entry);

ClassificationTable default_classification_table();
ClassificationTable load_classification_table(const std::filesystem::path&);
std::string classification_table_to_json(const ClassificationTable&);

}  // namespace mutbench
