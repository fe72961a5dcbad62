#include "mutbench/classification.hpp"

#include <fstream>
#include <map>
#include <stdexcept>

#include <json.hpp>

#include "mutbench/text_util.hpp"

namespace mutbench {

namespace {

const std::map<std::string, ClassKind>& kind_by_name() {
  static const std::map<std::string, ClassKind> table = {
      {"activity", ClassKind::Activity},
      {"fragment", ClassKind::Fragment},
      {"dialog-fragment", ClassKind::DialogFragment},
      {"broadcast-receiver", ClassKind::BroadcastReceiver},
      {"listener-impl", ClassKind::ListenerImpl},
      {"sqlite-helper", ClassKind::SqliteHelper},
      {"plain", ClassKind::Plain},
  };
  return table;
}

}  // namespace

std::string_view class_kind_name(ClassKind kind) {
  switch (kind) {
    case ClassKind::Activity:
      return "activity";
    case ClassKind::Fragment:
      return "fragment";
    case ClassKind::DialogFragment:
      return "dialog-fragment";
    case ClassKind::BroadcastReceiver:
      return "broadcast-receiver";
    case ClassKind::ListenerImpl:
      return "listener-impl";
    case ClassKind::SqliteHelper:
      return "sqlite-helper";
    case ClassKind::Plain:
      return "plain";
  }
  return "plain";
}

bool type_name_matches(std::string_view written, std::string_view entry) {
  if (written == entry) return true;
  if (written.size() > entry.size() &&
      ends_with(written, std::string(".") + std::string(entry))) {
    return true;
  }
  if (entry.size() > written.size() &&
      ends_with(entry, std::string(".") + std::string(written))) {
    return true;
  }
  return false;
}

std::optional<ClassKind> ClassificationTable::kind_for_supertype(
    std::string_view name) const {
  for (const auto& rule : supertype_rules) {
    if (type_name_matches(name, rule.supertype)) return rule.kind;
  }
  return std::nullopt;
}

const LifecycleEntry* ClassificationTable::lifecycle_for(
    ClassKind kind, std::string_view method) const {
  auto search = [&](const std::vector<LifecycleEntry>& list)
      -> const LifecycleEntry* {
    for (const auto& entry : list) {
      if (entry.method == method) return &entry;
    }
    return nullptr;
  };
  switch (kind) {
    case ClassKind::Activity:
      return search(activity_lifecycle);
    case ClassKind::Fragment:
      return search(fragment_lifecycle);
    case ClassKind::DialogFragment:
      if (const LifecycleEntry* e = search(dialog_fragment_lifecycle)) {
        return e;
      }
      return search(fragment_lifecycle);
    default:
      return nullptr;
  }
}

const CallbackEntry* ClassificationTable::listener_for(
    std::string_view owner, std::string_view method) const {
  for (const auto& entry : listener_callbacks) {
    if (entry.method == method && type_name_matches(owner, entry.owner)) {
      return &entry;
    }
  }
  return nullptr;
}

bool ClassificationTable::is_listener_attach(std::string_view method) const {
  for (const auto& name : listener_attach_methods) {
    if (name == method) return true;
  }
  return method.size() >
             listener_attach_prefix.size() + listener_attach_suffix.size() &&
         starts_with(method, listener_attach_prefix) &&
         ends_with(method, listener_attach_suffix);
}

bool ClassificationTable::is_implicit_invoker(std::string_view method) const {
  for (const auto& name : implicit_invokers) {
    if (name == method) return true;
  }
  return false;
}

ClassificationTable default_classification_table() {
  ClassificationTable t;
  t.supertype_rules = {
      {"DialogFragment", ClassKind::DialogFragment},
      {"Activity", ClassKind::Activity},
      {"AppCompatActivity", ClassKind::Activity},
      {"Fragment", ClassKind::Fragment},
      {"BroadcastReceiver", ClassKind::BroadcastReceiver},
      {"SQLiteOpenHelper", ClassKind::SqliteHelper},
      {"android.database.sqlite.SQLiteOpenHelper", ClassKind::SqliteHelper},
      {"PhoneStateListener", ClassKind::ListenerImpl},
  };
  t.activity_lifecycle = {
      {"onCreate", 1}, {"onStart", 2},  {"onResume", 3},
      {"onPause", 4},  {"onStop", 5},   {"onDestroy", 6},
  };
  t.fragment_lifecycle = {
      {"onAttach", 1},      {"onCreate", 2},       {"onCreateView", 3},
      {"onActivityCreated", 4}, {"onStart", 5},    {"onResume", 6},
      {"onPause", 7},       {"onStop", 8},         {"onDestroyView", 9},
      {"onDestroy", 10},    {"onDetach", 11},
  };
  t.dialog_fragment_lifecycle = {
      {"onCreateDialog", 3},
  };
  t.listener_callbacks = {
      {"View.OnClickListener", "onClick", false},
      {"DialogInterface.OnClickListener", "onClick", false},
      {"DialogInterface.OnDismissListener", "onDismiss", false},
      {"NavigationView.OnNavigationItemSelectedListener",
       "onNavigationItemSelected", false},
      {"AdapterView.OnItemClickListener", "onItemClick", false},
      {"LocationListener", "onLocationChanged", false},
      {"LocationListener", "onStatusChanged", false},
      {"PhoneStateListener", "onDataConnectionStateChanged", true},
      {"SQLiteOpenHelper", "onCreate", true},
      {"SQLiteOpenHelper", "onUpgrade", true},
  };
  t.receiver_register_methods = {"registerReceiver"};
  t.listener_attach_methods = {"listen", "setNavigationItemSelectedListener"};
  t.implicit_invokers = {"runOnUiThread", "submit", "execute", "post",
                         "postDelayed"};
  return t;
}

namespace {

using nlohmann::json;

std::vector<LifecycleEntry> lifecycle_from_json(const json& list) {
  std::vector<LifecycleEntry> out;
  for (const auto& item : list) {
    out.push_back(LifecycleEntry{item.at("method").get<std::string>(),
                                 item.at("order").get<int>()});
  }
  return out;
}

json lifecycle_to_json(const std::vector<LifecycleEntry>& list) {
  json out = json::array();
  for (const auto& entry : list) {
    out.push_back({{"method", entry.method}, {"order", entry.order}});
  }
  return out;
}

}  // namespace

ClassificationTable load_classification_table(
    const std::filesystem::path& path) {
  json doc;
  {
    std::ifstream in(path);
    if (!in) {
      throw std::runtime_error("cannot open classification table: " +
                               path.string());
    }
    try {
      in >> doc;
    } catch (const json::exception& e) {
      throw std::runtime_error("malformed classification table " +
                               path.string() + ": " + e.what());
    }
  }
  ClassificationTable t;
  try {
    for (const auto& item : doc.at("class-kinds")) {
      std::string kind = item.at("kind").get<std::string>();
      auto it = kind_by_name().find(kind);
      if (it == kind_by_name().end()) {
        throw std::runtime_error("unknown class kind: " + kind);
      }
      t.supertype_rules.push_back(
          SupertypeRule{item.at("supertype").get<std::string>(), it->second});
    }
    t.activity_lifecycle = lifecycle_from_json(doc.at("activity-lifecycle"));
    t.fragment_lifecycle = lifecycle_from_json(doc.at("fragment-lifecycle"));
    if (doc.contains("dialog-fragment-lifecycle")) {
      t.dialog_fragment_lifecycle =
          lifecycle_from_json(doc.at("dialog-fragment-lifecycle"));
    }
    for (const auto& item : doc.at("listener-callbacks")) {
      t.listener_callbacks.push_back(
          CallbackEntry{item.at("owner").get<std::string>(),
                        item.at("method").get<std::string>(),
                        item.value("abstract", false)});
    }
    t.receiver_register_methods =
        doc.at("receiver-register-methods").get<std::vector<std::string>>();
    t.listener_attach_methods =
        doc.at("listener-attach-methods").get<std::vector<std::string>>();
    t.listener_attach_prefix = doc.value("listener-attach-prefix", "setOn");
    t.listener_attach_suffix = doc.value("listener-attach-suffix", "Listener");
    t.implicit_invokers =
        doc.at("implicit-invokers").get<std::vector<std::string>>();
    t.thread_type = doc.value("thread-type", "Thread");
    t.thread_start_method = doc.value("thread-start-method", "start");
  } catch (const json::exception& e) {
    throw std::runtime_error("invalid classification table " + path.string() +
                             ": " + e.what());
  }
  return t;
}

std::string classification_table_to_json(const ClassificationTable& t) {
  json doc;
  doc["class-kinds"] = json::array();
  for (const auto& rule : t.supertype_rules) {
    doc["class-kinds"].push_back(
        {{"supertype", rule.supertype},
         {"kind", std::string(class_kind_name(rule.kind))}});
  }
  doc["activity-lifecycle"] = lifecycle_to_json(t.activity_lifecycle);
  doc["fragment-lifecycle"] = lifecycle_to_json(t.fragment_lifecycle);
  doc["dialog-fragment-lifecycle"] =
      lifecycle_to_json(t.dialog_fragment_lifecycle);
  doc["listener-callbacks"] = json::array();
  for (const auto& entry : t.listener_callbacks) {
    doc["listener-callbacks"].push_back({{"owner", entry.owner},
                                         {"method", entry.method},
                                         {"abstract", entry.abstract_owner}});
  }
  doc["receiver-register-methods"] = t.receiver_register_methods;
  doc["listener-attach-methods"] = t.listener_attach_methods;
  doc["listener-attach-prefix"] = t.listener_attach_prefix;
  doc["listener-attach-suffix"] = t.listener_attach_suffix;
  doc["implicit-invokers"] = t.implicit_invokers;
  doc["thread-type"] = t.thread_type;
  doc["thread-start-method"] = t.thread_start_method;
  return doc.dump(2) + "\n";
}

}  // namespace mutbench
