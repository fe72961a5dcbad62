#include "mutbench/operators.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "mutbench/text_util.hpp"

namespace mutbench {

std::string_view operator_goal_name(OperatorGoal goal) {
  switch (goal) {
    case OperatorGoal::DataLeak:
      return "data-leak";
    case OperatorGoal::SslMisuse:
      return "ssl-misuse";
  }
  return "data-leak";
}

std::string OperatorInstance::variable() const {
  return "dataLeak" + std::to_string(mutant_id);
}

std::string OperatorInstance::field_decl() const {
  // First token of the source statement is the declared type.
  std::size_t space = source_stmt.find(' ');
  std::string type =
      space == std::string::npos ? "String" : source_stmt.substr(0, space);
  return type + " " + variable() + " = \"\";";
}

std::string OperatorInstance::source_assignment() const {
  std::size_t space = source_stmt.find(' ');
  if (space == std::string::npos) return source_stmt;
  return trim(source_stmt.substr(space + 1));
}

std::string OperatorInstance::sink_for_variable(
    const std::string& var) const {
  return replace_all(sink_stmt, variable(), var);
}

std::string OperatorInstance::source_marker() const {
  return "android.util.Log.v(\"leak-src-" + std::to_string(mutant_id) +
         "\", " + variable() + ");";
}

OperatorInstance instantiate(const SecurityOperator& op, int mutant_id) {
  if (mutant_id <= 0) {
    throw std::invalid_argument("mutant id must be positive");
  }
  std::string id = std::to_string(mutant_id);
  OperatorInstance instance;
  instance.mutant_id = mutant_id;
  instance.source_stmt = replace_all(op.source_template, "##", id);
  instance.sink_stmt = replace_all(op.sink_template, "##", id);
  instance.tag = "leak-" + id;
  return instance;
}

SourceSinkCatalog parse_catalog(const std::string& text,
                                const std::string& name) {
  SourceSinkCatalog catalog;
  std::set<std::string> seen_sources;
  std::set<std::string> seen_sinks;
  int line_number = 0;
  for (const std::string& raw : split(text, '\n')) {
    ++line_number;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '%') continue;
    std::size_t arrow = line.rfind("->");
    if (arrow == std::string::npos) {
      throw std::runtime_error(name + ":" + std::to_string(line_number) +
                               ": catalog line has no '-> SOURCE|SINK' suffix");
    }
    std::string signature = trim(line.substr(0, arrow));
    std::string role = trim(line.substr(arrow + 2));
    if (signature.empty()) {
      throw std::runtime_error(name + ":" + std::to_string(line_number) +
                               ": catalog line has an empty signature");
    }
    if (role == "SOURCE") {
      if (seen_sources.insert(signature).second) {
        catalog.sources.push_back(signature);
      }
    } else if (role == "SINK") {
      if (seen_sinks.insert(signature).second) {
        catalog.sinks.push_back(signature);
      }
    } else {
      throw std::runtime_error(name + ":" + std::to_string(line_number) +
                               ": expected SOURCE or SINK, found '" + role +
                               "'");
    }
  }
  return catalog;
}

SourceSinkCatalog load_catalog(const std::filesystem::path& path) {
  return parse_catalog(read_file(path), path.string());
}

void validate_catalog(const SourceSinkCatalog& catalog, OperatorGoal goal) {
  if (goal == OperatorGoal::DataLeak &&
      (catalog.sources.empty() || catalog.sinks.empty())) {
    throw std::runtime_error(
        "data-leak catalog needs at least one source and one sink");
  }
}

SecurityOperator operator_from_catalog(const SourceSinkCatalog& catalog,
                                       std::size_t source_index,
                                       std::size_t sink_index,
                                       const std::string& operator_id) {
  if (source_index >= catalog.sources.size() ||
      sink_index >= catalog.sinks.size()) {
    throw std::out_of_range("catalog index out of range");
  }
  const std::string& source = catalog.sources[source_index];
  const std::string& sink = catalog.sinks[sink_index];
  SecurityOperator op;
  op.operator_id = operator_id;
  op.goal = OperatorGoal::DataLeak;
  std::string source_call = source;
  if (!ends_with(source_call, ")")) source_call += "()";
  op.source_template =
      "String dataLeak## = String.valueOf(" + source_call + ");";
  std::string sink_call = sink;
  if (ends_with(sink_call, "()")) {
    sink_call = sink_call.substr(0, sink_call.size() - 2);
  }
  op.sink_template = sink_call + "(\"leak-##\", dataLeak##);";
  op.source_api = source;
  op.sink_api = sink;
  return op;
}

SecurityOperator default_data_leak_operator() {
  SecurityOperator op;
  op.operator_id = "calendar-log-leak";
  op.goal = OperatorGoal::DataLeak;
  op.source_template =
      "String dataLeak## = "
      "java.util.Calendar.getInstance().getTimeZone().getDisplayName();";
  op.sink_template = "android.util.Log.d(\"leak-##\", dataLeak##);";
  op.source_api = "java.util.Calendar.getTimeZone().getDisplayName";
  op.sink_api = "android.util.Log.d";
  return op;
}

SecurityOperator ssl_operator() {
  SecurityOperator op;
  op.operator_id = "trust-all-manager";
  op.goal = OperatorGoal::SslMisuse;
  op.source_template =
      "class TrustAll## implements javax.net.ssl.X509TrustManager {\n"
      "    public boolean isServerTrusted("
      "java.security.cert.X509Certificate[] chain) { return true; }\n"
      "    public void checkClientTrusted("
      "java.security.cert.X509Certificate[] chain, String authType) { }\n"
      "    public void checkServerTrusted("
      "java.security.cert.X509Certificate[] chain, String authType) { }\n"
      "    public java.security.cert.X509Certificate[] getAcceptedIssuers() "
      "{ return null; }\n"
      "}\n"
      "String dataLeak## = \"TrustAll##\";";
  op.sink_template = "android.util.Log.d(\"leak-##\", dataLeak##);";
  op.source_api = "javax.net.ssl.X509TrustManager";
  op.sink_api = "android.util.Log.d";
  return op;
}

namespace {

using nlohmann::json;

OperatorGoal goal_from_name(const std::string& name) {
  if (name == "data-leak") return OperatorGoal::DataLeak;
  if (name == "ssl-misuse") return OperatorGoal::SslMisuse;
  throw std::runtime_error("unknown operator goal: " + name);
}

}  // namespace

SecurityOperator load_operator(const std::filesystem::path& path) {
  json doc;
  {
    std::ifstream in(path);
    if (!in) {
      throw std::runtime_error("cannot open operator file: " + path.string());
    }
    try {
      in >> doc;
    } catch (const json::exception& e) {
      throw std::runtime_error("malformed operator file " + path.string() +
                               ": " + e.what());
    }
  }
  SecurityOperator op;
  try {
    op.operator_id = doc.at("operator-id").get<std::string>();
    op.goal = goal_from_name(doc.at("goal").get<std::string>());
    op.source_template = doc.at("source-template").get<std::string>();
    op.sink_template = doc.at("sink-template").get<std::string>();
    if (doc.contains("required-imports")) {
      op.required_imports =
          doc.at("required-imports").get<std::vector<std::string>>();
    }
    op.source_api = doc.at("source-api").get<std::string>();
    op.sink_api = doc.at("sink-api").get<std::string>();
  } catch (const json::exception& e) {
    throw std::runtime_error("invalid operator file " + path.string() + ": " +
                             e.what());
  }
  if (op.source_template.find("##") == std::string::npos ||
      op.sink_template.find("##") == std::string::npos) {
    throw std::runtime_error("operator templates must contain the '##' id "
                             "placeholder: " +
                             path.string());
  }
  return op;
}

std::string operator_to_json(const SecurityOperator& op) {
  json doc;
  doc["operator-id"] = op.operator_id;
  doc["goal"] = std::string(operator_goal_name(op.goal));
  doc["source-template"] = op.source_template;
  doc["sink-template"] = op.sink_template;
  doc["required-imports"] = op.required_imports;
  doc["source-api"] = op.source_api;
  doc["sink-api"] = op.sink_api;
  return doc.dump(2) + "\n";
}

}  // namespace mutbench
