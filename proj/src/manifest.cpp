#include "mutbench/manifest.hpp"

#include <ctime>

#include <json.hpp>

#include "mutbench/text_util.hpp"

namespace mutbench {

std::string manifest_to_json(const RunManifest& manifest) {
  nlohmann::json doc;
  doc["run-id"] = manifest.run_id;
  doc["corpus"] = manifest.corpus;
  doc["schemes"] = manifest.schemes;
  doc["operator-file"] = manifest.operator_file;
  doc["catalog-file"] = manifest.catalog_file;
  doc["out-dir"] = manifest.out_dir;
  doc["created-at"] = manifest.created_at;
  doc["seed-note"] = manifest.seed_note;
  return doc.dump(2) + "\n";
}

void write_manifest(const RunManifest& manifest,
                    const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  write_file_atomic(out_dir / "manifest.json", manifest_to_json(manifest));
}

std::string current_timestamp_utc() {
  std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buffer;
}

}  // namespace mutbench
