#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace mutbench {

struct RunManifest {
  std::string run_id;
  std::string corpus;
  std::vector<std::string> schemes;
  std::string operator_file;
  std::string catalog_file;
  std::string out_dir;
  std::string created_at;  // ISO 8601 UTC
  std::string seed_note;
};

std::string manifest_to_json(const RunManifest& manifest);
// Writes `manifest.json` into out_dir; call before producing any output.
void write_manifest(const RunManifest& manifest,
                    const std::filesystem::path& out_dir);
std::string current_timestamp_utc();

}  // namespace mutbench
