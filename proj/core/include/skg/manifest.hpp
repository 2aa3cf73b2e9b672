#pragma once

// Run provenance: every output directory gets a manifest.json recording the
// tool version, subcommand, seed, effective configuration, wall-clock span,
// and a digest of every file the run emitted.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace skg {

struct OutputRecord {
  std::string name;  // file name relative to the output directory
  std::uint64_t bytes = 0;
  std::string fnv1a64;  // 16 hex digits
};

struct RunManifest {
  std::string tool_version;
  std::string subcommand;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> config;
  std::string started_utc;
  std::string finished_utc;
  std::vector<OutputRecord> outputs;
};

// FNV-1a, 64-bit, over the file's raw bytes. Throws std::runtime_error if the
// file cannot be read.
std::uint64_t fnv1a64_file(const std::string& path);
std::string to_hex64(std::uint64_t value);

// Digest dir/name and append it to the manifest's output list.
void add_output(RunManifest& manifest, const std::string& dir, const std::string& name);

// Serialize to dir/manifest.json (pretty-printed, stable key order).
void write_manifest(const RunManifest& manifest, const std::string& dir);

std::string utc_timestamp_now();  // e.g. 2026-01-31T09:15:00Z

}  // namespace skg
