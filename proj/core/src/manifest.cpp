#include "skg/manifest.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace skg {

std::uint64_t fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read file for digest: " + path);
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  char buffer[1 << 16];
  while (in.read(buffer, sizeof buffer) || in.gcount() > 0) {
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      hash ^= static_cast<unsigned char>(buffer[i]);
      hash *= 0x100000001b3ULL;
    }
  }
  return hash;
}

std::string to_hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

void add_output(RunManifest& manifest, const std::string& dir, const std::string& name) {
  const std::string path = dir + "/" + name;
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw std::runtime_error("cannot stat output file: " + path);
  const std::uint64_t bytes = static_cast<std::uint64_t>(in.tellg());
  in.close();
  manifest.outputs.push_back(OutputRecord{name, bytes, to_hex64(fnv1a64_file(path))});
}

void write_manifest(const RunManifest& manifest, const std::string& dir) {
  nlohmann::ordered_json j;
  j["tool_version"] = manifest.tool_version;
  j["subcommand"] = manifest.subcommand;
  j["seed"] = manifest.seed;
  j["config"] = manifest.config;  // std::map: keys already sorted
  j["started_utc"] = manifest.started_utc;
  j["finished_utc"] = manifest.finished_utc;
  nlohmann::ordered_json outs = nlohmann::ordered_json::array();
  for (const auto& o : manifest.outputs) {
    nlohmann::ordered_json rec;
    rec["name"] = o.name;
    rec["bytes"] = o.bytes;
    rec["fnv1a64"] = o.fnv1a64;
    outs.push_back(rec);
  }
  j["outputs"] = outs;

  const std::string path = dir + "/manifest.json";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write manifest: " + path);
  out << j.dump(2) << '\n';
}

std::string utc_timestamp_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace skg
