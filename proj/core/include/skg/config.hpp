#pragma once

// Key=value run configuration: file parsing, flag overrides, typed settings,
// and conversion into the domain configs consumed by the solver modules.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "skg/duhamel.hpp"
#include "skg/kernels.hpp"
#include "skg/lattice.hpp"
#include "skg/simulator.hpp"

namespace skg {

// Flat key -> raw text, last assignment wins (file order, then overrides).
using ConfigMap = std::map<std::string, std::string>;

// INI-style text: blank lines and #/; comments skipped, [section] headers
// checked for syntax but otherwise ignored (keys form one flat namespace).
// Throws ConfigError subclasses on unreadable files or malformed lines.
ConfigMap parse_config_file(const std::string& path);

// Every tunable the tools accept, with its default. Field names double as the
// config keys.
struct RunSettings {
  std::int64_t dim = 1;
  std::int64_t n_sites = 16;
  double delta = 1.0;
  double gamma = 1.0;
  double mu2 = 1.0;
  double lambda = 0.0;
  std::int64_t power = 3;
  double sigma = 0.0;
  double dt = 0.01;
  double horizon = 1.0;
  std::uint64_t seed = 12345;
  double tol = 1e-8;
  std::int64_t max_iter = 50;
  std::int64_t order = 2;
  std::int64_t record_every = 1;
  std::int64_t ensemble = 1;
  double init_amplitude = 0.01;
  std::vector<double> snapshot_times;

  // Cross-field checks; throws InvalidValueError naming the offending key.
  void validate() const;

  LatticeSpec lattice() const;
  ModelParams params() const;
  TimeGrid grid() const;
  SimConfig sim_config() const;

  // All keys with their effective values, in key order, for the run manifest.
  std::map<std::string, std::string> snapshot() const;
};

// Apply `entries` on top of `base`; unknown keys or unparsable values throw
// the matching ConfigError subclass.
void apply_entries(RunSettings& base, const ConfigMap& entries);

// defaults -> optional file -> overrides, then validate. Empty `path` skips
// the file stage.
RunSettings resolve_settings(const std::string& path, const ConfigMap& overrides);

}  // namespace skg
