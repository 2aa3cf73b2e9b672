#include "skg/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "skg/csv.hpp"
#include "skg/errors.hpp"

namespace skg {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_real(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  if (ec != std::errc{} || ptr != t.data() + t.size())
    throw TypeMismatchError(key, text, "real number");
  return out;
}

std::int64_t parse_int(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  std::int64_t out = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  if (ec != std::errc{} || ptr != t.data() + t.size())
    throw TypeMismatchError(key, text, "integer");
  return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  if (ec != std::errc{} || ptr != t.data() + t.size())
    throw TypeMismatchError(key, text, "unsigned 64-bit integer");
  return out;
}

std::vector<double> parse_real_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  const std::string t = trim(text);
  if (t.empty()) return out;
  std::size_t start = 0;
  while (start <= t.size()) {
    const std::size_t comma = t.find(',', start);
    const std::string item = t.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    out.push_back(parse_real(key, item));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string format_real_list(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ",";
    out += format_double(xs[i]);
  }
  return out;
}

}  // namespace

ConfigMap parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidValueError("config", "cannot open file: " + path);
  ConfigMap out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t[0] == '[') {
      if (t.back() != ']')
        throw InvalidValueError("config", "line " + std::to_string(lineno) +
                                              ": unterminated section header: " + t);
      continue;  // sections carry no meaning; keys are one flat namespace
    }
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw InvalidValueError(
          "config", "line " + std::to_string(lineno) + ": expected key=value, got: " + t);
    const std::string key = trim(t.substr(0, eq));
    if (key.empty())
      throw InvalidValueError("config", "line " + std::to_string(lineno) + ": empty key");
    out[key] = trim(t.substr(eq + 1));
  }
  return out;
}

void apply_entries(RunSettings& base, const ConfigMap& entries) {
  for (const auto& [key, value] : entries) {
    if (key == "dim")
      base.dim = parse_int(key, value);
    else if (key == "n_sites")
      base.n_sites = parse_int(key, value);
    else if (key == "delta")
      base.delta = parse_real(key, value);
    else if (key == "gamma")
      base.gamma = parse_real(key, value);
    else if (key == "mu2")
      base.mu2 = parse_real(key, value);
    else if (key == "lambda")
      base.lambda = parse_real(key, value);
    else if (key == "power")
      base.power = parse_int(key, value);
    else if (key == "sigma")
      base.sigma = parse_real(key, value);
    else if (key == "dt")
      base.dt = parse_real(key, value);
    else if (key == "horizon")
      base.horizon = parse_real(key, value);
    else if (key == "seed")
      base.seed = parse_u64(key, value);
    else if (key == "tol")
      base.tol = parse_real(key, value);
    else if (key == "max_iter")
      base.max_iter = parse_int(key, value);
    else if (key == "order")
      base.order = parse_int(key, value);
    else if (key == "record_every")
      base.record_every = parse_int(key, value);
    else if (key == "ensemble")
      base.ensemble = parse_int(key, value);
    else if (key == "init_amplitude")
      base.init_amplitude = parse_real(key, value);
    else if (key == "snapshot_times")
      base.snapshot_times = parse_real_list(key, value);
    else
      throw UnknownKeyError(key);
  }
}

void RunSettings::validate() const {
  const auto bad = [](const std::string& key, const std::string& why) -> void {
    throw InvalidValueError(key, why);
  };
  if (dim < 1 || dim > 8) bad("dim", "must be in 1..8");
  if (n_sites < 2) bad("n_sites", "must be >= 2");
  if (!(delta > 0.0) || !std::isfinite(delta)) bad("delta", "must be positive");
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) bad("gamma", "must be nonnegative");
  if (!std::isfinite(mu2)) bad("mu2", "must be finite");
  if (!std::isfinite(lambda)) bad("lambda", "must be finite");
  if (power < 1) bad("power", "must be >= 1");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) bad("sigma", "must be nonnegative");
  if (!(dt > 0.0) || !std::isfinite(dt)) bad("dt", "must be positive");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) bad("horizon", "must be positive");
  if (!(tol > 0.0) || !std::isfinite(tol)) bad("tol", "must be positive");
  if (max_iter < 1) bad("max_iter", "must be >= 1");
  if (order < 0) bad("order", "must be >= 0");
  if (record_every < 1) bad("record_every", "must be >= 1");
  if (ensemble < 1) bad("ensemble", "must be >= 1");
  if (!(init_amplitude >= 0.0) || !std::isfinite(init_amplitude))
    bad("init_amplitude", "must be nonnegative");
  for (double t : snapshot_times)
    if (!std::isfinite(t)) bad("snapshot_times", "entries must be finite");
  try {
    (void)grid();
  } catch (const std::invalid_argument& e) {
    bad("horizon", e.what());
  }
}

LatticeSpec RunSettings::lattice() const {
  return LatticeSpec{static_cast<int>(dim), n_sites, delta};
}

ModelParams RunSettings::params() const {
  return ModelParams{gamma, mu2, lambda, static_cast<int>(power), sigma};
}

TimeGrid RunSettings::grid() const { return TimeGrid::from_horizon(horizon, dt); }

SimConfig RunSettings::sim_config() const {
  SimConfig cfg;
  cfg.spec = lattice();
  cfg.params = params();
  cfg.dt = dt;
  cfg.horizon = horizon;
  cfg.seed = seed;
  cfg.record_every = record_every;
  cfg.snapshot_times = snapshot_times;
  cfg.ensemble = ensemble;
  cfg.init_amplitude = init_amplitude;
  return cfg;
}

std::map<std::string, std::string> RunSettings::snapshot() const {
  return {
      {"dim", std::to_string(dim)},
      {"n_sites", std::to_string(n_sites)},
      {"delta", format_double(delta)},
      {"gamma", format_double(gamma)},
      {"mu2", format_double(mu2)},
      {"lambda", format_double(lambda)},
      {"power", std::to_string(power)},
      {"sigma", format_double(sigma)},
      {"dt", format_double(dt)},
      {"horizon", format_double(horizon)},
      {"seed", std::to_string(seed)},
      {"tol", format_double(tol)},
      {"max_iter", std::to_string(max_iter)},
      {"order", std::to_string(order)},
      {"record_every", std::to_string(record_every)},
      {"ensemble", std::to_string(ensemble)},
      {"init_amplitude", format_double(init_amplitude)},
      {"snapshot_times", format_real_list(snapshot_times)},
  };
}

RunSettings resolve_settings(const std::string& path, const ConfigMap& overrides) {
  RunSettings settings;
  if (!path.empty()) apply_entries(settings, parse_config_file(path));
  apply_entries(settings, overrides);
  settings.validate();
  return settings;
}

}  // namespace skg
