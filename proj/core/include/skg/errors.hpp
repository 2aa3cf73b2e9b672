#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace skg {

// Field magnitude crossed the abort threshold during time stepping.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(std::int64_t step, double time, double max_abs)
      : std::runtime_error(describe(step, time, max_abs)),
        step(step),
        time(time),
        max_abs(max_abs) {}

  std::int64_t step;  // -1 when the failing step is not known to the thrower
  double time;
  double max_abs;

 private:
  static std::string describe(std::int64_t step, double time, double max_abs) {
    std::string msg = "field blow-up: |phi|_inf = " + std::to_string(max_abs);
    if (step >= 0)
      msg += " at step " + std::to_string(step) + ", t = " + std::to_string(time);
    return msg;
  }
};

// Fixed-point iteration left the contractive regime.
class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(int iterations, double residual, const std::string& why)
      : std::runtime_error("iteration did not converge after " + std::to_string(iterations) +
                           " sweeps (residual " + std::to_string(residual) + "): " + why),
        iterations(iterations),
        residual(residual) {}

  int iterations;
  double residual;
};

// Spectral data no longer looks like the transform of a real field.
class SpectralSymmetryError : public std::runtime_error {
 public:
  explicit SpectralSymmetryError(double violation)
      : std::runtime_error("spectral field breaks Hermitian symmetry (relative violation " +
                           std::to_string(violation) + ")"),
        violation(violation) {}

  double violation;
};

// Configuration errors carry the offending key so the CLI can name it.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& message, std::string key)
      : std::runtime_error(message), key(std::move(key)) {}

  std::string key;
};

class UnknownKeyError : public ConfigError {
 public:
  explicit UnknownKeyError(const std::string& key)
      : ConfigError("unknown config key: " + key, key) {}
};

class TypeMismatchError : public ConfigError {
 public:
  TypeMismatchError(const std::string& key, const std::string& value, const std::string& want)
      : ConfigError("config key " + key + ": cannot parse \"" + value + "\" as " + want, key) {}
};

class MissingRequiredError : public ConfigError {
 public:
  explicit MissingRequiredError(const std::string& key)
      : ConfigError("missing required config key: " + key, key) {}
};

class InvalidValueError : public ConfigError {
 public:
  InvalidValueError(const std::string& key, const std::string& why)
      : ConfigError("config key " + key + ": " + why, key) {}
};

}  // namespace skg
