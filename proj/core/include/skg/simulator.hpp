#pragma once

// Direct Euler-Maruyama integration of the first-order system
//   dphi = v dt,   dv = (lap phi - gamma v - mu2 phi - lambda phi^p) dt + sigma dW,
// with deterministic counter-based noise, observable traces, and ensembles.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "skg/duhamel.hpp"
#include "skg/kernels.hpp"
#include "skg/lattice.hpp"

namespace skg {

// Sub-stream tags: the run's master seed is split into independent streams for
// the initial fluctuation field and the per-step noise.
inline constexpr std::uint64_t kInitStreamTag = 1;
inline constexpr std::uint64_t kNoiseStreamTag = 2;

struct SimConfig {
  LatticeSpec spec;
  ModelParams params;
  double dt = 1e-2;
  double horizon = 1.0;
  std::uint64_t seed = 0;
  std::int64_t record_every = 1;
  std::vector<double> snapshot_times;
  std::int64_t ensemble = 1;
  double init_amplitude = 0.01;

  // Throws std::invalid_argument on out-of-range values or a horizon that is
  // not a whole number of steps.
  void validate() const;
  TimeGrid grid() const;
  // Advisory only: true when dt exceeds the heuristic bound min(0.1, delta/2).
  bool dt_exceeds_stability() const;
  std::string stability_note() const;
};

struct State {
  Field phi;
  Field vel;

  static State rest(Field phi0);  // given displacement, zero velocity
};

struct Observables {
  double order_param = 0.0;  // site average of phi
  double variance = 0.0;     // site variance of phi
};

Observables observables(const Field& phi);

struct Snapshot {
  double time = 0.0;
  Field field;
};

struct Trace {
  std::vector<double> times;
  std::vector<double> order_param;
  std::vector<double> variance;
  std::vector<Snapshot> snapshots;
};

// One semi-implicit update: the velocity moves first using the current field,
// then the field moves with the NEW velocity.  `noise_slice`
// holds i.i.d. standard normals; the sigma*sqrt(dt) factor is applied here.
// Throws BlowUpError (with unknown step index) when |phi|_inf exceeds 1e6.
State em_step(const State& state, const SimConfig& cfg, const Field& noise_slice);

// Evolve from phi(0) = amplitude * normal field, v(0) = 0, recording
// observables every record_every steps (plus the first and last nodes) and
// field snapshots at the nodes nearest the requested times.
Trace run(const SimConfig& cfg);

// Same loop from caller-supplied initial data.
Trace run_from(const SimConfig& cfg, State initial);

// Advance `steps` EM steps from `state`, drawing noise with step indices
// first_step, first_step+1, ... from cfg.seed's noise stream.
State evolve(const SimConfig& cfg, State state, std::int64_t first_step, std::int64_t steps);

// Member i reruns the config under an independently derived seed; member 0 of
// any ensemble reproduces run(cfg) exactly.
std::vector<Trace> ensemble_run(const SimConfig& cfg);

// The initial fluctuation field drawn from the init stream of cfg.seed.
Field initial_fluctuation(const SimConfig& cfg);

// Energy functional with forward-difference gradient:
//   sum_x [ v^2/2 + |grad phi|^2/2 + mu2 phi^2/2 + lambda phi^(p+1)/(p+1) ] delta^d.
// Non-increasing (up to O(dt^2) per step) for the noiseless damped flow.
double discrete_energy(const State& state, const ModelParams& params);

// A frozen noise path on a time grid, shared between the stepping scheme and
// the integral-equation solvers so both see the identical forcing.
struct NoiseRealization {
  LatticeSpec spec;
  TimeGrid grid;
  double sigma = 0.0;
  std::vector<std::vector<double>> eta;  // eta[n][site], n = 0..steps-1

  // Draws the same normals, in the same counter order, that run()/evolve()
  // would consume for this seed.
  static NoiseRealization sample(const LatticeSpec& spec, const TimeGrid& grid, double sigma,
                                 std::uint64_t seed);

  // Piecewise-constant forcing: slice n holds sigma * eta_n / sqrt(dt) for
  // n < steps; the final node repeats the last slice.
  SpaceTimeField forcing() const;
};

}  // namespace skg
