#include "skg/simulator.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "skg/errors.hpp"
#include "skg/parallel.hpp"
#include "skg/rng.hpp"

namespace skg {

namespace {

constexpr double kBlowUpLimit = 1e6;

double pow_int(double base, int exponent) {
  double out = 1.0;
  for (int i = 0; i < exponent; ++i) out *= base;
  return out;
}

Field noise_slice_at(const LatticeSpec& spec, NoiseStream& stream, std::int64_t step) {
  Field slice = Field::zeros(spec);
  const std::uint64_t n = spec.site_count();
  const std::uint64_t base = static_cast<std::uint64_t>(step) * n;
  for (std::uint64_t i = 0; i < n; ++i)
    slice.values[static_cast<std::size_t>(i)] = stream.normal(base + i);
  return slice;
}

// One step with full diagnostics attached to any blow-up.
State step_once(const State& state, const SimConfig& cfg, NoiseStream& stream, std::int64_t step) {
  const Field slice = noise_slice_at(cfg.spec, stream, step);
  try {
    return em_step(state, cfg, slice);
  } catch (const BlowUpError& e) {
    throw BlowUpError(step + 1, static_cast<double>(step + 1) * cfg.dt, e.max_abs);
  }
}

}  // namespace

void SimConfig::validate() const {
  spec.validate();
  params.validate();
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw std::invalid_argument("horizon must be positive");
  if (record_every < 1) throw std::invalid_argument("record_every must be >= 1");
  if (ensemble < 1) throw std::invalid_argument("ensemble must be >= 1");
  if (!(init_amplitude >= 0.0) || !std::isfinite(init_amplitude))
    throw std::invalid_argument("init_amplitude must be a nonnegative real");
  for (double t : snapshot_times)
    if (!std::isfinite(t)) throw std::invalid_argument("snapshot times must be finite");
  (void)grid();  // horizon/dt must resolve to a whole number of steps
}

TimeGrid SimConfig::grid() const { return TimeGrid::from_horizon(horizon, dt); }

bool SimConfig::dt_exceeds_stability() const {
  const double bound = std::min(0.1, spec.spacing / 2.0);
  return dt > bound;
}

std::string SimConfig::stability_note() const {
  std::ostringstream os;
  os << "time step " << dt << " exceeds the stability heuristic min(0.1, delta/2) = "
     << std::min(0.1, spec.spacing / 2.0) << "; expect inaccurate or divergent trajectories";
  return os.str();
}

State State::rest(Field phi0) {
  Field v = Field::zeros(phi0.spec);
  return State{std::move(phi0), std::move(v)};
}

Observables observables(const Field& phi) {
  const std::size_t n = phi.values.size();
  double sum = 0.0;
  for (double x : phi.values) sum += x;
  const double mean = sum / static_cast<double>(n);
  double var_sum = 0.0;
  for (double x : phi.values) {
    const double d = x - mean;
    var_sum += d * d;
  }
  return Observables{mean, var_sum / static_cast<double>(n)};
}

State em_step(const State& state, const SimConfig& cfg, const Field& noise_slice) {
  const LatticeSpec& spec = cfg.spec;
  if (state.phi.spec != spec || state.vel.spec != spec || noise_slice.spec != spec)
    throw std::invalid_argument("em_step: state and noise must share the config's lattice");
  const ModelParams& mp = cfg.params;
  const double dt = cfg.dt;
  const double noise_scale = mp.sigma * std::sqrt(dt);

  const Field lap = laplacian_apply(state.phi);
  State next{Field::zeros(spec), Field::zeros(spec)};
  const std::size_t n = state.phi.values.size();
  double max_abs = 0.0;
  bool finite = true;
  for (std::size_t i = 0; i < n; ++i) {
    const double phi = state.phi.values[i];
    const double drift =
        lap.values[i] - mp.gamma * state.vel.values[i] - mp.mu2 * phi - mp.lambda * pow_int(phi, mp.power);
    const double v_new = state.vel.values[i] + drift * dt + noise_scale * noise_slice.values[i];
    const double phi_new = phi + v_new * dt;
    next.vel.values[i] = v_new;
    next.phi.values[i] = phi_new;
    const double a = std::abs(phi_new);
    if (a > max_abs) max_abs = a;
    if (!std::isfinite(phi_new) || !std::isfinite(v_new)) finite = false;
  }
  if (!finite || max_abs > kBlowUpLimit)
    throw BlowUpError(-1, 0.0, finite ? max_abs : std::numeric_limits<double>::infinity());
  return next;
}

Field initial_fluctuation(const SimConfig& cfg) {
  Field eps = Field::zeros(cfg.spec);
  if (cfg.init_amplitude == 0.0) return eps;
  NoiseStream stream(derive_stream(cfg.seed, kInitStreamTag));
  for (std::size_t i = 0; i < eps.values.size(); ++i)
    eps.values[i] = cfg.init_amplitude * stream.normal(static_cast<std::uint64_t>(i));
  return eps;
}

Trace run(const SimConfig& cfg) { return run_from(cfg, State::rest(initial_fluctuation(cfg))); }

Trace run_from(const SimConfig& cfg, State initial) {
  cfg.validate();
  const TimeGrid grid = cfg.grid();
  const std::int64_t steps = grid.steps;

  // Map each requested snapshot time to its nearest node (within half a step).
  std::vector<std::pair<std::int64_t, double>> wanted;
  for (double ts : cfg.snapshot_times) {
    const std::int64_t node = static_cast<std::int64_t>(std::llround(ts / cfg.dt));
    if (node < 0 || node > steps) continue;
    if (std::abs(grid.time_at(node) - ts) <= cfg.dt / 2.0 + 1e-12) wanted.emplace_back(node, ts);
  }

  Trace trace;
  State state = std::move(initial);
  NoiseStream stream(derive_stream(cfg.seed, kNoiseStreamTag));
  const auto record = [&](std::int64_t node) {
    const Observables obs = observables(state.phi);
    trace.times.push_back(grid.time_at(node));
    trace.order_param.push_back(obs.order_param);
    trace.variance.push_back(obs.variance);
  };
  // Snapshots are captured at their nodes regardless of the recording stride.
  const auto snap = [&](std::int64_t node) {
    for (const auto& [want_node, want_time] : wanted)
      if (want_node == node) trace.snapshots.push_back(Snapshot{want_time, state.phi});
  };

  record(0);
  snap(0);
  for (std::int64_t n = 0; n < steps; ++n) {
    state = step_once(state, cfg, stream, n);
    const std::int64_t node = n + 1;
    if (node % cfg.record_every == 0 || node == steps) record(node);
    snap(node);
  }
  return trace;
}

State evolve(const SimConfig& cfg, State state, std::int64_t first_step, std::int64_t steps) {
  NoiseStream stream(derive_stream(cfg.seed, kNoiseStreamTag));
  for (std::int64_t n = 0; n < steps; ++n)
    state = step_once(state, cfg, stream, first_step + n);
  return state;
}

std::vector<Trace> ensemble_run(const SimConfig& cfg) {
  cfg.validate();
  std::vector<Trace> traces(static_cast<std::size_t>(cfg.ensemble));
  parallel_for_chunks(traces.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      SimConfig member = cfg;
      member.seed = member_seed(cfg.seed, static_cast<std::uint64_t>(i));
      member.ensemble = 1;
      traces[i] = run(member);
    }
  });
  return traces;
}

double discrete_energy(const State& state, const ModelParams& params) {
  const LatticeSpec& spec = state.phi.spec;
  const double delta = spec.spacing;
  const std::size_t n = state.phi.values.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double phi = state.phi.values[i];
    const double vel = state.vel.values[i];
    double grad2 = 0.0;
    std::uint64_t s = 1;
    for (int axis = spec.dim - 1; axis >= 0; --axis) {
      const std::uint64_t len = static_cast<std::uint64_t>(spec.sites_per_axis);
      const std::uint64_t c = (i / s) % len;
      const std::size_t up = (c + 1 < len) ? i + s : i - s * (len - 1);
      const double d = (state.phi.values[up] - phi) / delta;
      grad2 += d * d;
      s *= len;
    }
    total += 0.5 * vel * vel + 0.5 * grad2 + 0.5 * params.mu2 * phi * phi +
             params.lambda * pow_int(phi, params.power + 1) / static_cast<double>(params.power + 1);
  }
  double cell = 1.0;
  for (int a = 0; a < spec.dim; ++a) cell *= delta;
  return total * cell;
}

NoiseRealization NoiseRealization::sample(const LatticeSpec& spec, const TimeGrid& grid,
                                          double sigma, std::uint64_t seed) {
  NoiseRealization nr{spec, grid, sigma, {}};
  NoiseStream stream(derive_stream(seed, kNoiseStreamTag));
  const std::uint64_t sites = spec.site_count();
  nr.eta.resize(static_cast<std::size_t>(grid.steps));
  for (std::int64_t n = 0; n < grid.steps; ++n) {
    auto& slice = nr.eta[static_cast<std::size_t>(n)];
    slice.resize(static_cast<std::size_t>(sites));
    const std::uint64_t base = static_cast<std::uint64_t>(n) * sites;
    for (std::uint64_t i = 0; i < sites; ++i)
      slice[static_cast<std::size_t>(i)] = stream.normal(base + i);
  }
  return nr;
}

SpaceTimeField NoiseRealization::forcing() const {
  SpaceTimeField out = SpaceTimeField::zeros(spec, grid);
  const double scale = sigma / std::sqrt(grid.dt);
  for (std::int64_t n = 0; n < grid.steps; ++n) {
    const auto& slice = eta[static_cast<std::size_t>(n)];
    auto& values = out.slices[static_cast<std::size_t>(n)].values;
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = scale * slice[i];
  }
  out.slices[static_cast<std::size_t>(grid.steps)] = out.slices[static_cast<std::size_t>(grid.steps - 1)];
  return out;
}

}  // namespace skg
