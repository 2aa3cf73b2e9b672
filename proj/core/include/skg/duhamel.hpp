#pragma once

#include <cstdint>
#include <vector>

#include "skg/kernels.hpp"

namespace skg {

// Uniform time grid: nodes t_n = n*dt for n = 0..steps (steps intervals).
struct TimeGrid {
  double dt = 0.0;
  std::int64_t steps = 0;

  std::size_t node_count() const { return static_cast<std::size_t>(steps) + 1; }
  double time_at(std::int64_t n) const { return dt * static_cast<double>(n); }
  double horizon() const { return dt * static_cast<double>(steps); }
  void validate() const;  // dt > 0, steps >= 2

  // steps = round(horizon/dt); throws if horizon is not a node within 1e-9 rel.
  static TimeGrid from_horizon(double horizon, double dt);

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;
};

// Real field on grid nodes x time nodes; slices[n] is the field at t_n.
struct SpaceTimeField {
  TimeGrid grid;
  std::vector<Field> slices;

  const LatticeSpec& spec() const { return slices.front().spec; }
  static SpaceTimeField zeros(const LatticeSpec& spec, const TimeGrid& grid);
};

double sup_norm(const SpaceTimeField& a);
double sup_distance(const SpaceTimeField& a, const SpaceTimeField& b);
SpaceTimeField pointwise_power(const SpaceTimeField& a, int exponent);
SpaceTimeField pointwise_multiply(const SpaceTimeField& a, const SpaceTimeField& b);
void scale(SpaceTimeField& a, double factor);
void add_scaled(SpaceTimeField& accum, const SpaceTimeField& term, double factor);

// Kernel representation of the linear flow from initial data (f, g):
//   phihat(t_n, k) = C(t_n, k) fhat(k) + S(t_n, k) ghat(k).
// Exact in time (no stepping error); slice 0 reproduces f.
SpaceTimeField homogeneous_solution(const Field& f, const Field& g, const DispersionTable& table,
                                    const TimeGrid& grid);

// Retarded source term psi(t) = int_0^t S(t-s) * h(s) ds, trapezoid rule on the
// grid nodes, evaluated modewise on the transform side. psi(0) = 0.
SpaceTimeField source_convolve(const SpaceTimeField& h, const DispersionTable& table);

struct PicardResult {
  SpaceTimeField phi;
  int iterations = 0;   // number of right-hand-side evaluations
  double residual = 0;  // certified |phi - RHS(phi)|_inf of the returned phi
};

// Fixed-point iteration for the integral form
//   phi = homogeneous(f, g) + S * xi - lambda S * phi^power,
// started from the linear solution. Throws NonConvergenceError when the
// residual stalls for 3 sweeps or max_iter is exhausted; lambda = 0 returns
// the linear solution exactly after a single evaluation.
PicardResult picard_solve(const Field& f, const Field& g, const SpaceTimeField& xi,
                          const ModelParams& params, const DispersionTable& table,
                          const TimeGrid& grid, int max_iter = 50, double tol = 1e-8);

}  // namespace skg
