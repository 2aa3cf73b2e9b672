#include "skg/duhamel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "skg/errors.hpp"

namespace skg {

namespace {

void require_matching(const SpaceTimeField& a, const char* what) {
  if (a.slices.empty()) throw std::invalid_argument(std::string(what) + ": field has no slices");
  if (a.slices.size() != a.grid.node_count())
    throw std::invalid_argument(std::string(what) + ": slice count does not match the grid");
}

void require_spec(const LatticeSpec& a, const LatticeSpec& b, const char* what) {
  if (!(a == b)) throw std::invalid_argument(std::string(what) + ": lattice specs differ");
}

// params used for stepping must agree with the table the kernels came from.
void require_consistent(const ModelParams& p, const DispersionTable& table, const char* what) {
  if (p.gamma != table.params.gamma || p.mu2 != table.params.mu2)
    throw std::invalid_argument(std::string(what) +
                                ": params disagree with the dispersion table (gamma/mu2)");
}

double pow_int(double x, int p) {
  double r = 1.0;
  for (int i = 0; i < p; ++i) r *= x;
  return r;
}

}  // namespace

void TimeGrid::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("time grid dt must be positive");
  if (steps < 2) throw std::invalid_argument("time grid needs at least 2 steps");
}

TimeGrid TimeGrid::from_horizon(double horizon, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("time grid dt must be positive");
  const double raw = horizon / dt;
  const auto steps = static_cast<std::int64_t>(std::llround(raw));
  if (std::abs(static_cast<double>(steps) * dt - horizon) >
      1e-9 * std::max(1.0, std::abs(horizon)))
    throw std::invalid_argument("horizon is not an integer number of dt steps");
  TimeGrid grid{dt, steps};
  grid.validate();
  return grid;
}

SpaceTimeField SpaceTimeField::zeros(const LatticeSpec& spec, const TimeGrid& grid) {
  grid.validate();
  return {grid, std::vector<Field>(grid.node_count(), Field::zeros(spec))};
}

double sup_norm(const SpaceTimeField& a) {
  double m = 0.0;
  for (const auto& slice : a.slices)
    for (double v : slice.values) m = std::max(m, std::abs(v));
  return m;
}

double sup_distance(const SpaceTimeField& a, const SpaceTimeField& b) {
  if (a.slices.size() != b.slices.size())
    throw std::invalid_argument("sup_distance: slice counts differ");
  double m = 0.0;
  for (std::size_t n = 0; n < a.slices.size(); ++n) {
    const auto& x = a.slices[n].values;
    const auto& y = b.slices[n].values;
    if (x.size() != y.size()) throw std::invalid_argument("sup_distance: site counts differ");
    for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
  }
  return m;
}

SpaceTimeField pointwise_power(const SpaceTimeField& a, int exponent) {
  if (exponent < 1) throw std::invalid_argument("pointwise_power: exponent must be >= 1");
  SpaceTimeField out = a;
  for (auto& slice : out.slices)
    for (double& v : slice.values) v = pow_int(v, exponent);
  return out;
}

SpaceTimeField pointwise_multiply(const SpaceTimeField& a, const SpaceTimeField& b) {
  if (a.slices.size() != b.slices.size())
    throw std::invalid_argument("pointwise_multiply: slice counts differ");
  SpaceTimeField out = a;
  for (std::size_t n = 0; n < out.slices.size(); ++n) {
    const auto& y = b.slices[n].values;
    auto& x = out.slices[n].values;
    if (x.size() != y.size()) throw std::invalid_argument("pointwise_multiply: site counts differ");
    for (std::size_t i = 0; i < x.size(); ++i) x[i] *= y[i];
  }
  return out;
}

void scale(SpaceTimeField& a, double factor) {
  for (auto& slice : a.slices)
    for (double& v : slice.values) v *= factor;
}

void add_scaled(SpaceTimeField& accum, const SpaceTimeField& term, double factor) {
  if (accum.slices.size() != term.slices.size())
    throw std::invalid_argument("add_scaled: slice counts differ");
  for (std::size_t n = 0; n < accum.slices.size(); ++n) {
    const auto& y = term.slices[n].values;
    auto& x = accum.slices[n].values;
    if (x.size() != y.size()) throw std::invalid_argument("add_scaled: site counts differ");
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += factor * y[i];
  }
}

SpaceTimeField homogeneous_solution(const Field& f, const Field& g, const DispersionTable& table,
                                    const TimeGrid& grid) {
  grid.validate();
  require_spec(f.spec, table.spec, "homogeneous_solution");
  require_spec(g.spec, table.spec, "homogeneous_solution");
  const SpectralField fhat = dft_forward(f);
  const SpectralField ghat = dft_forward(g);
  const std::size_t modes = fhat.modes.size();
  SpaceTimeField out{grid, {}};
  out.slices.reserve(grid.node_count());
  SpectralField work{table.spec, std::vector<std::complex<double>>(modes)};
  for (std::size_t n = 0; n < grid.node_count(); ++n) {
    const KernelSlice ks = kernel_slice(table, grid.time_at(static_cast<std::int64_t>(n)));
    for (std::size_t m = 0; m < modes; ++m)
      work.modes[m] = ks.c_modes[m] * fhat.modes[m] + ks.s_modes[m] * ghat.modes[m];
    out.slices.push_back(dft_inverse(work));
  }
  return out;
}

SpaceTimeField source_convolve(const SpaceTimeField& h, const DispersionTable& table) {
  require_matching(h, "source_convolve");
  require_spec(h.spec(), table.spec, "source_convolve");
  const TimeGrid& grid = h.grid;
  const std::size_t nodes = grid.node_count();
  const std::size_t modes = table.mode_count();

  // S at every grid offset; S(0) = 0 makes the trapezoid endpoint at s = t drop.
  std::vector<std::vector<double>> skern(nodes);
  for (std::size_t j = 0; j < nodes; ++j)
    skern[j] = kernel_S(table, grid.time_at(static_cast<std::int64_t>(j)));

  std::vector<std::vector<std::complex<double>>> hhat(nodes);
  for (std::size_t n = 0; n < nodes; ++n) hhat[n] = dft_forward(h.slices[n]).modes;

  SpaceTimeField out{grid, {}};
  out.slices.reserve(nodes);
  out.slices.push_back(Field::zeros(table.spec));
  SpectralField work{table.spec, std::vector<std::complex<double>>(modes)};
  for (std::size_t n = 1; n < nodes; ++n) {
    for (std::size_t m = 0; m < modes; ++m) work.modes[m] = 0.5 * skern[n][m] * hhat[0][m];
    for (std::size_t j = 1; j < n; ++j) {
      const auto& sk = skern[n - j];
      const auto& hm = hhat[j];
      for (std::size_t m = 0; m < modes; ++m) work.modes[m] += sk[m] * hm[m];
    }
    for (std::size_t m = 0; m < modes; ++m) work.modes[m] *= grid.dt;
    out.slices.push_back(dft_inverse(work));
  }
  return out;
}

PicardResult picard_solve(const Field& f, const Field& g, const SpaceTimeField& xi,
                          const ModelParams& params, const DispersionTable& table,
                          const TimeGrid& grid, int max_iter, double tol) {
  params.validate();
  require_consistent(params, table, "picard_solve");
  if (max_iter < 1) throw std::invalid_argument("picard_solve: max_iter must be >= 1");
  if (!(tol > 0.0)) throw std::invalid_argument("picard_solve: tol must be positive");
  if (!(xi.grid == grid)) throw std::invalid_argument("picard_solve: xi grid differs");

  SpaceTimeField phi_lin = homogeneous_solution(f, g, table, grid);
  add_scaled(phi_lin, source_convolve(xi, table), 1.0);

  const auto rhs_of = [&](const SpaceTimeField& phi) {
    if (params.lambda == 0.0) return phi_lin;
    SpaceTimeField r = phi_lin;
    add_scaled(r, source_convolve(pointwise_power(phi, params.power), table), -params.lambda);
    return r;
  };

  SpaceTimeField phi = phi_lin;
  SpaceTimeField rhs = rhs_of(phi);
  int evals = 1;
  double prev = std::numeric_limits<double>::infinity();
  int stalls = 0;
  for (;;) {
    const double residual = sup_distance(phi, rhs);
    if (!std::isfinite(residual))
      throw NonConvergenceError(evals, residual, "iterate left the finite range");
    if (residual < tol) return {std::move(phi), evals, residual};
    if (residual >= prev) {
      if (++stalls >= 3)
        throw NonConvergenceError(evals, residual,
                                  "sup-distance stopped decreasing (outside the contractive regime?)");
    } else {
      stalls = 0;
    }
    prev = residual;
    if (evals >= max_iter)
      throw NonConvergenceError(evals, residual, "max_iter exhausted before reaching tol");
    phi = std::move(rhs);
    rhs = rhs_of(phi);
    ++evals;
  }
}

}  // namespace skg
