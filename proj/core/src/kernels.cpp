#include "skg/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace skg {

namespace {

// Near-critical window: below this root separation the explicit formulas
// divide by a vanishing difference, so we switch to the double-root limit.
double critical_window(double gamma) { return 1e-8 * std::max(1.0, gamma); }

// exp(z) - 1 without cancellation for small |z|:
//   Re = expm1(a) cos b - 2 sin^2(b/2),  Im = (expm1(a)+1) sin b.
std::complex<double> cexpm1(std::complex<double> z) {
  const double em = std::expm1(z.real());
  const double sb = std::sin(z.imag());
  const double cb = std::cos(z.imag());
  const double half = std::sin(0.5 * z.imag());
  return {em * cb - 2.0 * half * half, (em + 1.0) * sb};
}

// C and S at one mode from its characteristic roots. Evaluated as
//   S = e^{r- t} expm1((r+ - r-) t) / (r+ - r-)
//   C = e^{r- t} (1 - r- expm1((r+ - r-) t) / (r+ - r-))
// which is exact at t = 0 (C = 1, S = 0 with no rounding) and free of the
// subtractive cancellation of e^{r+ t} - e^{r- t} at small t. When the root
// separation is huge the two exponentials are split instead, so an underflowing
// e^{r- t} can never meet an overflowing expm1 as 0 * inf.
KernelPoint eval_from_roots(const std::complex<double>& rp, const std::complex<double>& rm,
                            double gamma, double t) {
  if (t < 0.0) return {0.0, 0.0};
  const std::complex<double> dr = rp - rm;
  if (std::abs(dr) < critical_window(gamma)) {
    const double e = std::exp(-0.5 * gamma * t);
    return {e * (1.0 + 0.5 * gamma * t), t * e};
  }
  if (dr.real() * t > 650.0) {
    const std::complex<double> ep = std::exp(rp * t);
    const std::complex<double> em = std::exp(rm * t);
    const std::complex<double> s = (ep - em) / dr;
    const std::complex<double> c = (rp * em - rm * ep) / dr;
    return {c.real(), s.real()};
  }
  const std::complex<double> base = std::exp(rm * t);
  const std::complex<double> grow = cexpm1(dr * t) / dr;
  const std::complex<double> s = base * grow;
  const std::complex<double> c = base * (1.0 - rm * grow);
  return {c.real(), s.real()};
}

}  // namespace

void ModelParams::validate() const {
  if (power < 1) throw std::invalid_argument("interaction power must be >= 1");
  if (gamma < 0.0) throw std::invalid_argument("damping gamma must be >= 0");
  if (sigma < 0.0) throw std::invalid_argument("noise amplitude sigma must be >= 0");
  if (!std::isfinite(mu2) || !std::isfinite(lambda))
    throw std::invalid_argument("model parameters must be finite");
}

double ModelParams::vacuum() const {
  if (!(mu2 < 0.0) || !(lambda > 0.0))
    throw std::logic_error("vacuum() needs the double-well regime mu2 < 0 < lambda");
  return std::sqrt(-mu2 / lambda);
}

CharacteristicRoots characteristic_roots(double gamma, double omega2) {
  const std::complex<double> disc(gamma * gamma - 4.0 * omega2, 0.0);
  const std::complex<double> sq = std::sqrt(disc);  // principal branch: Im >= 0
  return {0.5 * (-gamma + sq), 0.5 * (-gamma - sq)};
}

KernelPoint eval_kernels(double gamma, double omega2, double t) {
  const auto roots = characteristic_roots(gamma, omega2);
  return eval_from_roots(roots.plus, roots.minus, gamma, t);
}

DispersionTable build_dispersion(const LatticeSpec& spec, const ModelParams& params) {
  spec.validate();
  params.validate();
  const std::size_t modes = spec.site_count();
  DispersionTable table{spec, params, {}, {}, {}};
  table.omega2.resize(modes);
  table.root_plus.resize(modes);
  table.root_minus.resize(modes);
  std::vector<std::int64_t> k(spec.dim, 0);
  for (std::size_t flat = 0; flat < modes; ++flat) {
    const double w2 = symbol_omega(spec, k) + params.mu2;
    const auto roots = characteristic_roots(params.gamma, w2);
    table.omega2[flat] = w2;
    table.root_plus[flat] = roots.plus;
    table.root_minus[flat] = roots.minus;
    // odometer over the momentum indices, last axis fastest
    for (int j = spec.dim - 1; j >= 0; --j) {
      if (++k[j] < spec.sites_per_axis) break;
      k[j] = 0;
    }
  }
  return table;
}

KernelSlice kernel_slice(const DispersionTable& table, double t) {
  KernelSlice slice{t, std::vector<double>(table.mode_count()), std::vector<double>(table.mode_count())};
  for (std::size_t m = 0; m < table.mode_count(); ++m) {
    const KernelPoint kp =
        eval_from_roots(table.root_plus[m], table.root_minus[m], table.params.gamma, t);
    slice.c_modes[m] = kp.c;
    slice.s_modes[m] = kp.s;
  }
  return slice;
}

std::vector<double> kernel_C(const DispersionTable& table, double t) {
  return kernel_slice(table, t).c_modes;
}

std::vector<double> kernel_S(const DispersionTable& table, double t) {
  return kernel_slice(table, t).s_modes;
}

std::vector<double> kernel_C_deriv(const DispersionTable& table, double t) {
  // C' = -omega2 S
  std::vector<double> out = kernel_S(table, t);
  for (std::size_t m = 0; m < out.size(); ++m) out[m] *= -table.omega2[m];
  return out;
}

std::vector<double> kernel_S_deriv(const DispersionTable& table, double t) {
  // S' = C - gamma S
  KernelSlice slice = kernel_slice(table, t);
  std::vector<double> out(slice.c_modes.size());
  for (std::size_t m = 0; m < out.size(); ++m)
    out[m] = slice.c_modes[m] - table.params.gamma * slice.s_modes[m];
  return out;
}

Field kernel_position(const DispersionTable& table, double t, KernelKind kind) {
  const std::vector<double> modes = (kind == KernelKind::C) ? kernel_C(table, t) : kernel_S(table, t);
  SpectralField spectral{table.spec, std::vector<std::complex<double>>(modes.begin(), modes.end())};
  return dft_inverse(spectral);
}

}  // namespace skg
