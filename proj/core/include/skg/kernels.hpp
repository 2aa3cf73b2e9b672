#pragma once

#include <complex>
#include <vector>

#include "skg/lattice.hpp"

namespace skg {

// Parameters of the damped field equation
//   phi_tt + gamma phi_t - lap(phi) + mu2 phi + lambda phi^power = forcing.
// mu2 < 0 with lambda > 0 gives the symmetry-breaking double well.
struct ModelParams {
  double gamma = 1.0;
  double mu2 = 1.0;
  double lambda = 0.0;
  int power = 3;
  double sigma = 0.0;

  void validate() const;  // throws std::invalid_argument
  double vacuum() const;  // sqrt(-mu2/lambda); requires mu2 < 0 < lambda
  // Slowest mode still decays like e^{-gamma t/2} iff mu2 > gamma^2/4.
  bool has_mass_gap() const { return mu2 > 0.25 * gamma * gamma; }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

// Roots of r^2 + gamma r + omega2 = 0, ordered so that Im r_plus > 0 in the
// underdamped regime (principal square root of the discriminant).
struct CharacteristicRoots {
  std::complex<double> plus;
  std::complex<double> minus;
};
CharacteristicRoots characteristic_roots(double gamma, double omega2);

// Mode kernels of the damped oscillator at a single frequency:
//   C(0) = 1, C'(0) = 0;  S(0) = 0, S'(0+) = 1;  both zero for t < 0.
// Closed-form derivatives: C' = -omega2 S, S' = C - gamma S.
struct KernelPoint {
  double c;
  double s;
};
KernelPoint eval_kernels(double gamma, double omega2, double t);

// Per-mode dispersion data over a lattice: omega2(k) = Omega(k) + mu2 and the
// characteristic roots, in the flat mode layout of LatticeSpec.
struct DispersionTable {
  LatticeSpec spec;
  ModelParams params;
  std::vector<double> omega2;
  std::vector<std::complex<double>> root_plus;
  std::vector<std::complex<double>> root_minus;

  std::size_t mode_count() const { return omega2.size(); }
};

DispersionTable build_dispersion(const LatticeSpec& spec, const ModelParams& params);

std::vector<double> kernel_C(const DispersionTable& table, double t);
std::vector<double> kernel_S(const DispersionTable& table, double t);
std::vector<double> kernel_C_deriv(const DispersionTable& table, double t);
std::vector<double> kernel_S_deriv(const DispersionTable& table, double t);

// Both kernels at once (shares the exponentials).
struct KernelSlice {
  double time;
  std::vector<double> c_modes;
  std::vector<double> s_modes;
};
KernelSlice kernel_slice(const DispersionTable& table, double t);

enum class KernelKind { C, S };

// Position-space kernel at time t: inverse transform of the mode values, so
// convolving it against initial data reproduces the homogeneous evolution.
Field kernel_position(const DispersionTable& table, double t, KernelKind kind);

}  // namespace skg
