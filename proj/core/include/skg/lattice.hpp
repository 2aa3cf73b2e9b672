#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace skg {

// Periodic cubic lattice: `dim` axes, `sites_per_axis` sites each, spacing
// `spacing`. Site coordinates are integer vectors z with 0 <= z_j < N; the
// physical point is x = spacing * z. Flat indices are row-major with axis 0
// slowest:
//
//   flat(z) = ((z_0 * N + z_1) * N + ...) * N + z_{dim-1}
//
// Momentum modes share the same layout; mode k carries p_j = 2*pi*k_j/(N*delta),
// and -k is (N - k_j) mod N per axis.
struct LatticeSpec {
  int dim = 1;
  std::int64_t sites_per_axis = 2;
  double spacing = 1.0;

  std::size_t site_count() const;  // N^dim, overflow-checked
  void validate() const;           // throws std::invalid_argument
  std::size_t flat_index(std::span<const std::int64_t> coords) const;
  void coords_of(std::size_t flat, std::span<std::int64_t> out) const;
  // Stride of `axis` in the flat layout: N^(dim-1-axis).
  std::size_t stride(int axis) const;

  friend bool operator==(const LatticeSpec&, const LatticeSpec&) = default;
};

// Real scalar field, one value per site in flat order.
struct Field {
  LatticeSpec spec;
  std::vector<double> values;

  static Field zeros(const LatticeSpec& spec);
  static Field constant(const LatticeSpec& spec, double value);
  static Field spike(const LatticeSpec& spec, double height = 1.0);  // at the origin
};

// Complex mode amplitudes in the same flat layout as Field.
struct SpectralField {
  LatticeSpec spec;
  std::vector<std::complex<double>> modes;
};

// Nearest-neighbour Laplacian, (1/delta^2) sum_j (f(i+e_j) + f(i-e_j) - 2 f(i)),
// periodic across the edges.
Field laplacian_apply(const Field& field);

// Fourier symbol of -laplacian at integer momentum k:
//   Omega(p) = (2/delta^2) sum_j (1 - cos(delta p_j)),  p_j = 2 pi k_j/(N delta),
// evaluated as (4/delta^2) sum_j sin^2(pi k_j / N). Range [0, 4 dim/delta^2].
double symbol_omega(const LatticeSpec& spec, std::span<const std::int64_t> k);

// Forward transform carries delta^dim: fhat(k) = delta^dim sum_z e^{-i p.x} f(z).
SpectralField dft_forward(const Field& field);

// Inverse carries 1/(N delta)^dim. Rejects input whose Hermitian symmetry
// violation exceeds 1e-6 (relative): a real field cannot have produced it.
Field dft_inverse(const SpectralField& spectral);

// Largest |modes(-k) - conj(modes(k))| over modes, relative to max |modes|.
double hermitian_violation(const SpectralField& spectral);

// Periodic convolution (a * b)(x) = sum_y a(x - y) b(y) delta^dim, computed on
// the transform side where it is diagonal: DFT(a * b) = DFT(a) . DFT(b).
Field spatial_convolve(const Field& a, const Field& b);

}  // namespace skg
