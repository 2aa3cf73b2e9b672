#include "skg/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "skg/errors.hpp"

namespace skg {

namespace {

constexpr double kHermitianRejectTol = 1e-6;

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Roots of unity e^{sign * 2 pi i m / n}, m = 0..n-1.
std::vector<std::complex<double>> twiddle_table(std::size_t n, int sign) {
  std::vector<std::complex<double>> w(n);
  for (std::size_t m = 0; m < n; ++m) {
    const double ang = sign * 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(n);
    w[m] = {std::cos(ang), std::sin(ang)};
  }
  return w;
}

// One unnormalized length-n transform in place: out_k = sum_z in_z e^{sign 2pi i k z / n}.
// Radix-2 when n is a power of two, otherwise the direct sum (fine at desk scale).
void transform_line(std::complex<double>* data, std::size_t n,
                    const std::vector<std::complex<double>>& twiddle,
                    std::vector<std::complex<double>>& scratch) {
  if (n <= 1) return;
  if (is_power_of_two(n)) {
    for (std::size_t i = 1, j = 0; i < n; ++i) {
      std::size_t bit = n >> 1;
      for (; j & bit; bit >>= 1) j ^= bit;
      j ^= bit;
      if (i < j) std::swap(data[i], data[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
      const std::size_t stride = n / len;
      for (std::size_t start = 0; start < n; start += len) {
        for (std::size_t k = 0; k < len / 2; ++k) {
          const auto w = twiddle[k * stride];
          const auto u = data[start + k];
          const auto v = data[start + k + len / 2] * w;
          data[start + k] = u + v;
          data[start + k + len / 2] = u - v;
        }
      }
    }
    return;
  }
  scratch.assign(n, {});
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc{};
    for (std::size_t z = 0; z < n; ++z) acc += data[z] * twiddle[(k * z) % n];
    scratch[k] = acc;
  }
  std::copy(scratch.begin(), scratch.end(), data);
}

// Apply the 1-d transform along every axis (separable d-dim transform).
void transform_all_axes(const LatticeSpec& spec, std::vector<std::complex<double>>& a, int sign) {
  const std::size_t n = static_cast<std::size_t>(spec.sites_per_axis);
  const auto twiddle = twiddle_table(n, sign);
  std::vector<std::complex<double>> line(n), scratch;
  const std::size_t total = a.size();
  for (int axis = 0; axis < spec.dim; ++axis) {
    const std::size_t s = spec.stride(axis);
    const std::size_t block = s * n;
    for (std::size_t hi = 0; hi < total; hi += block) {
      for (std::size_t lo = 0; lo < s; ++lo) {
        const std::size_t base = hi + lo;
        for (std::size_t z = 0; z < n; ++z) line[z] = a[base + z * s];
        transform_line(line.data(), n, twiddle, scratch);
        for (std::size_t z = 0; z < n; ++z) a[base + z * s] = line[z];
      }
    }
  }
}

void require_same_spec(const LatticeSpec& a, const LatticeSpec& b, const char* what) {
  if (!(a == b)) throw std::invalid_argument(std::string(what) + ": lattice specs differ");
}

void require_sized(const LatticeSpec& spec, std::size_t n, const char* what) {
  if (spec.site_count() != n)
    throw std::invalid_argument(std::string(what) + ": value count does not match the lattice");
}

}  // namespace

std::size_t LatticeSpec::site_count() const {
  validate();
  std::size_t total = 1;
  const auto n = static_cast<std::size_t>(sites_per_axis);
  for (int j = 0; j < dim; ++j) {
    if (total > std::numeric_limits<std::size_t>::max() / n)
      throw std::overflow_error("lattice site count overflows the index type");
    total *= n;
  }
  return total;
}

void LatticeSpec::validate() const {
  if (dim < 1) throw std::invalid_argument("lattice dim must be >= 1");
  if (sites_per_axis < 2) throw std::invalid_argument("lattice needs at least 2 sites per axis");
  if (!(spacing > 0.0)) throw std::invalid_argument("lattice spacing must be positive");
}

std::size_t LatticeSpec::stride(int axis) const {
  std::size_t s = 1;
  for (int j = axis + 1; j < dim; ++j) s *= static_cast<std::size_t>(sites_per_axis);
  return s;
}

std::size_t LatticeSpec::flat_index(std::span<const std::int64_t> coords) const {
  if (static_cast<int>(coords.size()) != dim)
    throw std::invalid_argument("coordinate vector has wrong length");
  std::size_t flat = 0;
  for (int j = 0; j < dim; ++j) {
    const std::int64_t z = coords[j];
    if (z < 0 || z >= sites_per_axis) throw std::out_of_range("lattice coordinate out of range");
    flat = flat * static_cast<std::size_t>(sites_per_axis) + static_cast<std::size_t>(z);
  }
  return flat;
}

void LatticeSpec::coords_of(std::size_t flat, std::span<std::int64_t> out) const {
  if (static_cast<int>(out.size()) != dim)
    throw std::invalid_argument("coordinate buffer has wrong length");
  const auto n = static_cast<std::size_t>(sites_per_axis);
  for (int j = dim - 1; j >= 0; --j) {
    out[j] = static_cast<std::int64_t>(flat % n);
    flat /= n;
  }
}

Field Field::zeros(const LatticeSpec& spec) { return {spec, std::vector<double>(spec.site_count(), 0.0)}; }

Field Field::constant(const LatticeSpec& spec, double value) {
  return {spec, std::vector<double>(spec.site_count(), value)};
}

Field Field::spike(const LatticeSpec& spec, double height) {
  Field f = zeros(spec);
  f.values[0] = height;
  return f;
}

Field laplacian_apply(const Field& field) {
  const LatticeSpec& spec = field.spec;
  require_sized(spec, field.values.size(), "laplacian_apply");
  const std::size_t total = field.values.size();
  const auto n = static_cast<std::size_t>(spec.sites_per_axis);
  const double inv_d2 = 1.0 / (spec.spacing * spec.spacing);
  Field out = Field::zeros(spec);
  for (int axis = 0; axis < spec.dim; ++axis) {
    const std::size_t s = spec.stride(axis);
    const std::size_t wrap = s * (n - 1);
    for (std::size_t i = 0; i < total; ++i) {
      const std::size_t c = (i / s) % n;
      const std::size_t up = (c + 1 < n) ? i + s : i - wrap;
      const std::size_t dn = (c > 0) ? i - s : i + wrap;
      out.values[i] += (field.values[up] + field.values[dn] - 2.0 * field.values[i]) * inv_d2;
    }
  }
  return out;
}

double symbol_omega(const LatticeSpec& spec, std::span<const std::int64_t> k) {
  if (static_cast<int>(k.size()) != spec.dim)
    throw std::invalid_argument("momentum index vector has wrong length");
  double acc = 0.0;
  for (int j = 0; j < spec.dim; ++j) {
    if (k[j] < 0 || k[j] >= spec.sites_per_axis)
      throw std::out_of_range("momentum index out of range");
    const double s = std::sin(std::numbers::pi * static_cast<double>(k[j]) /
                              static_cast<double>(spec.sites_per_axis));
    acc += s * s;
  }
  return 4.0 / (spec.spacing * spec.spacing) * acc;
}

SpectralField dft_forward(const Field& field) {
  const LatticeSpec& spec = field.spec;
  require_sized(spec, field.values.size(), "dft_forward");
  std::vector<std::complex<double>> a(field.values.begin(), field.values.end());
  transform_all_axes(spec, a, -1);
  const double scale = std::pow(spec.spacing, spec.dim);
  for (auto& m : a) m *= scale;
  return {spec, std::move(a)};
}

double hermitian_violation(const SpectralField& spectral) {
  const LatticeSpec& spec = spectral.spec;
  require_sized(spec, spectral.modes.size(), "hermitian_violation");
  double max_mag = 0.0;
  for (const auto& m : spectral.modes) max_mag = std::max(max_mag, std::abs(m));
  if (max_mag == 0.0) return 0.0;
  const auto n = static_cast<std::size_t>(spec.sites_per_axis);
  double worst = 0.0;
  std::vector<std::int64_t> k(spec.dim);
  for (std::size_t flat = 0; flat < spectral.modes.size(); ++flat) {
    spec.coords_of(flat, k);
    std::size_t conj_flat = 0;
    for (int j = 0; j < spec.dim; ++j) {
      const std::size_t neg = (k[j] == 0) ? 0 : n - static_cast<std::size_t>(k[j]);
      conj_flat = conj_flat * n + neg;
    }
    worst = std::max(worst, std::abs(spectral.modes[conj_flat] - std::conj(spectral.modes[flat])));
  }
  return worst / max_mag;
}

Field dft_inverse(const SpectralField& spectral) {
  const LatticeSpec& spec = spectral.spec;
  require_sized(spec, spectral.modes.size(), "dft_inverse");
  const double violation = hermitian_violation(spectral);
  if (violation > kHermitianRejectTol) throw SpectralSymmetryError(violation);
  std::vector<std::complex<double>> a = spectral.modes;
  transform_all_axes(spec, a, +1);
  const double scale =
      1.0 / std::pow(static_cast<double>(spec.sites_per_axis) * spec.spacing, spec.dim);
  Field out = Field::zeros(spec);
  for (std::size_t i = 0; i < a.size(); ++i) out.values[i] = a[i].real() * scale;
  return out;
}

Field spatial_convolve(const Field& a, const Field& b) {
  require_same_spec(a.spec, b.spec, "spatial_convolve");
  SpectralField fa = dft_forward(a);
  const SpectralField fb = dft_forward(b);
  for (std::size_t i = 0; i < fa.modes.size(); ++i) fa.modes[i] *= fb.modes[i];
  return dft_inverse(fa);
}

}  // namespace skg
