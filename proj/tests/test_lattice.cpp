#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "oracles.hpp"
#include "skg/errors.hpp"
#include "skg/lattice.hpp"

using namespace skg;

TEST_SUITE("lattice") {
  TEST_CASE("flat index round trips through coordinates") {
    LatticeSpec spec{3, 5, 1.0};
    std::vector<std::int64_t> c(3);
    for (std::size_t i = 0; i < spec.site_count(); ++i) {
      spec.coords_of(i, c);
      CHECK(spec.flat_index(c) == i);
    }
    // coordinates outside [0, N) are rejected, not wrapped
    std::vector<std::int64_t> neg{-1, 2, 0};
    std::vector<std::int64_t> over{0, 5, 0};
    std::vector<std::int64_t> short_vec{1, 2};
    CHECK_THROWS_AS(spec.flat_index(neg), std::out_of_range);
    CHECK_THROWS_AS(spec.flat_index(over), std::out_of_range);
    CHECK_THROWS_AS(spec.flat_index(short_vec), std::invalid_argument);
  }

  TEST_CASE("site count and validation") {
    CHECK((LatticeSpec{1, 16, 1.0}.site_count()) == 16);
    CHECK((LatticeSpec{3, 4, 0.5}.site_count()) == 64);
    CHECK_THROWS_AS((LatticeSpec{0, 4, 1.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((LatticeSpec{1, 1, 1.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((LatticeSpec{1, 4, 0.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((LatticeSpec{1, 4, -1.0}.validate()), std::invalid_argument);
  }

  TEST_CASE("laplacian of a spike reproduces the nearest-neighbour stencil") {
    const double delta = 0.5;
    LatticeSpec spec{2, 8, delta};
    Field spike = Field::spike(spec);
    Field lap = laplacian_apply(spike);
    std::vector<std::int64_t> c(2);
    const double inv2 = 1.0 / (delta * delta);
    for (std::size_t i = 0; i < spec.site_count(); ++i) {
      spec.coords_of(i, c);
      double expect = 0.0;
      if (c[0] == 0 && c[1] == 0) expect = -4.0 * inv2;
      if ((std::abs(c[0]) == 1 || c[0] == 7) && c[1] == 0) expect = inv2;
      if (c[0] == 0 && (std::abs(c[1]) == 1 || c[1] == 7)) expect = inv2;
      CHECK(lap.values[i] == doctest::Approx(expect).epsilon(1e-14));
    }
  }

  TEST_CASE("laplacian annihilates constants") {
    Field c = Field::constant(LatticeSpec{2, 6, 0.7}, 3.25);
    Field lap = laplacian_apply(c);
    for (double v : lap.values) CHECK(v == 0.0);
  }

  TEST_CASE("laplacian of a plane wave is -Omega times the wave") {
    LatticeSpec spec{1, 16, 0.5};
    const std::int64_t k = 3;
    Field wave = Field::zeros(spec);
    for (std::size_t z = 0; z < 16; ++z)
      wave.values[z] = std::cos(2.0 * M_PI * static_cast<double>(k) * static_cast<double>(z) / 16.0);
    Field lap = laplacian_apply(wave);
    std::vector<std::int64_t> kv{k};
    const double omega = symbol_omega(spec, kv);
    for (std::size_t z = 0; z < 16; ++z)
      CHECK(lap.values[z] == doctest::Approx(-omega * wave.values[z]).epsilon(1e-12));
  }

  TEST_CASE("symbol matches the cosine form and its endpoints") {
    LatticeSpec spec{2, 12, 0.25};
    std::vector<std::int64_t> k(2);
    for (k[0] = 0; k[0] < 12; ++k[0]) {
      for (k[1] = 0; k[1] < 12; ++k[1]) {
        double direct = 0.0;
        for (int a = 0; a < 2; ++a) {
          const double angle = 2.0 * M_PI * static_cast<double>(k[static_cast<std::size_t>(a)]) / 12.0;
          direct += (2.0 / (0.25 * 0.25)) * (1.0 - std::cos(angle));
        }
        CHECK(symbol_omega(spec, k) == doctest::Approx(direct).epsilon(1e-12));
      }
    }
    std::vector<std::int64_t> zero{0, 0};
    CHECK(symbol_omega(spec, zero) == 0.0);
    std::vector<std::int64_t> nyquist{6, 6};
    CHECK(symbol_omega(spec, nyquist) ==
          doctest::Approx(4.0 * 2 / (0.25 * 0.25)).epsilon(1e-14));
  }

  TEST_CASE("forward transform of a spike is flat at the cell volume") {
    LatticeSpec spec{2, 4, 0.5};
    SpectralField hat = dft_forward(Field::spike(spec));
    for (const auto& m : hat.modes) {
      CHECK(m.real() == doctest::Approx(0.25).epsilon(1e-14));
      CHECK(std::abs(m.imag()) < 1e-14);
    }
  }

  TEST_CASE("inverse transform of flat modes is a spike of inverse box volume") {
    LatticeSpec spec{1, 8, 2.0};
    SpectralField hat{spec, std::vector<std::complex<double>>(8, 1.0)};
    Field f = dft_inverse(hat);
    CHECK(f.values[0] == doctest::Approx(8.0 / 16.0).epsilon(1e-13));
    for (std::size_t i = 1; i < 8; ++i) CHECK(std::abs(f.values[i]) < 1e-14);
  }

  TEST_CASE("transform agrees with the direct sum on power-of-two sizes") {
    LatticeSpec spec{1, 16, 0.5};
    Field f = oracles::seeded_field(spec, 11, 1.0);
    SpectralField fast = dft_forward(f);
    auto slow = oracles::direct_dft(f);
    for (std::size_t i = 0; i < slow.size(); ++i)
      CHECK(std::abs(fast.modes[i] - slow[i]) < 1e-11);
  }

  TEST_CASE("transform agrees with the direct sum on non-power-of-two sizes") {
    LatticeSpec spec{1, 12, 1.0};
    Field f = oracles::seeded_field(spec, 12, 1.0);
    SpectralField fast = dft_forward(f);
    auto slow = oracles::direct_dft(f);
    for (std::size_t i = 0; i < slow.size(); ++i)
      CHECK(std::abs(fast.modes[i] - slow[i]) < 1e-11);
  }

  TEST_CASE("transform agrees with the direct sum in two dimensions") {
    LatticeSpec spec{2, 6, 0.5};
    Field f = oracles::seeded_field(spec, 13, 1.0);
    SpectralField fast = dft_forward(f);
    auto slow = oracles::direct_dft(f);
    for (std::size_t i = 0; i < slow.size(); ++i)
      CHECK(std::abs(fast.modes[i] - slow[i]) < 1e-11);
  }

  TEST_CASE("round trip is the identity") {
    for (LatticeSpec spec : {LatticeSpec{1, 16, 0.5}, LatticeSpec{2, 8, 1.0}, LatticeSpec{1, 12, 1.0},
                             LatticeSpec{3, 4, 0.25}}) {
      Field f = oracles::seeded_field(spec, 21 + spec.site_count(), 2.0);
      Field back = dft_inverse(dft_forward(f));
      CHECK(oracles::max_abs_diff(f.values, back.values) < 1e-12);
    }
  }

  TEST_CASE("Parseval: cell-weighted energy equals inverse-volume-weighted mode energy") {
    LatticeSpec spec{2, 8, 0.5};
    Field f = oracles::seeded_field(spec, 31, 1.5);
    SpectralField hat = dft_forward(f);
    long double pos = 0.0L, mom = 0.0L;
    const double cell = 0.5 * 0.5;
    const double box = std::pow(8.0 * 0.5, 2);
    for (double v : f.values) pos += static_cast<long double>(v) * v * cell;
    for (const auto& m : hat.modes) mom += static_cast<long double>(std::norm(m)) / box;
    CHECK(static_cast<double>(pos) == doctest::Approx(static_cast<double>(mom)).epsilon(1e-12));
  }

  TEST_CASE("hermitian violation is tiny for transforms of real fields") {
    LatticeSpec spec{2, 6, 1.0};
    Field f = oracles::seeded_field(spec, 41, 1.0);
    CHECK(hermitian_violation(dft_forward(f)) < 1e-10);
  }

  TEST_CASE("inverse rejects strongly asymmetric spectra and accepts mild noise") {
    LatticeSpec spec{1, 8, 1.0};
    SpectralField hat = dft_forward(oracles::seeded_field(spec, 51, 1.0));
    SpectralField broken = hat;
    broken.modes[1] += std::complex<double>(0.0, 1.0);  // large asymmetric bump
    CHECK(hermitian_violation(broken) > 1e-6);
    CHECK_THROWS_AS(dft_inverse(broken), SpectralSymmetryError);

    SpectralField mild = hat;
    double scale = 0.0;
    for (const auto& m : mild.modes) scale = std::max(scale, std::abs(m));
    mild.modes[1] += std::complex<double>(0.0, 1e-8 * scale);
    CHECK_NOTHROW(dft_inverse(mild));
  }

  TEST_CASE("convolution matches the direct periodic sum") {
    LatticeSpec spec{1, 12, 0.5};
    Field a = oracles::seeded_field(spec, 61, 1.0);
    Field b = oracles::seeded_field(spec, 62, 1.0);
    Field fast = spatial_convolve(a, b);
    for (std::int64_t x = 0; x < 12; ++x) {
      long double sum = 0.0L;
      for (std::int64_t y = 0; y < 12; ++y) {
        const std::int64_t d = ((x - y) % 12 + 12) % 12;
        sum += static_cast<long double>(a.values[static_cast<std::size_t>(d)]) *
               b.values[static_cast<std::size_t>(y)] * 0.5;
      }
      CHECK(fast.values[static_cast<std::size_t>(x)] ==
            doctest::Approx(static_cast<double>(sum)).epsilon(1e-11));
    }
  }

  TEST_CASE("convolving against the unit-mass spike is the identity") {
    LatticeSpec spec{2, 6, 0.5};
    Field f = oracles::seeded_field(spec, 71, 1.0);
    Field unit = Field::spike(spec, 1.0 / (0.5 * 0.5));  // mass delta^d * height = 1
    Field out = spatial_convolve(f, unit);
    CHECK(oracles::max_abs_diff(f.values, out.values) < 1e-12);
  }

  TEST_CASE("convolution is symmetric and bilinear") {
    LatticeSpec spec{1, 10, 1.0};
    Field a = oracles::seeded_field(spec, 81, 1.0);
    Field b = oracles::seeded_field(spec, 82, 1.0);
    Field ab = spatial_convolve(a, b);
    Field ba = spatial_convolve(b, a);
    CHECK(oracles::max_abs_diff(ab.values, ba.values) < 1e-12);
  }
}
