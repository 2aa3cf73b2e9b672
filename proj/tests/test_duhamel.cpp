#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "skg/duhamel.hpp"
#include "skg/errors.hpp"
#include "skg/kernels.hpp"

using namespace skg;

namespace {

DispersionTable table_for(const LatticeSpec& spec, double gamma, double mu2) {
  ModelParams mp;
  mp.gamma = gamma;
  mp.mu2 = mu2;
  return build_dispersion(spec, mp);
}

}  // namespace

TEST_SUITE("duhamel") {
  TEST_CASE("time grid construction") {
    TimeGrid g = TimeGrid::from_horizon(2.0, 0.25);
    CHECK(g.steps == 8);
    CHECK(g.dt == 0.25);
    CHECK(g.node_count() == 9);
    CHECK(g.horizon() == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(g.time_at(3) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK_THROWS_AS(TimeGrid::from_horizon(1.0, 0.3), std::invalid_argument);
    CHECK_THROWS_AS(TimeGrid::from_horizon(-1.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(TimeGrid::from_horizon(1.0, 0.0), std::invalid_argument);
  }

  TEST_CASE("space-time field helpers") {
    LatticeSpec spec{1, 4, 1.0};
    TimeGrid grid{0.5, 2};
    SpaceTimeField a = SpaceTimeField::zeros(spec, grid);
    CHECK(a.slices.size() == 3);
    a.slices[1].values = {1.0, -2.0, 0.5, 0.0};
    CHECK(sup_norm(a) == 2.0);
    SpaceTimeField b = a;
    b.slices[1].values[2] = 0.75;
    CHECK(sup_distance(a, b) == doctest::Approx(0.25).epsilon(1e-15));
    SpaceTimeField cubed = pointwise_power(a, 3);
    CHECK(cubed.slices[1].values[1] == -8.0);
    SpaceTimeField prod = pointwise_multiply(a, a);
    CHECK(prod.slices[1].values[1] == 4.0);
    scale(prod, 0.5);
    CHECK(prod.slices[1].values[1] == 2.0);
    add_scaled(prod, a, 1.0);
    CHECK(prod.slices[1].values[1] == 0.0);
  }

  TEST_CASE("homogeneous solution starts at f and matches a PDE integration") {
    LatticeSpec spec{1, 16, 1.0};
    DispersionTable table = table_for(spec, 0.5, 1.0);
    Field f = oracles::seeded_field(spec, 101, 0.5);
    Field g = oracles::seeded_field(spec, 102, 0.5);
    TimeGrid grid{0.1, 10};
    SpaceTimeField hom = homogeneous_solution(f, g, table, grid);
    CHECK(oracles::max_abs_diff(hom.slices[0].values, f.values) < 1e-13);

    ModelParams mp;
    mp.gamma = 0.5;
    mp.mu2 = 1.0;
    mp.lambda = 0.0;
    oracles::PdeState oracle{f, g};
    oracle = oracles::kdk_evolve(mp, oracle, 1.0, 1e-5);
    CHECK(oracles::max_abs_diff(hom.slices[10].values, oracle.phi.values) < 1e-7);
  }

  TEST_CASE("constant forcing approaches the closed-form mode response") {
    // phi = c (1 - C(t)) / omega2 for constant source c and zero initial data
    LatticeSpec spec{1, 8, 1.0};
    DispersionTable table = table_for(spec, 1.0, 1.0);
    TimeGrid grid{0.001, 2000};
    SpaceTimeField h = SpaceTimeField::zeros(spec, grid);
    const double c = 0.7;
    for (auto& slice : h.slices) slice = Field::constant(spec, c);
    SpaceTimeField psi = source_convolve(h, table);
    for (double v : psi.slices[0].values) CHECK(v == 0.0);
    for (double t : {0.5, 1.0, 2.0}) {
      const auto n = static_cast<std::size_t>(std::llround(t / 0.001));
      // the constant field only excites the zero mode, omega2 = mu2 = 1
      const double expect = c * (1.0 - eval_kernels(1.0, 1.0, t).c);
      for (double v : psi.slices[n].values)
        CHECK(v == doctest::Approx(expect).epsilon(1e-5));
    }
  }

  TEST_CASE("source convolution is linear and vanishes on zero input") {
    LatticeSpec spec{1, 8, 0.5};
    DispersionTable table = table_for(spec, 1.0, 0.8);
    TimeGrid grid{0.05, 20};
    SpaceTimeField a = oracles::seeded_spacetime(spec, grid, 111, 1.0);
    SpaceTimeField b = oracles::seeded_spacetime(spec, grid, 112, 1.0);
    SpaceTimeField combo = a;
    scale(combo, 2.0);
    add_scaled(combo, b, -3.0);
    SpaceTimeField lhs = source_convolve(combo, table);
    SpaceTimeField ra = source_convolve(a, table);
    SpaceTimeField rb = source_convolve(b, table);
    SpaceTimeField rhs = ra;
    scale(rhs, 2.0);
    add_scaled(rhs, rb, -3.0);
    CHECK(sup_distance(lhs, rhs) < 1e-11);

    SpaceTimeField zero = SpaceTimeField::zeros(spec, grid);
    CHECK(sup_norm(source_convolve(zero, table)) == 0.0);
  }

  TEST_CASE("retarded convolution against an impulse reproduces the kernel tail") {
    // h = impulse in the first slice only: psi(t_n) ~ (dt/2) S(t_n) * h(0)
    LatticeSpec spec{1, 8, 1.0};
    DispersionTable table = table_for(spec, 0.4, 1.5);
    TimeGrid grid{0.1, 10};
    SpaceTimeField h = SpaceTimeField::zeros(spec, grid);
    h.slices[0] = Field::spike(spec, 1.0);
    SpaceTimeField psi = source_convolve(h, table);
    for (std::size_t n = 1; n <= 10; ++n) {
      Field sk = kernel_position(table, grid.time_at(static_cast<std::int64_t>(n)), KernelKind::S);
      Field expect = spatial_convolve(sk, h.slices[0]);
      for (std::size_t i = 0; i < 8; ++i)
        CHECK(std::abs(psi.slices[n].values[i] - 0.5 * 0.1 * expect.values[i]) < 1e-12);
    }
  }

  TEST_CASE("lambda zero returns the linear solution after one evaluation") {
    LatticeSpec spec{1, 16, 1.0};
    ModelParams mp;
    mp.gamma = 1.0;
    mp.mu2 = 1.0;
    mp.lambda = 0.0;
    DispersionTable table = build_dispersion(spec, mp);
    TimeGrid grid{0.01, 100};
    Field f = oracles::seeded_field(spec, 121, 0.3);
    Field g = Field::zeros(spec);
    SpaceTimeField xi = oracles::seeded_spacetime(spec, grid, 122, 0.2);
    PicardResult res = picard_solve(f, g, xi, mp, table, grid);
    CHECK(res.iterations == 1);
    CHECK(res.residual == 0.0);
    SpaceTimeField lin = homogeneous_solution(f, g, table, grid);
    add_scaled(lin, source_convolve(xi, table), 1.0);
    CHECK(sup_distance(res.phi, lin) == 0.0);
  }

  TEST_CASE("picard residual certificate is honest") {
    LatticeSpec spec{1, 8, 1.0};
    ModelParams mp;
    mp.gamma = 1.0;
    mp.mu2 = 1.0;
    mp.lambda = 0.4;
    mp.power = 3;
    DispersionTable table = build_dispersion(spec, mp);
    TimeGrid grid{0.01, 100};
    Field f = oracles::seeded_field(spec, 131, 0.3);
    Field g = oracles::seeded_field(spec, 132, 0.3);
    SpaceTimeField xi = oracles::seeded_spacetime(spec, grid, 133, 0.1);
    PicardResult res = picard_solve(f, g, xi, mp, table, grid, 80, 1e-10);
    CHECK(res.residual < 1e-10);
    // recompute the fixed-point defect from scratch
    SpaceTimeField rhs = homogeneous_solution(f, g, table, grid);
    add_scaled(rhs, source_convolve(xi, table), 1.0);
    SpaceTimeField cube = pointwise_power(res.phi, 3);
    SpaceTimeField tail = source_convolve(cube, table);
    add_scaled(rhs, tail, -0.4);
    CHECK(std::abs(sup_distance(res.phi, rhs) - res.residual) < 1e-13);
  }

  TEST_CASE("picard solution of a uniform field tracks the scalar oscillator") {
    // uniform data keeps the field uniform: u'' + g u' + mu2 u + lambda u^3 = 0
    LatticeSpec spec{1, 8, 1.0};
    ModelParams mp;
    mp.gamma = 1.0;
    mp.mu2 = 1.0;
    mp.lambda = 0.5;
    mp.power = 3;
    DispersionTable table = build_dispersion(spec, mp);
    TimeGrid grid{0.002, 500};
    Field f = Field::constant(spec, 0.8);
    Field g = Field::constant(spec, -0.2);
    SpaceTimeField xi = SpaceTimeField::zeros(spec, grid);
    PicardResult res = picard_solve(f, g, xi, mp, table, grid, 80, 1e-12);
    auto ode = oracles::rk4_scalar(1.0, 1.0, 0.5, 3, 0.0, 0.8, -0.2, 1.0, 1e-5);
    for (double v : res.phi.slices.back().values)
      CHECK(v == doctest::Approx(ode.u).epsilon(2e-5));
  }

  TEST_CASE("picard matches a nonlinear PDE integration on non-uniform data") {
    LatticeSpec spec{1, 8, 1.0};
    ModelParams mp;
    mp.gamma = 1.0;
    mp.mu2 = 1.0;
    mp.lambda = 0.5;
    mp.power = 3;
    DispersionTable table = build_dispersion(spec, mp);
    TimeGrid grid{0.0005, 2000};
    Field f = oracles::seeded_field(spec, 141, 0.3);
    Field g = oracles::seeded_field(spec, 142, 0.3);
    SpaceTimeField xi = SpaceTimeField::zeros(spec, grid);
    PicardResult res = picard_solve(f, g, xi, mp, table, grid, 80, 1e-12);
    oracles::PdeState oracle{f, g};
    oracle = oracles::kdk_evolve(mp, oracle, 1.0, 1e-5);
    CHECK(oracles::max_abs_diff(res.phi.slices.back().values, oracle.phi.values) < 1e-5);
  }

  TEST_CASE("divergent coupling raises the non-convergence error") {
    LatticeSpec spec{1, 8, 1.0};
    ModelParams mp;
    mp.gamma = 0.1;
    mp.mu2 = 1.0;
    mp.lambda = 50.0;
    mp.power = 3;
    DispersionTable table = build_dispersion(spec, mp);
    TimeGrid grid{0.05, 40};
    Field f = Field::constant(spec, 1.0);
    Field g = Field::zeros(spec);
    SpaceTimeField xi = SpaceTimeField::zeros(spec, grid);
    CHECK_THROWS_AS(picard_solve(f, g, xi, mp, table, grid, 30, 1e-10), NonConvergenceError);
  }
}
