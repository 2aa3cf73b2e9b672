#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "skg/perturbation.hpp"
#include "skg/trees.hpp"

using namespace skg;

namespace {

TreeNode leaf(NodeKind k) { return TreeNode{k, {}}; }

TreeNode inner(std::vector<TreeNode> children) {
  return TreeNode{NodeKind::Inner, std::move(children)};
}

std::size_t count_substr(const std::string& text, const std::string& what) {
  std::size_t n = 0;
  for (std::size_t pos = text.find(what); pos != std::string::npos;
       pos = text.find(what, pos + what.size()))
    ++n;
  return n;
}

const WeightedTree& find_tree(const std::vector<WeightedTree>& pool, const std::string& enc) {
  for (const auto& wt : pool)
    if (encode_tree(wt.tree) == enc) return wt;
  REQUIRE(false);
  return pool.front();
}

}  // namespace

TEST_SUITE("trees") {
  TEST_CASE("encoding of hand-built trees") {
    CHECK(encode_tree(leaf(NodeKind::LeafXi)) == "x");
    CHECK(encode_tree(leaf(NodeKind::LeafF)) == "f");
    CHECK(encode_tree(leaf(NodeKind::LeafG)) == "g");
    TreeNode t = inner({leaf(NodeKind::LeafXi), leaf(NodeKind::LeafXi), leaf(NodeKind::LeafXi)});
    CHECK(encode_tree(t) == "(xxx)");
    TreeNode nested = inner({t, leaf(NodeKind::LeafXi), leaf(NodeKind::LeafXi)});
    CHECK(encode_tree(nested) == "((xxx)xx)");
  }

  TEST_CASE("canonical form is invariant under child permutations") {
    TreeNode sub = inner({leaf(NodeKind::LeafG), leaf(NodeKind::LeafXi), leaf(NodeKind::LeafF)});
    TreeNode a = inner({sub, leaf(NodeKind::LeafXi), leaf(NodeKind::LeafF)});
    TreeNode b = inner({leaf(NodeKind::LeafXi), leaf(NodeKind::LeafF),
                        inner({leaf(NodeKind::LeafXi), leaf(NodeKind::LeafF), leaf(NodeKind::LeafG)})});
    CHECK(encode_tree(canonicalize(a)) == encode_tree(canonicalize(b)));
    CHECK(encode_tree(canonicalize(a)) == "((fgx)fx)");
  }

  TEST_CASE("structure counters") {
    TreeNode t = inner({inner({leaf(NodeKind::LeafXi), leaf(NodeKind::LeafXi), leaf(NodeKind::LeafXi)}),
                        leaf(NodeKind::LeafF), leaf(NodeKind::LeafG)});
    CHECK(t.inner_count() == 2);
    CHECK(t.leaf_count(NodeKind::LeafXi) == 3);
    CHECK(t.leaf_count(NodeKind::LeafF) == 1);
    CHECK(t.leaf_count(NodeKind::LeafG) == 1);
  }

  TEST_CASE("combinatorial weights of the worked examples") {
    // one interaction, three noise legs: no repetition penalty
    TreeNode all_noise = inner({leaf(NodeKind::LeafXi), leaf(NodeKind::LeafXi), leaf(NodeKind::LeafXi)});
    CHECK(symmetry_weight(all_noise, 3) == 1);
    // one displacement leg among two noise legs: 3!/,(1!2!) = 3 placements
    TreeNode one_f = inner({leaf(NodeKind::LeafF), leaf(NodeKind::LeafXi), leaf(NodeKind::LeafXi)});
    CHECK(symmetry_weight(one_f, 3) == 3);
    // all legs distinct: 3! orderings
    TreeNode distinct = inner({leaf(NodeKind::LeafF), leaf(NodeKind::LeafG), leaf(NodeKind::LeafXi)});
    CHECK(symmetry_weight(distinct, 3) == 6);
    // nested: the order-1 subtree is one of three interchangeable legs
    TreeNode nested = inner({all_noise, leaf(NodeKind::LeafXi), leaf(NodeKind::LeafXi)});
    CHECK(symmetry_weight(nested, 3) == 3);
    CHECK(degree_multiplicity(all_noise) == 4);
    CHECK(degree_multiplicity(nested) == 16);
    CHECK(degree_multiplicity(leaf(NodeKind::LeafXi)) == 1);
  }

  TEST_CASE("enumeration counts and weight totals, cubic interaction") {
    const std::vector<std::size_t> counts{3, 10, 60, 525, 5170};
    const std::vector<std::uint64_t> totals{3, 27, 729, 26244, 1082565};
    for (int j = 0; j <= 4; ++j) {
      auto pool = enumerate_trees(3, j);
      CHECK(pool.size() == counts[static_cast<std::size_t>(j)]);
      std::uint64_t sum = 0;
      for (const auto& wt : pool) sum += wt.weight;
      CHECK(sum == totals[static_cast<std::size_t>(j)]);
    }
  }

  TEST_CASE("enumeration for a quadratic interaction, order one") {
    auto pool = enumerate_trees(2, 1);
    REQUIRE(pool.size() == 6);
    std::map<std::string, std::uint64_t> got;
    for (const auto& wt : pool) got[encode_tree(wt.tree)] = wt.weight;
    const std::map<std::string, std::uint64_t> want{
        {"(ff)", 1}, {"(fg)", 2}, {"(fx)", 2}, {"(gg)", 1}, {"(gx)", 2}, {"(xx)", 1}};
    CHECK(got == want);
  }

  TEST_CASE("enumerated trees are canonical, unique, and structurally consistent") {
    for (int p : {2, 3}) {
      for (int j = 0; j <= 3; ++j) {
        auto pool = enumerate_trees(p, j);
        std::set<std::string> seen;
        for (const auto& wt : pool) {
          const std::string enc = encode_tree(wt.tree);
          CHECK(seen.insert(enc).second);
          CHECK(encode_tree(canonicalize(wt.tree)) == enc);
          CHECK(wt.tree.inner_count() == j);
          const int leaves = wt.tree.leaf_count(NodeKind::LeafXi) +
                             wt.tree.leaf_count(NodeKind::LeafF) +
                             wt.tree.leaf_count(NodeKind::LeafG);
          CHECK(leaves == j * (p - 1) + 1);
          CHECK(wt.weight == symmetry_weight(wt.tree, p));
          CHECK(wt.weight >= 1);
        }
      }
    }
  }

  TEST_CASE("specific worked trees appear in the enumeration") {
    auto order1 = enumerate_trees(3, 1);
    CHECK(find_tree(order1, "(xxx)").weight == 1);
    CHECK(find_tree(order1, "(fxx)").weight == 3);
    auto order2 = enumerate_trees(3, 2);
    CHECK(find_tree(order2, "((xxx)xx)").weight == 3);
    CHECK(find_tree(order2, "((fgx)fx)").weight == 36);
  }

  TEST_CASE("order-zero tree values are the three building blocks") {
    LatticeSpec spec{1, 8, 1.0};
    ModelParams mp;
    mp.gamma = 1.0;
    mp.mu2 = 1.0;
    DispersionTable table = build_dispersion(spec, mp);
    TimeGrid grid{0.05, 20};
    Field f = oracles::seeded_field(spec, 181, 0.5);
    Field g = oracles::seeded_field(spec, 182, 0.5);
    SpaceTimeField xi = oracles::seeded_spacetime(spec, grid, 183, 0.4);
    auto pool = enumerate_trees(3, 0);

    SpaceTimeField from_f = evaluate_tree(find_tree(pool, "f"), f, g, xi, table, grid);
    CHECK(sup_distance(from_f, homogeneous_solution(f, Field::zeros(spec), table, grid)) == 0.0);
    SpaceTimeField from_g = evaluate_tree(find_tree(pool, "g"), f, g, xi, table, grid);
    CHECK(sup_distance(from_g, homogeneous_solution(Field::zeros(spec), g, table, grid)) == 0.0);
    SpaceTimeField from_x = evaluate_tree(find_tree(pool, "x"), f, g, xi, table, grid);
    CHECK(sup_distance(from_x, source_convolve(xi, table)) == 0.0);
  }

  TEST_CASE("tree sum is the weighted sum of individual evaluations") {
    LatticeSpec spec{1, 8, 1.0};
    ModelParams mp;
    mp.gamma = 1.0;
    mp.mu2 = 1.0;
    DispersionTable table = build_dispersion(spec, mp);
    TimeGrid grid{0.05, 20};
    Field f = oracles::seeded_field(spec, 191, 0.3);
    Field g = oracles::seeded_field(spec, 192, 0.3);
    SpaceTimeField xi = oracles::seeded_spacetime(spec, grid, 193, 0.2);
    SpaceTimeField total = tree_sum(3, 2, f, g, xi, table, grid);
    SpaceTimeField manual = SpaceTimeField::zeros(spec, grid);
    for (const auto& wt : enumerate_trees(3, 2))
      add_scaled(manual, evaluate_tree(wt, f, g, xi, table, grid), 1.0);
    CHECK(sup_distance(total, manual) < 1e-12);
  }

  TEST_CASE("tree sums reproduce the coupling-order fields") {
    LatticeSpec spec{1, 8, 1.0};
    ModelParams mp;
    mp.gamma = 1.0;
    mp.mu2 = 1.0;
    mp.power = 3;
    DispersionTable table = build_dispersion(spec, mp);
    TimeGrid grid{0.05, 20};
    Field f = oracles::seeded_field(spec, 201, 0.3);
    Field g = oracles::seeded_field(spec, 202, 0.3);
    SpaceTimeField xi = oracles::seeded_spacetime(spec, grid, 203, 0.2);
    auto orders = compute_orders(2, f, g, xi, mp, table, grid);
    for (int j = 0; j <= 2; ++j) {
      SpaceTimeField total = tree_sum(3, j, f, g, xi, table, grid);
      CHECK(sup_distance(total, orders[static_cast<std::size_t>(j)].field) < 1e-10);
    }
  }

  TEST_CASE("nested tree value against a from-scratch quadrature") {
    // Evaluate ((xxx)xx) with nothing from the kernel or integral modules:
    // mode kernels by Runge-Kutta, position kernels by direct cosine sums,
    // spatial convolutions as periodic double sums, time integrals by the
    // same trapezoid rule on the nodes.
    const int N = 4;
    const double gamma = 1.0, mu2 = 1.0, dt = 0.1;
    const int steps = 10;
    LatticeSpec spec{1, N, 1.0};
    TimeGrid grid{dt, steps};

    // mode kernels S_k(t_n), integrated with a micro-step far below dt
    std::vector<std::vector<double>> smode(static_cast<std::size_t>(steps) + 1,
                                           std::vector<double>(N, 0.0));
    for (int k = 0; k < N; ++k) {
      const double w2 = 4.0 * std::pow(std::sin(M_PI * k / N), 2) + mu2;
      double u = 0.0, v = 1.0;
      smode[0][static_cast<std::size_t>(k)] = 0.0;
      for (int n = 1; n <= steps; ++n) {
        const int micro = 1000;
        const double h = dt / micro;
        for (int m = 0; m < micro; ++m) {
          const auto acc = [&](double uu, double vv) { return -gamma * vv - w2 * uu; };
          const double k1u = v, k1v = acc(u, v);
          const double k2u = v + 0.5 * h * k1v, k2v = acc(u + 0.5 * h * k1u, v + 0.5 * h * k1v);
          const double k3u = v + 0.5 * h * k2v, k3v = acc(u + 0.5 * h * k2u, v + 0.5 * h * k2v);
          const double k4u = v + h * k3v, k4v = acc(u + h * k3u, v + h * k3v);
          u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
          v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        }
        smode[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)] = u;
      }
    }
    // position kernel S(t_n, x) = (1/N) sum_k S_k cos(2 pi k x / N)
    const auto s_pos = [&](int n, int x) {
      double sum = 0.0;
      for (int k = 0; k < N; ++k)
        sum += smode[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)] *
               std::cos(2.0 * M_PI * k * x / N);
      return sum / N;
    };
    using Layer = std::vector<std::vector<double>>;  // [node][site]
    const auto convolve_tail = [&](const Layer& h) {
      Layer out(static_cast<std::size_t>(steps) + 1, std::vector<double>(N, 0.0));
      for (int n = 0; n <= steps; ++n)
        for (int x = 0; x < N; ++x) {
          long double acc = 0.0L;
          for (int m = 0; m <= n; ++m) {
            const double w = (m == 0 || m == n) ? 0.5 : 1.0;
            long double spatial = 0.0L;
            for (int y = 0; y < N; ++y)
              spatial += s_pos(n - m, ((x - y) % N + N) % N) *
                         h[static_cast<std::size_t>(m)][static_cast<std::size_t>(y)];
            acc += w * spatial;
          }
          out[static_cast<std::size_t>(n)][static_cast<std::size_t>(x)] =
              dt * static_cast<double>(acc);
        }
      return out;
    };

    SpaceTimeField xi = oracles::seeded_spacetime(spec, grid, 211, 0.5);
    Layer xi_layer(static_cast<std::size_t>(steps) + 1, std::vector<double>(N, 0.0));
    for (int n = 0; n <= steps; ++n)
      for (int x = 0; x < N; ++x)
        xi_layer[static_cast<std::size_t>(n)][static_cast<std::size_t>(x)] =
            xi.slices[static_cast<std::size_t>(n)].values[static_cast<std::size_t>(x)];

    Layer leaf_noise = convolve_tail(xi_layer);  // G * xi
    // inner vertex: cube, propagate, negate
    Layer cube = leaf_noise;
    for (auto& slice : cube)
      for (auto& v : slice) v = v * v * v;
    Layer inner1 = convolve_tail(cube);
    for (auto& slice : inner1)
      for (auto& v : slice) v = -v;
    // root: inner1 times two noise legs, propagate, negate, weight 3
    Layer prod = inner1;
    for (int n = 0; n <= steps; ++n)
      for (int x = 0; x < N; ++x)
        prod[static_cast<std::size_t>(n)][static_cast<std::size_t>(x)] *=
            leaf_noise[static_cast<std::size_t>(n)][static_cast<std::size_t>(x)] *
            leaf_noise[static_cast<std::size_t>(n)][static_cast<std::size_t>(x)];
    Layer root = convolve_tail(prod);
    for (auto& slice : root)
      for (auto& v : slice) v = -3.0 * v;

    ModelParams mp;
    mp.gamma = gamma;
    mp.mu2 = mu2;
    DispersionTable table = build_dispersion(spec, mp);
    Field zf = Field::zeros(spec), zg = Field::zeros(spec);

    // first the bare noise leaf, isolating kernel agreement
    auto pool0 = enumerate_trees(3, 0);
    SpaceTimeField leaf_lib = evaluate_tree(find_tree(pool0, "x"), zf, zg, xi, table, grid);
    for (int n = 0; n <= steps; ++n)
      for (int x = 0; x < N; ++x)
        CHECK(std::abs(leaf_lib.slices[static_cast<std::size_t>(n)].values[static_cast<std::size_t>(x)] -
                       leaf_noise[static_cast<std::size_t>(n)][static_cast<std::size_t>(x)]) < 1e-10);

    auto pool2 = enumerate_trees(3, 2);
    SpaceTimeField nested_lib = evaluate_tree(find_tree(pool2, "((xxx)xx)"), zf, zg, xi, table, grid);
    for (int n = 0; n <= steps; ++n)
      for (int x = 0; x < N; ++x)
        CHECK(std::abs(nested_lib.slices[static_cast<std::size_t>(n)].values[static_cast<std::size_t>(x)] -
                       root[static_cast<std::size_t>(n)][static_cast<std::size_t>(x)]) < 1e-9);
  }

  TEST_CASE("graph rendering carries the vertex glyphs and the weight") {
    auto pool = enumerate_trees(3, 1);
    const std::string dot = render_dot(find_tree(pool, "(fgx)"));
    CHECK(dot.find("digraph") == 0);
    CHECK(dot.find("weight 6") != std::string::npos);
    CHECK(dot.find("shape=point") != std::string::npos);
    CHECK(dot.find("shape=diamond") != std::string::npos);
    CHECK(dot.find("shape=doublecircle") != std::string::npos);
    CHECK(count_substr(dot, "->") == 4);  // mark->root plus three legs

    const std::string nested = render_dot(find_tree(enumerate_trees(3, 2), "((xxx)xx)"));
    CHECK(nested.find("weight 3") != std::string::npos);
    CHECK(count_substr(nested, "->") == 7);
    CHECK(count_substr(nested, "shape=diamond") == 5);
    CHECK(count_substr(nested, "style=filled") == 2);
  }
}
