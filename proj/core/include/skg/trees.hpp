#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "skg/duhamel.hpp"

namespace skg {

enum class NodeKind { LeafXi, LeafF, LeafG, Inner };

// Rooted interaction tree. Inner vertices carry exactly `power` children;
// leaves are tagged by which order-0 building block they stand for. Children
// are a multiset: the canonical form keeps them sorted by encoding, so
// isomorphic trees compare equal.
struct TreeNode {
  NodeKind kind = NodeKind::LeafXi;
  std::vector<TreeNode> children;

  int inner_count() const;
  int leaf_count(NodeKind which) const;
};

// Canonical string form: leaves are "x"/"f"/"g", an inner vertex wraps its
// children in parentheses. Unique per isomorphism class once canonicalized.
std::string encode_tree(const TreeNode& node);
TreeNode canonicalize(TreeNode node);

struct WeightedTree {
  TreeNode tree;
  std::uint64_t weight = 1;
};

// Product over inner vertices of p! / prod(multiplicity!) of the children
// multiset — the combinatorial factor the tree inherits from expanding the
// order recursion.
std::uint64_t symmetry_weight(const TreeNode& node, int power);

// Diagnostic only: product of vertex degrees counting the root mark and its
// edge (leaves contribute 1, inner vertices power+1). Not the weight used in
// tree_sum.
std::uint64_t degree_multiplicity(const TreeNode& node);

// All trees with `order` inner vertices, weights included, deterministic order.
std::vector<WeightedTree> enumerate_trees(int power, int order);

// Value of one tree on given data: a xi-leaf is S * xi, an f-leaf C . f, a
// g-leaf S . g; an inner vertex multiplies its children pointwise in
// space-time and applies -S * (.). The result carries weight * sign, the sign
// being (-1)^inner built into the per-vertex rule.
SpaceTimeField evaluate_tree(const WeightedTree& wt, const Field& f, const Field& g,
                             const SpaceTimeField& xi, const DispersionTable& table,
                             const TimeGrid& grid);

// Sum of all weighted trees at this order; reproduces the order-j field of the
// coupling expansion.
SpaceTimeField tree_sum(int power, int order, const Field& f, const Field& g,
                        const SpaceTimeField& xi, const DispersionTable& table,
                        const TimeGrid& grid);

// Graphviz rendering: root = point labelled "x", inner vertices filled
// circles, xi-leaves diamonds, f-leaves circles, g-leaves double circles;
// the weight goes into the graph label.
std::string render_dot(const WeightedTree& wt);

}  // namespace skg
