#include "skg/trees.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <utility>

#include "skg/perturbation.hpp"

namespace skg {

namespace {

char leaf_char(NodeKind k) {
  switch (k) {
    case NodeKind::LeafXi: return 'x';
    case NodeKind::LeafF: return 'f';
    case NodeKind::LeafG: return 'g';
    default: return '?';
  }
}

// Order-0 pieces every leaf evaluates to.
struct Basis {
  SpaceTimeField noise;   // S * xi
  SpaceTimeField from_f;  // C . f
  SpaceTimeField from_g;  // S . g
};

Basis make_basis(const Field& f, const Field& g, const SpaceTimeField& xi,
                 const DispersionTable& table, const TimeGrid& grid) {
  const Field zero = Field::zeros(table.spec);
  return {source_convolve(xi, table), homogeneous_solution(f, zero, table, grid),
          homogeneous_solution(zero, g, table, grid)};
}

SpaceTimeField eval_node(const TreeNode& node, const Basis& basis, const DispersionTable& table) {
  switch (node.kind) {
    case NodeKind::LeafXi: return basis.noise;
    case NodeKind::LeafF: return basis.from_f;
    case NodeKind::LeafG: return basis.from_g;
    case NodeKind::Inner: break;
  }
  SpaceTimeField product = eval_node(node.children.front(), basis, table);
  for (std::size_t c = 1; c < node.children.size(); ++c)
    product = pointwise_multiply(product, eval_node(node.children[c], basis, table));
  SpaceTimeField out = source_convolve(product, table);
  scale(out, -1.0);
  return out;
}

}  // namespace

int TreeNode::inner_count() const {
  int n = (kind == NodeKind::Inner) ? 1 : 0;
  for (const auto& c : children) n += c.inner_count();
  return n;
}

int TreeNode::leaf_count(NodeKind which) const {
  if (kind != NodeKind::Inner) return kind == which ? 1 : 0;
  int n = 0;
  for (const auto& c : children) n += c.leaf_count(which);
  return n;
}

std::string encode_tree(const TreeNode& node) {
  if (node.kind != NodeKind::Inner) return std::string(1, leaf_char(node.kind));
  std::string out = "(";
  for (const auto& c : node.children) out += encode_tree(c);
  out += ")";
  return out;
}

TreeNode canonicalize(TreeNode node) {
  if (node.kind != NodeKind::Inner) return node;
  for (auto& c : node.children) c = canonicalize(std::move(c));
  std::sort(node.children.begin(), node.children.end(),
            [](const TreeNode& a, const TreeNode& b) { return encode_tree(a) < encode_tree(b); });
  return node;
}

std::uint64_t symmetry_weight(const TreeNode& node, int power) {
  if (node.kind != NodeKind::Inner) return 1;
  if (static_cast<int>(node.children.size()) != power)
    throw std::invalid_argument("symmetry_weight: inner vertex does not have `power` children");
  std::map<std::string, int> multiplicity;
  for (const auto& c : node.children) ++multiplicity[encode_tree(c)];
  std::vector<int> counts;
  counts.reserve(multiplicity.size());
  for (const auto& [enc, m] : multiplicity) counts.push_back(m);
  std::uint64_t w = multinomial_coefficient(power, counts);
  for (const auto& c : node.children) {
    const std::uint64_t cw = symmetry_weight(c, power);
    const unsigned __int128 wide = static_cast<unsigned __int128>(w) * cw;
    if (wide > ~0ULL) throw std::overflow_error("tree weight exceeds 64 bits");
    w = static_cast<std::uint64_t>(wide);
  }
  return w;
}

std::uint64_t degree_multiplicity(const TreeNode& node) {
  // Root mark has degree 1; every other vertex counts its parent edge too.
  std::uint64_t prod = 1;
  const auto rec = [&](const TreeNode& n, auto&& self) -> void {
    prod *= (n.kind == NodeKind::Inner) ? static_cast<std::uint64_t>(n.children.size()) + 1 : 1;
    for (const auto& c : n.children) self(c, self);
  };
  rec(node, rec);
  return prod;
}

std::vector<WeightedTree> enumerate_trees(int power, int order) {
  if (power < 1) throw std::invalid_argument("enumerate_trees: power must be >= 1");
  if (order < 0) throw std::invalid_argument("enumerate_trees: order must be >= 0");

  // by_order[j] lists canonical trees with j inner vertices, duplicate-free.
  std::vector<std::vector<WeightedTree>> by_order(static_cast<std::size_t>(order) + 1);
  by_order[0] = {{TreeNode{NodeKind::LeafF, {}}, 1},
                 {TreeNode{NodeKind::LeafG, {}}, 1},
                 {TreeNode{NodeKind::LeafXi, {}}, 1}};
  if (order == 0) return by_order[0];

  for (int j = 1; j <= order; ++j) {
    // pool of candidate children, ascending in order so the chooser can stop
    // as soon as an entry's order exceeds the remaining budget
    std::vector<const WeightedTree*> pool;
    std::vector<int> pool_order;
    for (int o = 0; o < j; ++o)
      for (const auto& wt : by_order[static_cast<std::size_t>(o)]) {
        pool.push_back(&wt);
        pool_order.push_back(o);
      }
    std::vector<std::size_t> chosen;
    auto& out = by_order[static_cast<std::size_t>(j)];
    const auto choose = [&](std::size_t start, int slots, int budget, auto&& self) -> void {
      if (slots == 0) {
        if (budget != 0) return;
        TreeNode node{NodeKind::Inner, {}};
        node.children.reserve(chosen.size());
        std::uint64_t w = 1;
        std::map<std::size_t, int> mult;
        for (std::size_t idx : chosen) {
          node.children.push_back(pool[idx]->tree);
          ++mult[idx];
        }
        std::vector<int> counts;
        for (const auto& [idx, m] : mult) {
          counts.push_back(m);
          for (int r = 0; r < m; ++r) {
            const unsigned __int128 wide = static_cast<unsigned __int128>(w) * pool[idx]->weight;
            if (wide > ~0ULL) throw std::overflow_error("tree weight exceeds 64 bits");
            w = static_cast<std::uint64_t>(wide);
          }
        }
        const std::uint64_t local = multinomial_coefficient(power, counts);
        const unsigned __int128 wide = static_cast<unsigned __int128>(w) * local;
        if (wide > ~0ULL) throw std::overflow_error("tree weight exceeds 64 bits");
        out.push_back({canonicalize(std::move(node)), static_cast<std::uint64_t>(wide)});
        return;
      }
      for (std::size_t idx = start; idx < pool.size(); ++idx) {
        if (pool_order[idx] > budget) break;  // pool ascends in order
        chosen.push_back(idx);
        self(idx, slots - 1, budget - pool_order[idx], self);
        chosen.pop_back();
      }
    };
    choose(0, power, j - 1, choose);
  }
  return by_order[static_cast<std::size_t>(order)];
}

SpaceTimeField evaluate_tree(const WeightedTree& wt, const Field& f, const Field& g,
                             const SpaceTimeField& xi, const DispersionTable& table,
                             const TimeGrid& grid) {
  const Basis basis = make_basis(f, g, xi, table, grid);
  SpaceTimeField value = eval_node(wt.tree, basis, table);
  scale(value, static_cast<double>(wt.weight));
  return value;
}

SpaceTimeField tree_sum(int power, int order, const Field& f, const Field& g,
                        const SpaceTimeField& xi, const DispersionTable& table,
                        const TimeGrid& grid) {
  const Basis basis = make_basis(f, g, xi, table, grid);
  SpaceTimeField accum = SpaceTimeField::zeros(table.spec, grid);
  for (const WeightedTree& wt : enumerate_trees(power, order))
    add_scaled(accum, eval_node(wt.tree, basis, table), static_cast<double>(wt.weight));
  return accum;
}

std::string render_dot(const WeightedTree& wt) {
  std::string out = "digraph interaction_tree {\n";
  out += "  graph [label=\"weight " + std::to_string(wt.weight) + "\"];\n";
  out += "  n0 [shape=point, xlabel=\"x\"];\n";
  int next_id = 1;
  const auto emit = [&](const TreeNode& node, int parent, auto&& self) -> void {
    const int id = next_id++;
    const std::string name = "n" + std::to_string(id);
    switch (node.kind) {
      case NodeKind::Inner:
        out += "  " + name + " [shape=circle, style=filled, label=\"\"];\n";
        break;
      case NodeKind::LeafXi:
        out += "  " + name + " [shape=diamond, label=\"\"];\n";
        break;
      case NodeKind::LeafF:
        out += "  " + name + " [shape=circle, label=\"\"];\n";
        break;
      case NodeKind::LeafG:
        out += "  " + name + " [shape=doublecircle, label=\"\"];\n";
        break;
    }
    out += "  n" + std::to_string(parent) + " -> " + name + ";\n";
    for (const auto& c : node.children) self(c, id, self);
  };
  emit(wt.tree, 0, emit);
  out += "}\n";
  return out;
}

}  // namespace skg
