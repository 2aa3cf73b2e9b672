#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "skg/duhamel.hpp"

namespace skg {

// Exact p! / prod(counts[i]!) for sum(counts) = p. Throws std::overflow_error
// when the reduced value no longer fits in 64 bits.
std::uint64_t multinomial_coefficient(int p, std::span<const int> counts);

// One term of the coupling-order recursion at order j: counts[i] factors taken
// from order i, with sum(counts) = p and sum(i*counts[i]) = j-1.
struct PartitionTerm {
  std::vector<int> counts;        // length j
  std::uint64_t coefficient = 1;  // p! / prod(counts[i]!)
};

// All terms feeding order j, in descending lexicographic order of counts.
std::vector<PartitionTerm> enumerate_partitions(int p, int j);

struct OrderField {
  int order = 0;
  SpaceTimeField field;
};

// Coupling-constant expansion of the integral equation:
//   order 0: homogeneous(f, g) + S * xi
//   order j: -S * sum_terms coeff * prod_i phi_i^{counts[i]}
// Returns orders 0..max_order; every intermediate order is kept.
std::vector<OrderField> compute_orders(int max_order, const Field& f, const Field& g,
                                       const SpaceTimeField& xi, const ModelParams& params,
                                       const DispersionTable& table, const TimeGrid& grid);

// Horner evaluation of sum_j lambda^j phi_j. `orders` must be 0..J in order.
SpaceTimeField partial_sum(std::span<const OrderField> orders, double lambda);

}  // namespace skg
