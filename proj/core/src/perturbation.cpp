#include "skg/perturbation.hpp"

#include <limits>
#include <numeric>
#include <stdexcept>

namespace skg {

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  const unsigned __int128 wide = static_cast<unsigned __int128>(a) * b;
  if (wide > std::numeric_limits<std::uint64_t>::max())
    throw std::overflow_error("multinomial coefficient exceeds 64 bits");
  return static_cast<std::uint64_t>(wide);
}

// C(n, k) with exact integer steps: r <- r*(n-k+i)/i is integral at each i.
std::uint64_t binomial_checked(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    const unsigned __int128 wide = static_cast<unsigned __int128>(r) * (n - k + i);
    const unsigned __int128 q = wide / i;
    if (q > std::numeric_limits<std::uint64_t>::max())
      throw std::overflow_error("multinomial coefficient exceeds 64 bits");
    r = static_cast<std::uint64_t>(q);
  }
  return r;
}

void emit_partitions(int p, int j, int i, int remaining_p, int remaining_w,
                     std::vector<int>& counts, std::vector<PartitionTerm>& out) {
  if (i == j) {
    if (remaining_p == 0 && remaining_w == 0)
      out.push_back({counts, multinomial_coefficient(p, counts)});
    return;
  }
  // position i absorbs weight i per factor; descending loop yields descending
  // lexicographic output order.
  int hi = remaining_p;
  if (i > 0) hi = std::min(hi, remaining_w / i);
  for (int n_i = hi; n_i >= 0; --n_i) {
    counts[i] = n_i;
    emit_partitions(p, j, i + 1, remaining_p - n_i, remaining_w - i * n_i, counts, out);
  }
  counts[i] = 0;
}

}  // namespace

std::uint64_t multinomial_coefficient(int p, std::span<const int> counts) {
  if (p < 0) throw std::invalid_argument("multinomial_coefficient: p must be >= 0");
  std::int64_t total = 0;
  for (int c : counts) {
    if (c < 0) throw std::invalid_argument("multinomial_coefficient: counts must be >= 0");
    total += c;
  }
  if (total != p)
    throw std::invalid_argument("multinomial_coefficient: counts must sum to p");
  std::uint64_t result = 1;
  std::uint64_t remaining = static_cast<std::uint64_t>(p);
  for (int c : counts) {
    result = checked_mul(result, binomial_checked(remaining, static_cast<std::uint64_t>(c)));
    remaining -= static_cast<std::uint64_t>(c);
  }
  return result;
}

std::vector<PartitionTerm> enumerate_partitions(int p, int j) {
  if (p < 1) throw std::invalid_argument("enumerate_partitions: p must be >= 1");
  if (j < 1) throw std::invalid_argument("enumerate_partitions: j must be >= 1");
  std::vector<PartitionTerm> out;
  std::vector<int> counts(static_cast<std::size_t>(j), 0);
  emit_partitions(p, j, 0, p, j - 1, counts, out);
  return out;
}

std::vector<OrderField> compute_orders(int max_order, const Field& f, const Field& g,
                                       const SpaceTimeField& xi, const ModelParams& params,
                                       const DispersionTable& table, const TimeGrid& grid) {
  if (max_order < 0) throw std::invalid_argument("compute_orders: max_order must be >= 0");
  params.validate();
  std::vector<OrderField> orders;
  orders.reserve(static_cast<std::size_t>(max_order) + 1);

  SpaceTimeField phi0 = homogeneous_solution(f, g, table, grid);
  add_scaled(phi0, source_convolve(xi, table), 1.0);
  orders.push_back({0, std::move(phi0)});

  for (int j = 1; j <= max_order; ++j) {
    SpaceTimeField accum = SpaceTimeField::zeros(table.spec, grid);
    for (const PartitionTerm& term : enumerate_partitions(params.power, j)) {
      SpaceTimeField product{grid, {}};
      bool started = false;
      for (int i = 0; i < j; ++i) {
        const int n_i = term.counts[static_cast<std::size_t>(i)];
        if (n_i == 0) continue;
        SpaceTimeField factor = pointwise_power(orders[static_cast<std::size_t>(i)].field, n_i);
        product = started ? pointwise_multiply(product, factor) : std::move(factor);
        started = true;
      }
      add_scaled(accum, product, static_cast<double>(term.coefficient));
    }
    SpaceTimeField phi_j = source_convolve(accum, table);
    scale(phi_j, -1.0);
    orders.push_back({j, std::move(phi_j)});
  }
  return orders;
}

SpaceTimeField partial_sum(std::span<const OrderField> orders, double lambda) {
  if (orders.empty()) throw std::invalid_argument("partial_sum: no orders given");
  for (std::size_t j = 0; j < orders.size(); ++j)
    if (orders[j].order != static_cast<int>(j))
      throw std::invalid_argument("partial_sum: orders must be 0..J in sequence");
  SpaceTimeField result = orders.back().field;
  for (std::size_t j = orders.size() - 1; j-- > 0;) {
    scale(result, lambda);
    add_scaled(result, orders[j].field, 1.0);
  }
  return result;
}

}  // namespace skg
