#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

#include "iio/basis.hpp"
#include "iio/instance.hpp"

namespace iio {

/// Multipliers are sums of at most m+n signed costs; reject cost ranges
/// where those sums or the reduced costs could leave 64 bits.
inline void require_cost_range(const Instance& instance) {
  const Cost max_cost = instance.costs().empty()
                            ? 0
                            : *std::max_element(instance.costs().begin(), instance.costs().end());
  const Cost limit = std::numeric_limits<Cost>::max() / 4 / static_cast<Cost>(instance.nodes() + 1);
  if (max_cost > limit)
    throw std::overflow_error("costs too large: multipliers could overflow 64 bits (max cost " +
                              std::to_string(max_cost) + ", limit " + std::to_string(limit) + ")");
}

/// Throws std::invalid_argument unless `basis` is a feasible spanning-tree
/// basis of `instance`.
inline void require_feasible_basis(const Instance& instance, const BasisTree& basis) {
  if (basis.sources() != instance.sources() || basis.destinations() != instance.destinations())
    throw std::invalid_argument("basis dimensions do not match the instance");
  if (auto error = check_tree(basis)) throw std::invalid_argument("basis: " + *error);
  if (auto error = check_conservation(basis, instance.supplies(), instance.demands()))
    throw std::invalid_argument("basis infeasible: " + *error);
}

struct PricedCell {
  Index source = 0;
  Index destination = 0;
  Cost reduced = 0;
};

/// First cell with negative reduced cost in row-major order, starting at
/// `start` and wrapping around once.
inline std::optional<PricedCell> first_negative(const Instance& instance, const Multipliers& y,
                                                std::size_t start = 0) {
  const Index m = instance.sources();
  const Index n = instance.destinations();
  const auto total = instance.cells();
  if (start >= total) start = 0;
  const auto i0 = static_cast<Index>(start / static_cast<std::size_t>(n));
  const auto j0 = static_cast<Index>(start % static_cast<std::size_t>(n));
  const auto scan_row = [&](Index i, Index from, Index to) -> std::optional<PricedCell> {
    const Cost* row = instance.row(i);
    const Cost ui = y.u[static_cast<std::size_t>(i)];
    const Cost* v = y.v.data();
    for (Index j = from; j < to; ++j) {
      const Cost r = row[j] - ui - v[j];
      if (r < 0) return PricedCell{i, j, r};
    }
    return std::nullopt;
  };
  if (auto hit = scan_row(i0, j0, n)) return hit;
  for (Index i = i0 + 1; i < m; ++i)
    if (auto hit = scan_row(i, 0, n)) return hit;
  for (Index i = 0; i < i0; ++i)
    if (auto hit = scan_row(i, 0, n)) return hit;
  return scan_row(i0, 0, j0);
}

/// Throws std::logic_error unless every basic edge has zero reduced cost.
inline void require_dual_consistency(const BasisTree& tree, const Instance& instance,
                                     const Multipliers& y) {
  if (y.u[0] != 0) throw std::logic_error("multipliers: root source is not anchored at zero");
  for (Index v = 1; v < tree.nodes(); ++v) {
    const auto [i, j] = tree.edge_cell(v);
    if (reduced_cost(i, j, y, instance) != 0)
      throw std::logic_error("multipliers: basic edge with non-zero reduced cost");
  }
}

}  // namespace iio
