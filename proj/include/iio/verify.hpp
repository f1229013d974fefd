#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "iio/basis.hpp"
#include "iio/inside_out.hpp"
#include "iio/instance.hpp"
#include "iio/netsimplex.hpp"
#include "iio/pricing.hpp"

namespace iio {

/// Returns the first violated constraint of `solution`, or nullopt when it
/// is feasible: indices in range, non-negative flows, exact row and column
/// sums, and a stated objective equal to the recomputed one.
inline std::optional<std::string> check_feasibility(const Instance& instance,
                                                    const FlowSolution& solution) {
  const Index m = instance.sources();
  const Index n = instance.destinations();
  std::vector<Flow> out(static_cast<std::size_t>(m), 0);
  std::vector<Flow> in(static_cast<std::size_t>(n), 0);
  for (const auto& e : solution.entries) {
    if (e.source < 0 || e.source >= m || e.destination < 0 || e.destination >= n)
      return "entry (" + std::to_string(e.source + 1) + "," + std::to_string(e.destination + 1) +
             ") outside the " + std::to_string(m) + "x" + std::to_string(n) + " instance";
    if (e.flow < 0)
      return "negative flow at (" + std::to_string(e.source + 1) + "," +
             std::to_string(e.destination + 1) + ")";
    if (__builtin_add_overflow(out[static_cast<std::size_t>(e.source)], e.flow,
                               &out[static_cast<std::size_t>(e.source)]) ||
        __builtin_add_overflow(in[static_cast<std::size_t>(e.destination)], e.flow,
                               &in[static_cast<std::size_t>(e.destination)]))
      return "flow sums overflow 64 bits";
  }
  for (Index i = 0; i < m; ++i) {
    if (out[static_cast<std::size_t>(i)] != instance.supply(i))
      return "row " + std::to_string(i + 1) + ": shipped " +
             std::to_string(out[static_cast<std::size_t>(i)]) + ", supply " +
             std::to_string(instance.supply(i));
  }
  for (Index j = 0; j < n; ++j) {
    if (in[static_cast<std::size_t>(j)] != instance.demand(j))
      return "column " + std::to_string(j + 1) + ": received " +
             std::to_string(in[static_cast<std::size_t>(j)]) + ", demand " +
             std::to_string(instance.demand(j));
  }
  const Objective z = objective(instance, solution);
  if (z != solution.objective)
    return "stated objective " + to_string(solution.objective) + " != computed " + to_string(z);
  return std::nullopt;
}

struct Certificate {
  bool optimal = false;
  /// Objective of the checked solution.
  Objective objective = 0;
  /// Optimum reached from the completed basis when the solution was not
  /// optimal.
  Objective improved = 0;
  /// First negative reduced cost (row-major) of the completed basis.
  std::optional<PricedCell> witness;
};

namespace detail {

class DisjointSets {
 public:
  explicit DisjointSets(Index count) : parent_(static_cast<std::size_t>(count)) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  Index find(Index v) {
    while (parent_[static_cast<std::size_t>(v)] != v) {
      auto& p = parent_[static_cast<std::size_t>(v)];
      p = parent_[static_cast<std::size_t>(p)];
      v = p;
    }
    return v;
  }
  bool unite(Index a, Index b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[static_cast<std::size_t>(a)] = b;
    return true;
  }

 private:
  std::vector<Index> parent_;
};

}  // namespace detail

/// Builds a basis whose solution has the same objective as a feasible
/// `solution`: a spanning forest of the support, completed by zero edges in
/// row-major order. Support edges closing a cycle are put back by Phase-2
/// reinsertion, which never raises the objective. Then prices that basis;
/// if a negative reduced cost remains, network simplex from it decides
/// whether the objective can actually drop (degenerate bases may price
/// negative at an optimum).
inline Certificate certify_optimality(const Instance& instance, const FlowSolution& solution) {
  require_valid(instance);
  require_cost_range(instance);
  if (auto error = check_feasibility(instance, solution)) throw std::invalid_argument(*error);
  const Index m = instance.sources();
  const Index n = instance.destinations();

  std::map<std::pair<Index, Index>, Flow> support;
  for (const auto& e : solution.entries) {
    if (e.flow > 0) support[{e.source, e.destination}] += e.flow;
  }
  detail::DisjointSets sets(m + n);
  std::vector<FlowEntry> forest;
  AddedVariableLog extra;
  for (const auto& [cell, x] : support) {
    if (sets.unite(cell.first, m + cell.second))
      forest.push_back({cell.first, cell.second, x});
    else
      extra.push_back({cell.first, cell.second, x});
  }
  for (Index i = 0; i < m && forest.size() + 1 < static_cast<std::size_t>(m + n); ++i) {
    for (Index j = 0; j < n; ++j) {
      if (sets.unite(i, m + j)) forest.push_back({i, j, 0});
    }
  }
  BasisTree tree = BasisTree::from_edges(m, n, forest);
  CyclePath path;
  for (const auto& added : extra) reinsert_variable(tree, instance, added, path);

  Certificate cert;
  cert.objective = solution.objective;
  cert.improved = to_solution(tree, instance).objective;
  const Multipliers y = compute_multipliers(tree, instance);
  cert.witness = first_negative(instance, y);
  if (!cert.witness) {
    cert.optimal = cert.improved == cert.objective;
    return cert;
  }
  const SolveResult settled = network_simplex(instance, std::move(tree));
  cert.improved = settled.report.objective;
  cert.optimal = cert.improved == cert.objective;
  return cert;
}

}  // namespace iio
