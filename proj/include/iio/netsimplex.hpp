#pragma once

#include <chrono>
#include <cstddef>
#include <utility>

#include "iio/basis.hpp"
#include "iio/instance.hpp"
#include "iio/pricing.hpp"
#include "iio/report.hpp"

namespace iio {

/// Primal network simplex with first-negative-reduced-cost pricing. The scan
/// resumes after the last entering cell and wraps around. After m+n pivots
/// without strict improvement it switches to Bland's rule (scan from cell 0,
/// smallest-index leaving edge) until the objective drops again.
inline SolveResult network_simplex(const Instance& instance, BasisTree tree,
                                   const SolveOptions& options = {}) {
  require_valid(instance);
  require_cost_range(instance);
  require_feasible_basis(instance, tree);
  const auto started = std::chrono::steady_clock::now();

  SolveReport report;
  Multipliers y;
  CyclePath path;
  Objective objective = to_solution(tree, instance).objective;
  const auto n = static_cast<std::size_t>(instance.destinations());
  const std::int64_t stall_limit = instance.nodes();
  std::size_t cursor = 0;
  std::int64_t stalled = 0;
  bool bland = false;
  std::size_t path_nodes = 0;

  while (true) {
    compute_multipliers(tree, instance, y);
    ++report.multiplier_computations;
    const auto entering = first_negative(instance, y, bland ? 0 : cursor);
    if (!entering) {
      report.optimal = true;
      break;
    }
    find_path(tree, entering->source, entering->destination, path);
    const Bottleneck up =
        max_increase(path, tree, bland ? LeavingRule::smallest_index : LeavingRule::nearest_source);
    const auto leaving = tree.edge_cell(path.edge_at(up.position));
    apply_flow_change(tree, path, up.amount);
    pivot_exchange(tree, path, up.amount, up.position);
    const Objective before = objective;
    objective += static_cast<Objective>(up.amount) * entering->reduced;
    ++report.pivots_total;
    path_nodes += path.node_count();
    if (options.record_trace)
      report.trace.push_back({TraceEvent::Kind::simplex_pivot, entering->source,
                              entering->destination, up.amount, leaving, objective});

    cursor = static_cast<std::size_t>(entering->source) * n +
             static_cast<std::size_t>(entering->destination) + 1;
    if (objective < before) {
      stalled = 0;
      bland = false;
    } else if (++stalled >= stall_limit) {
      bland = true;
    }
  }

  report.objective = objective;
  report.avg_path_length =
      report.pivots_total > 0 ? static_cast<double>(path_nodes) / static_cast<double>(report.pivots_total)
                              : 0.0;
  report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  SolveResult result;
  result.solution = to_solution(tree, instance);
  if (result.solution.objective != objective)
    throw std::logic_error("tracked objective drifted from the basis cost");
  result.report = std::move(report);
  result.basis = std::move(tree);
  return result;
}

}  // namespace iio
