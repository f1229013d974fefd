#pragma once

#include <chrono>
#include <utility>

#include "iio/init.hpp"
#include "iio/inside_out.hpp"
#include "iio/instance.hpp"
#include "iio/netsimplex.hpp"
#include "iio/report.hpp"

namespace iio {

/// Solves from a caller-supplied feasible basis with the chosen variant.
inline SolveResult solve_from(const Instance& instance, BasisTree basis, const SolveOptions& options) {
  if (options.variant == Variant::ns) return network_simplex(instance, std::move(basis), options);
  return solve_inside_out(instance, std::move(basis), options);
}

/// Builds the initial basis named in `options` and solves. Wall time covers
/// the initial basis and the solve.
inline SolveResult solve(const Instance& instance, const SolveOptions& options = {}) {
  require_valid(instance);
  const auto started = std::chrono::steady_clock::now();
  SolveResult result = solve_from(instance, initial_basis(instance, options.init), options);
  result.report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

}  // namespace iio
