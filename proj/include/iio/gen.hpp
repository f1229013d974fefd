#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "iio/instance.hpp"

namespace iio {

enum class Family : std::uint8_t { uniform_square, uniform_rect, grid_quadratic };

inline std::string_view to_string(Family family) {
  switch (family) {
    case Family::uniform_square: return "usq";
    case Family::uniform_rect: return "urect";
    case Family::grid_quadratic: return "grid";
  }
  return "?";
}

inline std::optional<Family> parse_family(std::string_view name) {
  if (name == "usq") return Family::uniform_square;
  if (name == "urect") return Family::uniform_rect;
  if (name == "grid") return Family::grid_quadratic;
  return std::nullopt;
}

struct GenSpec {
  Family family = Family::uniform_square;
  Index m = 0;
  Index n = 0;
  /// Grid side for grid_quadratic; m = n = side^2.
  Index grid_side = 0;
  std::uint64_t seed = 1;
  Flow mass_max = 1000;
  /// Unset means max(m, n) for the uniform families.
  std::optional<Cost> cost_max;
};

/// Draws from std::mt19937_64, whose output sequence is fixed by the
/// standard. Bounded draws use rejection sampling rather than
/// std::uniform_int_distribution, whose algorithm differs between standard
/// libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform integer in [lo, hi].
  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t range = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
    if (range == 0) return static_cast<std::int64_t>(engine_());
    const std::uint64_t reject_below = (0 - range) % range;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x < reject_below);
    return lo + static_cast<std::int64_t>(x % range);
  }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

namespace detail {

/// Adds `excess` units to `masses` one at a time, cycling from index 0 over
/// entries still below `cap`; once all reach `cap` the rest is spread evenly
/// over every entry, lowest indices taking the remainder.
inline void spread(std::vector<Flow>& masses, Flow excess, Flow cap) {
  while (excess > 0) {
    bool any = false;
    for (Flow& x : masses) {
      if (excess == 0) break;
      if (x < cap) {
        ++x;
        --excess;
        any = true;
      }
    }
    if (!any) {
      const auto count = static_cast<Flow>(masses.size());
      const Flow each = excess / count;
      const Flow rest = excess % count;
      for (std::size_t k = 0; k < masses.size(); ++k)
        masses[k] += each + (static_cast<Flow>(k) < rest ? 1 : 0);
      excess = 0;
    }
  }
}

}  // namespace detail

/// Balances in place: the shortfall goes to the last entry of the lighter
/// side, and whatever pushes that entry above `cap` is spread round-robin.
inline void balance_masses(std::vector<Flow>& supplies, std::vector<Flow>& demands, Flow cap) {
  const Flow a = std::accumulate(supplies.begin(), supplies.end(), Flow{0});
  const Flow b = std::accumulate(demands.begin(), demands.end(), Flow{0});
  if (a == b) return;
  auto& lighter = a > b ? demands : supplies;
  Flow& last = lighter.back();
  last += a > b ? a - b : b - a;
  if (last > cap) {
    const Flow excess = last - cap;
    last = cap;
    detail::spread(lighter, excess, cap);
  }
}

namespace detail {

inline void require_spec(const GenSpec& spec) {
  if (spec.mass_max < 1) throw std::invalid_argument("mass_max must be at least 1");
  if (spec.cost_max && *spec.cost_max < 1) throw std::invalid_argument("cost_max must be at least 1");
}

inline std::vector<Flow> draw_masses(Rng& rng, Index count, Flow mass_max) {
  std::vector<Flow> out(static_cast<std::size_t>(count));
  for (Flow& x : out) x = rng.uniform(1, mass_max);
  return out;
}

}  // namespace detail

/// Supplies, then demands, then costs row-major, all i.i.d. uniform from one
/// seeded stream; then balanced.
inline Instance gen_uniform(const GenSpec& spec) {
  detail::require_spec(spec);
  if (spec.m < 1 || spec.n < 1) throw std::invalid_argument("dimensions must be positive");
  if (spec.family == Family::uniform_square && spec.m != spec.n)
    throw std::invalid_argument("uniform-square instances need m == n");
  if (spec.family == Family::grid_quadratic)
    throw std::invalid_argument("gen_uniform does not build grid instances");
  const Cost cost_max = spec.cost_max.value_or(std::max(spec.m, spec.n));
  Rng rng(spec.seed);
  auto supplies = detail::draw_masses(rng, spec.m, spec.mass_max);
  auto demands = detail::draw_masses(rng, spec.n, spec.mass_max);
  std::vector<Cost> costs(static_cast<std::size_t>(spec.m) * static_cast<std::size_t>(spec.n));
  for (Cost& c : costs) c = rng.uniform(1, cost_max);
  balance_masses(supplies, demands, spec.mass_max);
  return Instance(spec.m, spec.n, std::move(supplies), std::move(demands), std::move(costs));
}

/// Sources and destinations on the same side x side grid (node k sits at
/// x = k % side, y = k / side) with squared Euclidean unit costs.
inline Instance gen_grid_quadratic(const GenSpec& spec) {
  detail::require_spec(spec);
  const Index g = spec.grid_side;
  if (g < 2) throw std::invalid_argument("grid side must be at least 2");
  const Index count = g * g;
  Rng rng(spec.seed);
  auto supplies = detail::draw_masses(rng, count, spec.mass_max);
  auto demands = detail::draw_masses(rng, count, spec.mass_max);
  std::vector<Cost> costs(static_cast<std::size_t>(count) * static_cast<std::size_t>(count));
  std::size_t k = 0;
  for (Index s = 0; s < count; ++s) {
    for (Index d = 0; d < count; ++d) {
      const Cost dx = s % g - d % g;
      const Cost dy = s / g - d / g;
      costs[k++] = dx * dx + dy * dy;
    }
  }
  balance_masses(supplies, demands, spec.mass_max);
  return Instance(count, count, std::move(supplies), std::move(demands), std::move(costs));
}

inline Instance generate(const GenSpec& spec) {
  return spec.family == Family::grid_quadratic ? gen_grid_quadratic(spec) : gen_uniform(spec);
}

}  // namespace iio
