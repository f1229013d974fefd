#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "iio/basis.hpp"
#include "iio/instance.hpp"

namespace iio {

enum class InitMethod : std::uint8_t { nwc, mmr, vam };

inline std::string_view to_string(InitMethod method) {
  switch (method) {
    case InitMethod::nwc: return "nwc";
    case InitMethod::mmr: return "mmr";
    case InitMethod::vam: return "vam";
  }
  return "?";
}

inline std::optional<InitMethod> parse_init_method(std::string_view name) {
  if (name == "nwc") return InitMethod::nwc;
  if (name == "mmr") return InitMethod::mmr;
  if (name == "vam") return InitMethod::vam;
  return std::nullopt;
}

namespace detail {

/// Greedy allocation bookkeeping shared by the cell-selection heuristics.
/// Every recorded edge closes exactly one line, except the final one which
/// closes the last row and column together, so m+n-1 edges come out.
class LineAllocator {
 public:
  explicit LineAllocator(const Instance& instance)
      : instance_(instance),
        supply_left_(instance.supplies()),
        demand_left_(instance.demands()),
        row_open_(static_cast<std::size_t>(instance.sources()), 1),
        col_open_(static_cast<std::size_t>(instance.destinations()), 1),
        rows_open_(instance.sources()),
        cols_open_(instance.destinations()) {
    edges_.reserve(static_cast<std::size_t>(instance.nodes()) - 1);
  }

  bool row_open(Index i) const { return row_open_[static_cast<std::size_t>(i)] != 0; }
  bool col_open(Index j) const { return col_open_[static_cast<std::size_t>(j)] != 0; }
  bool done() const { return rows_open_ == 0 && cols_open_ == 0; }
  Index rows_open() const { return rows_open_; }
  Index cols_open() const { return cols_open_; }

  /// Allocates at an open cell. When row and column empty together, the
  /// column closes and the row continues with a zero-flow edge at its
  /// cheapest remaining open column (ties: lowest column).
  void allocate(Index i, Index j) {
    Flow& a = supply_left_[static_cast<std::size_t>(i)];
    Flow& b = demand_left_[static_cast<std::size_t>(j)];
    const Flow x = std::min(a, b);
    edges_.push_back({i, j, x});
    a -= x;
    b -= x;
    if (a == 0 && b == 0) {
      if (cols_open_ > 1) {
        close_col(j);
        Index best = -1;
        const Cost* row = instance_.row(i);
        for (Index c = 0; c < instance_.destinations(); ++c) {
          if (col_open(c) && (best < 0 || row[c] < row[best])) best = c;
        }
        edges_.push_back({i, best, 0});
        close_row(i);
      } else if (rows_open_ > 1) {
        close_row(i);
      } else {
        close_row(i);
        close_col(j);
      }
    } else if (a == 0) {
      close_row(i);
    } else {
      close_col(j);
    }
  }

  BasisTree finish() const {
    return BasisTree::from_edges(instance_.sources(), instance_.destinations(), edges_);
  }

  void close_row(Index i) {
    row_open_[static_cast<std::size_t>(i)] = 0;
    --rows_open_;
  }
  void close_col(Index j) {
    col_open_[static_cast<std::size_t>(j)] = 0;
    --cols_open_;
  }

 private:
  const Instance& instance_;
  std::vector<Flow> supply_left_;
  std::vector<Flow> demand_left_;
  std::vector<std::uint8_t> row_open_;
  std::vector<std::uint8_t> col_open_;
  Index rows_open_;
  Index cols_open_;
  std::vector<FlowEntry> edges_;
};

}  // namespace detail

/// North-west corner rule. On simultaneous exhaustion the cursor moves right
/// only, which records a zero-flow edge and keeps the staircase a tree.
inline BasisTree north_west_corner(const Instance& instance) {
  const Index m = instance.sources();
  const Index n = instance.destinations();
  std::vector<FlowEntry> edges;
  edges.reserve(static_cast<std::size_t>(m + n - 1));
  Flow a = instance.supply(0);
  Flow b = instance.demand(0);
  Index i = 0;
  Index j = 0;
  while (true) {
    const Flow x = std::min(a, b);
    edges.push_back({i, j, x});
    a -= x;
    b -= x;
    if (i == m - 1 && j == n - 1) break;
    if ((b == 0 && j < n - 1) || i == m - 1) {
      ++j;
      b = instance.demand(j);
    } else {
      ++i;
      a = instance.supply(i);
    }
  }
  return BasisTree::from_edges(m, n, edges);
}

namespace detail {

/// Feeds `items` to `visit` in ascending order until it returns false,
/// selecting and sorting doubling chunks so that an early stop skips most
/// of the sorting work.
template <typename T, typename Less, typename Visit>
void visit_ascending(std::vector<T>& items, std::size_t first_chunk, Less less, Visit visit) {
  std::size_t begin = 0;
  std::size_t chunk = std::max<std::size_t>(first_chunk, 1);
  while (begin < items.size()) {
    const std::size_t end = std::min(items.size(), begin + chunk);
    const auto lo = items.begin() + static_cast<std::ptrdiff_t>(begin);
    const auto hi = items.begin() + static_cast<std::ptrdiff_t>(end);
    if (end < items.size()) std::nth_element(lo, hi, items.end(), less);
    std::sort(lo, hi, less);
    for (auto it = lo; it != hi; ++it) {
      if (!visit(*it)) return;
    }
    begin = end;
    chunk *= 2;
  }
}

}  // namespace detail

/// Matrix minimum rule: cells in (cost, row, column) order, skipping closed
/// rows and columns.
inline BasisTree matrix_minimum_rule(const Instance& instance) {
  const auto n = static_cast<std::size_t>(instance.destinations());
  const auto& costs = instance.costs();
  detail::LineAllocator alloc(instance);
  const auto take = [&](std::size_t k) {
    const auto i = static_cast<Index>(k / n);
    const auto j = static_cast<Index>(k % n);
    if (alloc.row_open(i) && alloc.col_open(j)) alloc.allocate(i, j);
    return !alloc.done();
  };
  const std::size_t first_chunk = 8 * static_cast<std::size_t>(instance.nodes());
  const Cost max_cost = costs.empty() ? 0 : *std::max_element(costs.begin(), costs.end());
  if (max_cost <= static_cast<Cost>(std::numeric_limits<std::uint32_t>::max())) {
    // (cost << 32 | cell) orders exactly like (cost, row, column).
    std::vector<std::uint64_t> keys(costs.size());
    for (std::size_t k = 0; k < keys.size(); ++k)
      keys[k] = static_cast<std::uint64_t>(costs[k]) << 32 | k;
    detail::visit_ascending(keys, first_chunk, std::less<>{},
                            [&](std::uint64_t key) { return take(key & 0xffffffffU); });
  } else {
    std::vector<std::uint32_t> order(costs.size());
    std::iota(order.begin(), order.end(), 0U);
    detail::visit_ascending(
        order, first_chunk,
        [&](std::uint32_t x, std::uint32_t y) {
          return costs[x] != costs[y] ? costs[x] < costs[y] : x < y;
        },
        [&](std::uint32_t k) { return take(k); });
  }
  return alloc.finish();
}

/// Vogel's approximation. Penalty of an open line is the gap between its two
/// cheapest open cells (0 with one left). The largest penalty wins, rows
/// before columns, then lowest index; allocation goes to that line's
/// cheapest open cell (ties: lowest index).
inline BasisTree vogel_approximation(const Instance& instance) {
  const Index m = instance.sources();
  const Index n = instance.destinations();
  detail::LineAllocator alloc(instance);

  // Each line keeps its cells sorted by cost and two cursors to the two
  // cheapest open entries; entries between the cursors are all closed.
  struct Line {
    std::vector<Index> sorted;
    std::size_t first = 0;
    std::size_t second = 1;
  };
  const auto make_lines = [](Index count, Index other, auto cost_of) {
    std::vector<Line> lines(static_cast<std::size_t>(count));
    for (Index l = 0; l < count; ++l) {
      auto& s = lines[static_cast<std::size_t>(l)].sorted;
      s.resize(static_cast<std::size_t>(other));
      std::iota(s.begin(), s.end(), 0);
      std::stable_sort(s.begin(), s.end(),
                       [&](Index x, Index y) { return cost_of(l, x) < cost_of(l, y); });
    }
    return lines;
  };
  auto rows = make_lines(m, n, [&](Index i, Index j) { return instance.cost(i, j); });
  auto cols = make_lines(n, m, [&](Index j, Index i) { return instance.cost(i, j); });

  const auto refresh = [](Line& line, auto is_open) {
    const std::size_t size = line.sorted.size();
    while (line.first < size && !is_open(line.sorted[line.first])) ++line.first;
    if (line.second <= line.first) line.second = line.first + 1;
    while (line.second < size && !is_open(line.sorted[line.second])) ++line.second;
  };

  while (!alloc.done()) {
    Cost best_penalty = -1;
    bool best_is_row = true;
    Index best_line = -1;
    for (Index i = 0; i < m; ++i) {
      if (!alloc.row_open(i)) continue;
      auto& line = rows[static_cast<std::size_t>(i)];
      refresh(line, [&](Index j) { return alloc.col_open(j); });
      if (line.first >= line.sorted.size()) continue;
      const Cost lo = instance.cost(i, line.sorted[line.first]);
      const Cost penalty =
          line.second < line.sorted.size() ? instance.cost(i, line.sorted[line.second]) - lo : 0;
      if (penalty > best_penalty) {
        best_penalty = penalty;
        best_is_row = true;
        best_line = i;
      }
    }
    for (Index j = 0; j < n; ++j) {
      if (!alloc.col_open(j)) continue;
      auto& line = cols[static_cast<std::size_t>(j)];
      refresh(line, [&](Index i) { return alloc.row_open(i); });
      if (line.first >= line.sorted.size()) continue;
      const Cost lo = instance.cost(line.sorted[line.first], j);
      const Cost penalty =
          line.second < line.sorted.size() ? instance.cost(line.sorted[line.second], j) - lo : 0;
      if (penalty > best_penalty) {
        best_penalty = penalty;
        best_is_row = false;
        best_line = j;
      }
    }
    if (best_line < 0) break;
    if (best_is_row) {
      const auto& line = rows[static_cast<std::size_t>(best_line)];
      alloc.allocate(best_line, line.sorted[line.first]);
    } else {
      const auto& line = cols[static_cast<std::size_t>(best_line)];
      alloc.allocate(line.sorted[line.first], best_line);
    }
  }
  return alloc.finish();
}

inline BasisTree initial_basis(const Instance& instance, InitMethod method) {
  switch (method) {
    case InitMethod::nwc: return north_west_corner(instance);
    case InitMethod::vam: return vogel_approximation(instance);
    case InitMethod::mmr: break;
  }
  return matrix_minimum_rule(instance);
}

}  // namespace iio
