#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "iio/instance.hpp"
#include "iio/types.hpp"

namespace iio {

/// Spanning-tree basis over the m+n node bipartite graph, rooted at source 0.
///
/// Each non-root node stores the basic edge to its parent together with that
/// edge's flow, so a basic edge is identified by its child node. Subtree sizes
/// replace depths: they locate the lowest common ancestor just as well and,
/// unlike depths, only change on the pivot cycle.
class BasisTree {
 public:
  static constexpr Index none = -1;

  BasisTree() = default;

  /// Builds a tree from exactly m+n-1 basic entries. Throws
  /// std::invalid_argument if they do not form a spanning tree.
  static BasisTree from_edges(Index m, Index n, std::span<const FlowEntry> edges) {
    const Index nodes = m + n;
    if (m < 1 || n < 1) throw std::invalid_argument("basis: empty graph");
    if (edges.size() != static_cast<std::size_t>(nodes - 1))
      throw std::invalid_argument("basis: expected " + std::to_string(nodes - 1) +
                                  " basic edges, got " + std::to_string(edges.size()));
    BasisTree tree;
    tree.m_ = m;
    tree.n_ = n;
    tree.parent_.assign(static_cast<std::size_t>(nodes), none);
    tree.flow_.assign(static_cast<std::size_t>(nodes), 0);
    tree.size_.assign(static_cast<std::size_t>(nodes), 1);
    tree.first_child_.assign(static_cast<std::size_t>(nodes), none);
    tree.next_sibling_.assign(static_cast<std::size_t>(nodes), none);
    tree.prev_sibling_.assign(static_cast<std::size_t>(nodes), none);
    tree.basic_.assign(static_cast<std::size_t>(m) * static_cast<std::size_t>(n), 0);

    // Adjacency in CSR form.
    std::vector<Index> degree(static_cast<std::size_t>(nodes) + 1, 0);
    for (const auto& e : edges) {
      if (e.source < 0 || e.source >= m || e.destination < 0 || e.destination >= n)
        throw std::invalid_argument("basis: edge outside the instance");
      if (e.flow < 0) throw std::invalid_argument("basis: negative flow");
      auto& cell = tree.basic_[tree.cell(e.source, e.destination)];
      if (cell) throw std::invalid_argument("basis: duplicate edge");
      cell = 1;
      ++degree[static_cast<std::size_t>(e.source) + 1];
      ++degree[static_cast<std::size_t>(m + e.destination) + 1];
    }
    for (std::size_t v = 1; v < degree.size(); ++v) degree[v] += degree[v - 1];
    std::vector<std::pair<Index, Flow>> adjacency(2 * edges.size());
    {
      std::vector<Index> fill(degree.begin(), degree.end() - 1);
      for (const auto& e : edges) {
        const Index s = e.source;
        const Index d = m + e.destination;
        adjacency[static_cast<std::size_t>(fill[static_cast<std::size_t>(s)]++)] = {d, e.flow};
        adjacency[static_cast<std::size_t>(fill[static_cast<std::size_t>(d)]++)] = {s, e.flow};
      }
    }

    std::vector<Index> order;
    order.reserve(static_cast<std::size_t>(nodes));
    order.push_back(0);
    tree.parent_[0] = 0;
    for (std::size_t head = 0; head < order.size(); ++head) {
      const Index v = order[head];
      for (Index k = degree[static_cast<std::size_t>(v)]; k < degree[static_cast<std::size_t>(v) + 1];
           ++k) {
        const auto [w, x] = adjacency[static_cast<std::size_t>(k)];
        if (w == tree.parent_[static_cast<std::size_t>(v)] && v != 0) continue;
        if (tree.parent_[static_cast<std::size_t>(w)] != none)
          throw std::invalid_argument("basis: edges contain a cycle");
        tree.parent_[static_cast<std::size_t>(w)] = v;
        tree.flow_[static_cast<std::size_t>(w)] = x;
        order.push_back(w);
      }
    }
    if (order.size() != static_cast<std::size_t>(nodes))
      throw std::invalid_argument("basis: edges do not span all nodes");
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const Index v = *it;
      if (v == 0) continue;
      tree.size_[static_cast<std::size_t>(tree.parent_[static_cast<std::size_t>(v)])] +=
          tree.size_[static_cast<std::size_t>(v)];
    }
    // Link children in reverse BFS order so each child list follows BFS order.
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      if (*it != 0) tree.link(*it, tree.parent_[static_cast<std::size_t>(*it)]);
    }
    return tree;
  }

  Index sources() const { return m_; }
  Index destinations() const { return n_; }
  Index nodes() const { return m_ + n_; }
  Index root() const { return 0; }
  std::size_t edge_count() const { return static_cast<std::size_t>(nodes()) - 1; }

  Index parent(Index v) const { return parent_[static_cast<std::size_t>(v)]; }
  /// Flow on the basic edge from v to its parent. Meaningless at the root.
  Flow flow(Index v) const { return flow_[static_cast<std::size_t>(v)]; }
  Flow& flow(Index v) { return flow_[static_cast<std::size_t>(v)]; }
  Index subtree_size(Index v) const { return size_[static_cast<std::size_t>(v)]; }
  Index first_child(Index v) const { return first_child_[static_cast<std::size_t>(v)]; }
  Index next_sibling(Index v) const { return next_sibling_[static_cast<std::size_t>(v)]; }

  bool is_source(Index v) const { return v < m_; }
  NodeId node(Index v) const { return NodeId::from_slot(v, m_); }
  Index source_slot(Index i) const { return i; }
  Index destination_slot(Index j) const { return m_ + j; }

  /// (source, destination) of the basic edge hanging above child node v.
  std::pair<Index, Index> edge_cell(Index v) const {
    const Index p = parent(v);
    return is_source(v) ? std::pair{v, p - m_} : std::pair{p, v - m_};
  }
  std::size_t edge_index(Index v) const {
    const auto [i, j] = edge_cell(v);
    return cell(i, j);
  }

  bool is_basic(Index i, Index j) const { return basic_[cell(i, j)] != 0; }

  /// Basic entries sorted by (source, destination), zero flows included.
  std::vector<FlowEntry> edges() const {
    std::vector<FlowEntry> out;
    out.reserve(edge_count());
    for (Index v = 1; v < nodes(); ++v) {
      const auto [i, j] = edge_cell(v);
      out.push_back({i, j, flow(v)});
    }
    std::sort(out.begin(), out.end(), [](const FlowEntry& a, const FlowEntry& b) {
      return std::pair{a.source, a.destination} < std::pair{b.source, b.destination};
    });
    return out;
  }

  /// Replaces the basic edge above `leaving` by the edge between `attach`
  /// (inside the detached subtree) and `anchor` (outside it). `segment` lists
  /// the nodes from `attach` up to and including `leaving`; `anchor_chain`
  /// lists `anchor` and its ancestors strictly below the join node of the
  /// cycle, and `leaving_chain` the ancestors of `leaving` strictly below the
  /// join node. All work is proportional to the cycle length.
  void rehang(std::span<const Index> segment, Index anchor, Flow entering_flow,
              std::span<const Index> leaving_chain, std::span<const Index> anchor_chain) {
    const Index leaving = segment.back();
    const Index detached = subtree_size(leaving);
    const auto [li, lj] = edge_cell(leaving);
    basic_[cell(li, lj)] = 0;

    for (Index v : leaving_chain) size_[static_cast<std::size_t>(v)] -= detached;
    for (Index v : anchor_chain) size_[static_cast<std::size_t>(v)] += detached;

    scratch_size_.clear();
    scratch_flow_.clear();
    for (Index v : segment) {
      scratch_size_.push_back(subtree_size(v));
      scratch_flow_.push_back(flow(v));
      unlink(v);
    }
    const Index first = segment.front();
    parent_[static_cast<std::size_t>(first)] = anchor;
    flow_[static_cast<std::size_t>(first)] = entering_flow;
    size_[static_cast<std::size_t>(first)] = detached;
    link(first, anchor);
    for (std::size_t t = 1; t < segment.size(); ++t) {
      const Index v = segment[t];
      parent_[static_cast<std::size_t>(v)] = segment[t - 1];
      flow_[static_cast<std::size_t>(v)] = scratch_flow_[t - 1];
      size_[static_cast<std::size_t>(v)] = detached - scratch_size_[t - 1];
      link(v, segment[t - 1]);
    }
    const auto [ei, ej] = edge_cell(first);
    basic_[cell(ei, ej)] = 1;
  }

  std::size_t cell(Index i, Index j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j);
  }

 private:
  void unlink(Index v) {
    const auto sv = static_cast<std::size_t>(v);
    const Index prev = prev_sibling_[sv];
    const Index next = next_sibling_[sv];
    if (prev != none)
      next_sibling_[static_cast<std::size_t>(prev)] = next;
    else
      first_child_[static_cast<std::size_t>(parent_[sv])] = next;
    if (next != none) prev_sibling_[static_cast<std::size_t>(next)] = prev;
    prev_sibling_[sv] = next_sibling_[sv] = none;
  }

  void link(Index v, Index p) {
    const auto sv = static_cast<std::size_t>(v);
    const Index head = first_child_[static_cast<std::size_t>(p)];
    next_sibling_[sv] = head;
    prev_sibling_[sv] = none;
    if (head != none) prev_sibling_[static_cast<std::size_t>(head)] = v;
    first_child_[static_cast<std::size_t>(p)] = v;
  }

  Index m_ = 0;
  Index n_ = 0;
  std::vector<Index> parent_;
  std::vector<Flow> flow_;
  std::vector<Index> size_;
  std::vector<Index> first_child_;
  std::vector<Index> next_sibling_;
  std::vector<Index> prev_sibling_;
  std::vector<std::uint8_t> basic_;
  std::vector<Index> scratch_size_;
  std::vector<Flow> scratch_flow_;
};

/// Calls visit(v) for every node in preorder (parents before children).
template <typename Visit>
void for_each_preorder(const BasisTree& tree, Index start, Visit&& visit) {
  Index v = start;
  while (true) {
    visit(v);
    if (tree.first_child(v) != BasisTree::none) {
      v = tree.first_child(v);
      continue;
    }
    while (v != start && tree.next_sibling(v) == BasisTree::none) v = tree.parent(v);
    if (v == start) return;
    v = tree.next_sibling(v);
  }
}

struct Multipliers {
  std::vector<Cost> u;
  std::vector<Cost> v;
};

/// Duals with u[0] = 0 and c_ij = u_i + v_j on every basic edge, in one
/// root-to-leaves pass.
inline void compute_multipliers(const BasisTree& tree, const Instance& instance, Multipliers& out) {
  const Index m = tree.sources();
  out.u.resize(static_cast<std::size_t>(m));
  out.v.resize(static_cast<std::size_t>(tree.destinations()));
  out.u[0] = 0;
  for_each_preorder(tree, tree.root(), [&](Index node) {
    if (node == 0) return;
    const Index p = tree.parent(node);
    if (tree.is_source(node)) {
      const Index j = p - m;
      out.u[static_cast<std::size_t>(node)] =
          instance.cost(node, j) - out.v[static_cast<std::size_t>(j)];
    } else {
      const Index j = node - m;
      out.v[static_cast<std::size_t>(j)] = instance.cost(p, j) - out.u[static_cast<std::size_t>(p)];
    }
  });
}

inline Multipliers compute_multipliers(const BasisTree& tree, const Instance& instance) {
  Multipliers out;
  compute_multipliers(tree, instance, out);
  return out;
}

inline Cost reduced_cost(Index i, Index j, const Multipliers& y, const Instance& instance) {
  return instance.cost(i, j) - y.u[static_cast<std::size_t>(i)] - y.v[static_cast<std::size_t>(j)];
}

/// The tree path from source i to destination j. Edges are recorded by their
/// child node: `from_source` climbs from i and `from_destination` climbs from j,
/// both stopping below the join node. Position 1 is the edge at i; odd
/// positions lose flow when the entering variable (i,j) gains it.
struct CyclePath {
  Index source = 0;       // tree slot of i
  Index destination = 0;  // tree slot of j
  Index join = 0;         // lowest common ancestor
  std::vector<Index> from_source;
  std::vector<Index> from_destination;

  std::size_t edge_count() const { return from_source.size() + from_destination.size(); }
  std::size_t node_count() const { return edge_count() + 1; }

  /// Child node of the edge at 1-based position p.
  Index edge_at(std::size_t p) const {
    return p <= from_source.size() ? from_source[p - 1] : from_destination[edge_count() - p];
  }

  /// Node sequence i, ..., join, ..., j.
  std::vector<Index> node_slots() const {
    std::vector<Index> out(from_source.begin(), from_source.end());
    out.push_back(join);
    for (auto it = from_destination.rbegin(); it != from_destination.rend(); ++it) out.push_back(*it);
    return out;
  }

  std::vector<NodeId> nodes(const BasisTree& tree) const {
    std::vector<NodeId> out;
    for (Index v : node_slots()) out.push_back(tree.node(v));
    return out;
  }
};

inline void find_path(const BasisTree& tree, Index i, Index j, CyclePath& path) {
  path.source = tree.source_slot(i);
  path.destination = tree.destination_slot(j);
  path.from_source.clear();
  path.from_destination.clear();
  Index a = path.source;
  Index b = path.destination;
  // A node whose subtree is strictly smaller cannot be an ancestor of the
  // other one, so it lies strictly below the join node.
  while (a != b) {
    const Index sa = tree.subtree_size(a);
    const Index sb = tree.subtree_size(b);
    if (sa <= sb) {
      path.from_source.push_back(a);
      a = tree.parent(a);
    }
    if (sb <= sa) {
      path.from_destination.push_back(b);
      b = tree.parent(b);
    }
  }
  path.join = a;
}

inline CyclePath find_path(const BasisTree& tree, Index i, Index j) {
  CyclePath path;
  find_path(tree, i, j, path);
  return path;
}

/// Tie-break among edges attaining the bottleneck flow.
enum class LeavingRule : std::uint8_t {
  nearest_source,  // first along the path from i
  smallest_index,  // smallest row-major cell index (Bland)
};

struct Bottleneck {
  Flow amount = 0;
  std::size_t position = 0;  // 1-based path position; 0 when no candidate edge exists
};

namespace detail {

/// Minimum flow over path positions of the given parity (1 = odd, 0 = even).
inline Bottleneck bottleneck(const CyclePath& path, const BasisTree& tree, std::size_t parity,
                             LeavingRule rule) {
  Bottleneck best;
  std::size_t best_index = 0;
  const std::size_t total = path.edge_count();
  const auto consider = [&](std::size_t p, Index child) {
    const Flow x = tree.flow(child);
    if (best.position == 0 || x < best.amount) {
      best = {x, p};
      if (rule == LeavingRule::smallest_index) best_index = tree.edge_index(child);
    } else if (x == best.amount && rule == LeavingRule::smallest_index) {
      const std::size_t idx = tree.edge_index(child);
      if (idx < best_index) {
        best = {x, p};
        best_index = idx;
      }
    }
  };
  const std::size_t first = parity == 1 ? 1 : 2;
  for (std::size_t p = first; p <= path.from_source.size(); p += 2) consider(p, path.from_source[p - 1]);
  // Destination side: position p holds from_destination[total - p].
  std::size_t p = path.from_source.size() + 1;
  if ((p & 1U) != parity) ++p;
  for (; p <= total; p += 2) consider(p, path.from_destination[total - p]);
  return best;
}

}  // namespace detail

/// Largest amount the entering variable can rise by, and the odd-position
/// edge that blocks it.
inline Bottleneck max_increase(const CyclePath& path, const BasisTree& tree,
                               LeavingRule rule = LeavingRule::nearest_source) {
  return detail::bottleneck(path, tree, 1, rule);
}

/// Largest amount the entering variable can fall by before an even-position
/// edge empties; position 0 if the path has no even edge.
inline Bottleneck max_decrease(const CyclePath& path, const BasisTree& tree,
                               LeavingRule rule = LeavingRule::nearest_source) {
  return detail::bottleneck(path, tree, 0, rule);
}

/// Sum of costs around the cycle closed by (i,j): c_ij - c(edge 1) + c(edge 2) - ...
inline Objective cycle_cost(const CyclePath& path, const BasisTree& tree, const Instance& instance) {
  Objective total = instance.cost(path.source, path.destination - tree.sources());
  const std::size_t edges = path.edge_count();
  for (std::size_t p = 1; p <= edges; ++p) {
    const auto [i, j] = tree.edge_cell(path.edge_at(p));
    total += (p & 1U) ? -instance.cost(i, j) : instance.cost(i, j);
  }
  return total;
}

/// Odd positions lose delta, even positions gain it. Negative delta runs the
/// cycle the other way. Throws std::logic_error if a flow would go negative.
inline void apply_flow_change(BasisTree& tree, const CyclePath& path, Flow delta) {
  if (delta == 0) return;
  const auto step = [&](std::size_t p, Index child) {
    Flow& x = tree.flow(child);
    x += (p & 1U) ? -delta : delta;
    if (x < 0) throw std::logic_error("apply_flow_change: flow change violates feasibility");
  };
  const std::size_t total = path.edge_count();
  for (std::size_t p = 1; p <= path.from_source.size(); ++p) step(p, path.from_source[p - 1]);
  for (std::size_t p = path.from_source.size() + 1; p <= total; ++p)
    step(p, path.from_destination[total - p]);
}

/// Makes (i,j) basic with the given flow and drops the edge at
/// `leaving_position`, which must already carry zero flow. Returns the number
/// of nodes whose parent link was rewritten.
inline std::size_t pivot_exchange(BasisTree& tree, const CyclePath& path, Flow entering_flow,
                                  std::size_t leaving_position) {
  if (leaving_position == 0 || leaving_position > path.edge_count())
    throw std::logic_error("pivot_exchange: leaving edge not on the cycle");
  const Index leaving = path.edge_at(leaving_position);
  if (tree.flow(leaving) != 0)
    throw std::logic_error("pivot_exchange: leaving edge still carries flow");

  const bool source_side = leaving_position <= path.from_source.size();
  const auto& near = source_side ? path.from_source : path.from_destination;
  const auto& far = source_side ? path.from_destination : path.from_source;
  const std::size_t k = source_side ? leaving_position - 1 : path.edge_count() - leaving_position;
  const Index anchor = source_side ? path.destination : path.source;

  const std::span<const Index> segment(near.data(), k + 1);
  const std::span<const Index> leaving_chain(near.data() + k + 1, near.size() - k - 1);
  tree.rehang(segment, anchor, entering_flow, leaving_chain, std::span<const Index>(far));
  return segment.size();
}

/// Structural check: returns a description of the first broken invariant.
inline std::optional<std::string> check_tree(const BasisTree& tree) {
  const Index nodes = tree.nodes();
  if (tree.parent(0) != 0) return "root is not its own parent";
  std::size_t basic_count = 0;
  for (Index i = 0; i < tree.sources(); ++i)
    for (Index j = 0; j < tree.destinations(); ++j) basic_count += tree.is_basic(i, j) ? 1 : 0;
  if (basic_count != tree.edge_count()) return "basic edge count is not m+n-1";

  std::vector<Index> size(static_cast<std::size_t>(nodes), 0);
  for (Index v = 1; v < nodes; ++v) {
    const Index p = tree.parent(v);
    if (p < 0 || p >= nodes) return "parent out of range";
    if (tree.is_source(v) == tree.is_source(p)) return "edge is not bipartite";
    if (tree.flow(v) < 0) return "negative flow";
    const auto [i, j] = tree.edge_cell(v);
    if (!tree.is_basic(i, j)) return "tree edge missing from the basic set";
    // Every node must reach the root within `nodes` steps.
    Index w = v;
    Index steps = 0;
    while (w != 0 && steps <= nodes) {
      ++size[static_cast<std::size_t>(w)];
      w = tree.parent(w);
      ++steps;
    }
    if (w != 0) return "parent links contain a cycle";
  }
  size[0] = nodes;
  std::vector<Index> children(static_cast<std::size_t>(nodes), 0);
  for (Index v = 0; v < nodes; ++v) {
    for (Index c = tree.first_child(v); c != BasisTree::none; c = tree.next_sibling(c)) {
      if (tree.parent(c) != v) return "child list disagrees with parent links";
      ++children[static_cast<std::size_t>(v)];
    }
  }
  std::vector<Index> expected(static_cast<std::size_t>(nodes), 0);
  for (Index v = 1; v < nodes; ++v) ++expected[static_cast<std::size_t>(tree.parent(v))];
  if (children != expected) return "child lists incomplete";
  // size[v] counted how many nodes have v on their root path (v included).
  for (Index v = 1; v < nodes; ++v) {
    if (size[static_cast<std::size_t>(v)] != tree.subtree_size(v)) return "stale subtree size";
  }
  if (tree.subtree_size(0) != nodes) return "stale root subtree size";
  return std::nullopt;
}

/// Flow conservation of the basic edges against the given masses.
inline std::optional<std::string> check_conservation(const BasisTree& tree,
                                                     std::span<const Flow> supplies,
                                                     std::span<const Flow> demands) {
  const Index m = tree.sources();
  std::vector<Flow> out(static_cast<std::size_t>(m), 0);
  std::vector<Flow> in(static_cast<std::size_t>(tree.destinations()), 0);
  for (Index v = 1; v < tree.nodes(); ++v) {
    const auto [i, j] = tree.edge_cell(v);
    out[static_cast<std::size_t>(i)] += tree.flow(v);
    in[static_cast<std::size_t>(j)] += tree.flow(v);
  }
  for (Index i = 0; i < m; ++i)
    if (out[static_cast<std::size_t>(i)] != supplies[static_cast<std::size_t>(i)])
      return "row " + std::to_string(i + 1) + " does not sum to its supply";
  for (Index j = 0; j < tree.destinations(); ++j)
    if (in[static_cast<std::size_t>(j)] != demands[static_cast<std::size_t>(j)])
      return "column " + std::to_string(j + 1) + " does not sum to its demand";
  return std::nullopt;
}

/// Basic entries (zero flows included) with their exact objective.
inline FlowSolution to_solution(const BasisTree& tree, const Instance& instance) {
  FlowSolution solution;
  solution.entries = tree.edges();
  solution.objective = objective(instance, solution);
  return solution;
}

}  // namespace iio
