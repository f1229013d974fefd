#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "iio/basis.hpp"
#include "iio/types.hpp"

namespace iio {

enum class Admissibility : std::uint8_t { admissible, blocked, indeterminate };

/// Partition of the basis tree into maximal subtrees joined only by
/// degenerate (zero-flow) basic edges. Each subtree is rooted at its node
/// nearest the tree root; the subtree holding source 0 has no parent.
///
/// With the relations between the subtrees of source i and destination j,
/// one can tell in O(1) whether a push along the i-j tree path would move a
/// strictly positive amount:
///  - same subtree: no degenerate edge on the path, admissible;
///  - parent/child: one degenerate edge, whose parity follows from the side
///    of the child subtree's root;
///  - siblings: two degenerate edges, both even only when the source-side
///    root is a destination and the destination-side root a source;
///  - anything else is left undecided.
class ColorForest {
 public:
  using Color = Index;
  static constexpr Color no_color = -1;

  struct Subtree {
    Index root = 0;
    Side root_side = Side::source;
    Color parent = no_color;
  };

  ColorForest() = default;
  explicit ColorForest(const BasisTree& tree) { build(tree); }

  /// Colors the whole tree from its current flows in O(m+n).
  void build(const BasisTree& tree) {
    const auto nodes = static_cast<std::size_t>(tree.nodes());
    m_ = tree.sources();
    color_.assign(nodes, no_color);
    degenerate_.assign(nodes, 0);
    subtrees_.clear();
    free_.clear();
    live_ = 0;
    degenerate_count_ = 0;
    for_each_preorder(tree, tree.root(), [&](Index v) {
      if (v == tree.root()) {
        color_[static_cast<std::size_t>(v)] = open_color(v, no_color);
        return;
      }
      const Color up = color_[static_cast<std::size_t>(tree.parent(v))];
      if (tree.flow(v) == 0) {
        degenerate_[static_cast<std::size_t>(v)] = 1;
        ++degenerate_count_;
        color_[static_cast<std::size_t>(v)] = open_color(v, up);
      } else {
        color_[static_cast<std::size_t>(v)] = up;
      }
    });
  }

  Color color(Index slot) const { return color_[static_cast<std::size_t>(slot)]; }
  const Subtree& subtree(Color c) const { return subtrees_[static_cast<std::size_t>(c)]; }
  std::size_t color_count() const { return live_; }
  std::size_t degenerate_edge_count() const { return degenerate_count_; }
  bool single_color() const { return live_ == 1; }
  /// Whether the basic edge above `child` is registered as degenerate.
  bool is_degenerate(Index child) const { return degenerate_[static_cast<std::size_t>(child)] != 0; }

  /// The edge above `child` just reached zero flow: its side away from the
  /// root becomes a new subtree. Returns the number of recolored nodes.
  std::size_t on_edge_became_degenerate(const BasisTree& tree, Index child) {
    if (is_degenerate(child)) throw std::logic_error("coloring: edge already degenerate");
    degenerate_[static_cast<std::size_t>(child)] = 1;
    ++degenerate_count_;
    const Color fresh = open_color(child, color(child));
    return repaint(tree, child, fresh);
  }

  /// The degenerate edge above `child` carries flow again: the child subtree
  /// joins its parent. Returns the number of recolored nodes.
  std::size_t on_edge_became_positive(const BasisTree& tree, Index child) {
    if (!is_degenerate(child)) throw std::logic_error("coloring: edge not registered as degenerate");
    degenerate_[static_cast<std::size_t>(child)] = 0;
    --degenerate_count_;
    const Color old = color(child);
    const std::size_t painted = repaint(tree, child, color(tree.parent(child)));
    free_.push_back(old);
    --live_;
    return painted;
  }

  Admissibility admissible(Index i, Index j) const {
    if (live_ == 1) return Admissibility::admissible;
    const Color ci = color(i);
    const Color cj = color(m_ + j);
    if (ci == cj) return Admissibility::admissible;
    const Subtree& ti = subtree(ci);
    const Subtree& tj = subtree(cj);
    // The path enters the destination's child subtree at its root: the
    // degenerate edge sits in an even position iff that root is a source.
    if (tj.parent == ci)
      return tj.root_side == Side::source ? Admissibility::admissible : Admissibility::blocked;
    // The path leaves the source's child subtree through its root.
    if (ti.parent == cj)
      return ti.root_side == Side::destination ? Admissibility::admissible : Admissibility::blocked;
    if (ti.parent != no_color && ti.parent == tj.parent)
      return ti.root_side == Side::destination && tj.root_side == Side::source
                 ? Admissibility::admissible
                 : Admissibility::blocked;
    return Admissibility::indeterminate;
  }

 private:
  Color open_color(Index root, Color parent) {
    Color c;
    if (!free_.empty()) {
      c = free_.back();
      free_.pop_back();
    } else {
      c = static_cast<Color>(subtrees_.size());
      subtrees_.emplace_back();
    }
    subtrees_[static_cast<std::size_t>(c)] = {root, root < m_ ? Side::source : Side::destination,
                                             parent};
    ++live_;
    return c;
  }

  /// Paints every node reachable from `start` downwards without crossing a
  /// registered degenerate edge; subtrees hanging below get `paint` as parent.
  std::size_t repaint(const BasisTree& tree, Index start, Color paint) {
    std::size_t painted = 0;
    stack_.clear();
    stack_.push_back(start);
    while (!stack_.empty()) {
      const Index v = stack_.back();
      stack_.pop_back();
      color_[static_cast<std::size_t>(v)] = paint;
      ++painted;
      for (Index c = tree.first_child(v); c != BasisTree::none; c = tree.next_sibling(c)) {
        if (is_degenerate(c))
          subtrees_[static_cast<std::size_t>(color(c))].parent = paint;
        else
          stack_.push_back(c);
      }
    }
    return painted;
  }

  Index m_ = 0;
  std::vector<Color> color_;
  std::vector<std::uint8_t> degenerate_;
  std::vector<Subtree> subtrees_;
  std::vector<Color> free_;
  std::vector<Index> stack_;
  std::size_t live_ = 0;
  std::size_t degenerate_count_ = 0;
};

}  // namespace iio
