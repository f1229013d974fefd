#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "iio/basis.hpp"
#include "iio/init.hpp"
#include "oracles.hpp"

namespace {

using iio::BasisTree;
using iio::FlowEntry;
using iio::Index;

BasisTree start_tree() { return BasisTree::from_edges(3, 3, fixture::small_start()); }

std::vector<std::pair<Index, Index>> path_cells(const BasisTree& tree, const iio::CyclePath& path) {
  std::vector<std::pair<Index, Index>> out;
  for (std::size_t p = 1; p <= path.edge_count(); ++p) out.push_back(tree.edge_cell(path.edge_at(p)));
  return out;
}

std::string node_string(const BasisTree& tree, const iio::CyclePath& path) {
  std::ostringstream out;
  for (const auto& node : path.nodes(tree)) out << node << ' ';
  return out.str();
}

TEST(BasisTree, RejectsNonTrees) {
  std::vector<FlowEntry> edges = fixture::small_start();
  edges.pop_back();
  EXPECT_THROW(BasisTree::from_edges(3, 3, edges), std::invalid_argument);
  edges.push_back({0, 2, 0});  // cycle s1 d2 s2 d3
  EXPECT_THROW(BasisTree::from_edges(3, 3, edges), std::invalid_argument);
  std::vector<FlowEntry> duplicate = fixture::small_start();
  duplicate.back() = duplicate.front();
  EXPECT_THROW(BasisTree::from_edges(3, 3, duplicate), std::invalid_argument);
  std::vector<FlowEntry> negative = fixture::small_start();
  negative[0].flow = -1;
  EXPECT_THROW(BasisTree::from_edges(3, 3, negative), std::invalid_argument);
}

TEST(BasisTree, RootIsFirstSourceAndEdgesRoundTrip) {
  const BasisTree tree = start_tree();
  EXPECT_EQ(tree.root(), 0);
  EXPECT_EQ(tree.subtree_size(0), 6);
  EXPECT_EQ(tree.edges(), fixture::small_start());
  EXPECT_FALSE(iio::check_tree(tree));
  EXPECT_TRUE(tree.is_basic(1, 2));
  EXPECT_FALSE(tree.is_basic(1, 0));
}

TEST(Multipliers, WorkedExample) {
  const auto y = iio::compute_multipliers(start_tree(), fixture::small());
  EXPECT_EQ(y.u, (std::vector<iio::Cost>{0, 0, 0}));
  EXPECT_EQ(y.v, (std::vector<iio::Cost>{5, 1, 5}));
}

TEST(Multipliers, SingleEdge) {
  const iio::Instance instance(1, 1, {3}, {3}, {7});
  const std::vector<FlowEntry> edge{{0, 0, 3}};
  const auto y = iio::compute_multipliers(BasisTree::from_edges(1, 1, edge), instance);
  EXPECT_EQ(y.u, (std::vector<iio::Cost>{0}));
  EXPECT_EQ(y.v, (std::vector<iio::Cost>{7}));
}

TEST(ReducedCost, WorkedExample) {
  const auto instance = fixture::small();
  const BasisTree tree = start_tree();
  const auto y = iio::compute_multipliers(tree, instance);
  EXPECT_EQ(iio::reduced_cost(1, 0, y, instance), -4);
  EXPECT_EQ(iio::reduced_cost(2, 2, y, instance), -3);
  EXPECT_EQ(iio::reduced_cost(0, 2, y, instance), 2);
  EXPECT_EQ(iio::reduced_cost(2, 0, y, instance), 1);
  for (const auto& e : tree.edges()) EXPECT_EQ(iio::reduced_cost(e.source, e.destination, y, instance), 0);
}

TEST(Multipliers, VanishOnBasicEdgesOfRandomBases) {
  std::mt19937_64 rng(5);
  for (int round = 0; round < 100; ++round) {
    const auto instance = oracle::random_instance(20, 20, rng);
    const BasisTree tree = iio::north_west_corner(instance);
    const auto y = iio::compute_multipliers(tree, instance);
    EXPECT_EQ(y.u[0], 0);
    for (const auto& e : tree.edges())
      ASSERT_EQ(iio::reduced_cost(e.source, e.destination, y, instance), 0);
  }
}

TEST(FindPath, WorkedExample) {
  const BasisTree tree = start_tree();
  const auto p21 = iio::find_path(tree, 1, 0);
  EXPECT_EQ(node_string(tree, p21), "s2 d2 s1 d1 ");
  EXPECT_EQ(path_cells(tree, p21), (std::vector<std::pair<Index, Index>>{{1, 1}, {0, 1}, {0, 0}}));
  const auto p33 = iio::find_path(tree, 2, 2);
  EXPECT_EQ(path_cells(tree, p33), (std::vector<std::pair<Index, Index>>{{2, 1}, {1, 1}, {1, 2}}));
  const auto p11 = iio::find_path(tree, 0, 0);
  EXPECT_EQ(p11.edge_count(), 1U);
  EXPECT_EQ(tree.edge_cell(p11.edge_at(1)), (std::pair<Index, Index>{0, 0}));
}

TEST(FindPath, MatchesBreadthFirstSearch) {
  std::mt19937_64 rng(17);
  for (int round = 0; round < 200; ++round) {
    const int m = std::uniform_int_distribution<int>(1, 12)(rng);
    const int n = std::uniform_int_distribution<int>(1, 12)(rng);
    const auto basis = oracle::random_basis(m, n, 0.3, rng);
    const BasisTree tree = BasisTree::from_edges(m, n, basis.edges);
    for (int q = 0; q < 20; ++q) {
      const int i = std::uniform_int_distribution<int>(0, m - 1)(rng);
      const int j = std::uniform_int_distribution<int>(0, n - 1)(rng);
      const auto path = iio::find_path(tree, i, j);
      const auto slots = path.node_slots();
      ASSERT_EQ(std::vector<int>(slots.begin(), slots.end()), oracle::bfs_path(m, n, basis.edges, i, j));
      ASSERT_EQ(path.edge_count() % 2, 1U);
      ASSERT_EQ(iio::max_increase(path, tree).amount, oracle::path_bottleneck(m, n, basis.edges, i, j));
    }
  }
}

TEST(MaxIncrease, WorkedExample) {
  BasisTree tree = start_tree();
  const auto p21 = iio::find_path(tree, 1, 0);
  const auto k21 = iio::max_increase(p21, tree);
  EXPECT_EQ(k21.amount, 10);
  EXPECT_EQ(tree.edge_cell(p21.edge_at(k21.position)), (std::pair<Index, Index>{1, 1}));
  iio::apply_flow_change(tree, p21, 10);
  const auto p33 = iio::find_path(tree, 2, 2);
  const auto k33 = iio::max_increase(p33, tree);
  EXPECT_EQ(k33.amount, 20);
  EXPECT_EQ(tree.edge_cell(p33.edge_at(k33.position)), (std::pair<Index, Index>{1, 2}));
}

TEST(MaxIncrease, ZeroOnDegenerateOddEdge) {
  std::vector<FlowEntry> edges = fixture::small_start();
  edges[2].flow = 0;  // x22, odd on the path of (2,1)
  const BasisTree tree = BasisTree::from_edges(3, 3, edges);
  EXPECT_EQ(iio::max_increase(iio::find_path(tree, 1, 0), tree).amount, 0);
}

TEST(ApplyFlowChange, WorkedExample) {
  BasisTree tree = start_tree();
  const auto path = iio::find_path(tree, 1, 0);
  iio::apply_flow_change(tree, path, 0);
  EXPECT_EQ(tree.edges(), fixture::small_start());
  iio::apply_flow_change(tree, path, 10);
  EXPECT_EQ(tree.edges(), (std::vector<FlowEntry>{{0, 0, 10}, {0, 1, 20}, {1, 1, 0}, {1, 2, 20}, {2, 1, 30}}));
  EXPECT_THROW(iio::apply_flow_change(tree, path, 1), std::logic_error);
}

TEST(ApplyFlowChange, ForwardThenBackRestores) {
  std::mt19937_64 rng(23);
  for (int round = 0; round < 200; ++round) {
    const auto basis = oracle::random_basis(6, 7, 0.2, rng);
    BasisTree tree = BasisTree::from_edges(6, 7, basis.edges);
    const int i = std::uniform_int_distribution<int>(0, 5)(rng);
    const int j = std::uniform_int_distribution<int>(0, 6)(rng);
    const auto path = iio::find_path(tree, i, j);
    const auto k = iio::max_increase(path, tree).amount;
    iio::apply_flow_change(tree, path, k);
    iio::apply_flow_change(tree, path, -k);
    ASSERT_EQ(tree.edges(), BasisTree::from_edges(6, 7, basis.edges).edges());
  }
}

TEST(PivotExchange, WorkedExamplePhaseTwo) {
  const auto instance = fixture::small();
  // State after the two raises: x21 = 10 and x33 = 20 sit outside the tree.
  BasisTree tree = BasisTree::from_edges(
      3, 3, std::vector<FlowEntry>{{0, 0, 10}, {0, 1, 20}, {1, 1, 20}, {1, 2, 0}, {2, 1, 10}});
  auto path = iio::find_path(tree, 1, 0);
  EXPECT_LT(iio::cycle_cost(path, tree, instance), 0);
  auto up = iio::max_increase(path, tree);
  EXPECT_EQ(up.amount, 10);
  iio::apply_flow_change(tree, path, up.amount);
  iio::pivot_exchange(tree, path, 20, up.position);
  EXPECT_FALSE(iio::check_tree(tree));
  std::vector<std::pair<Index, Index>> cells;
  for (const auto& e : tree.edges()) cells.push_back({e.source, e.destination});
  EXPECT_EQ(cells, (std::vector<std::pair<Index, Index>>{{0, 1}, {1, 0}, {1, 1}, {1, 2}, {2, 1}}));

  path = iio::find_path(tree, 2, 2);
  EXPECT_LE(iio::cycle_cost(path, tree, instance), 0);
  up = iio::max_increase(path, tree);
  EXPECT_EQ(up.amount, 0);
  EXPECT_EQ(tree.edge_cell(path.edge_at(up.position)), (std::pair<Index, Index>{1, 2}));
  iio::pivot_exchange(tree, path, 20, up.position);
  EXPECT_FALSE(iio::check_tree(tree));
  EXPECT_EQ(tree.edges(), fixture::small_optimum());
  EXPECT_EQ(iio::to_solution(tree, instance).objective, 110);
}

TEST(PivotExchange, RejectsLeavingEdgeWithFlow) {
  BasisTree tree = start_tree();
  const auto path = iio::find_path(tree, 1, 0);
  EXPECT_THROW(iio::pivot_exchange(tree, path, 0, 1), std::logic_error);
  EXPECT_THROW(iio::pivot_exchange(tree, path, 0, 0), std::logic_error);
}

// Random pivots keep the structure valid and equal to a fresh build of the
// same edge set; flows stay conserved.
TEST(PivotExchange, RandomSequencesKeepTreeInvariants) {
  std::mt19937_64 rng(31);
  for (int round = 0; round < 60; ++round) {
    const int m = std::uniform_int_distribution<int>(1, 15)(rng);
    const int n = std::uniform_int_distribution<int>(1, 15)(rng);
    const auto basis = oracle::random_basis(m, n, 0.25, rng);
    BasisTree tree = BasisTree::from_edges(m, n, basis.edges);
    for (int step = 0; step < 100; ++step) {
      const int i = std::uniform_int_distribution<int>(0, m - 1)(rng);
      const int j = std::uniform_int_distribution<int>(0, n - 1)(rng);
      if (tree.is_basic(i, j)) continue;
      const auto path = iio::find_path(tree, i, j);
      const auto rule = step % 2 ? iio::LeavingRule::smallest_index : iio::LeavingRule::nearest_source;
      const auto up = iio::max_increase(path, tree, rule);
      iio::apply_flow_change(tree, path, up.amount);
      iio::pivot_exchange(tree, path, up.amount, up.position);
      ASSERT_FALSE(iio::check_tree(tree)) << *iio::check_tree(tree);
      const auto edges = tree.edges();
      ASSERT_TRUE(oracle::is_spanning_tree(m, n, edges));
      ASSERT_TRUE(oracle::is_feasible(basis.instance, edges));
      ASSERT_TRUE(tree.is_basic(i, j));
      ASSERT_EQ(BasisTree::from_edges(m, n, edges).edges(), edges);
    }
  }
}

TEST(Conservation, DetectsImbalance) {
  const auto instance = fixture::small();
  const BasisTree tree = start_tree();
  EXPECT_FALSE(iio::check_conservation(tree, instance.supplies(), instance.demands()));
  std::vector<iio::Flow> supplies = instance.supplies();
  supplies[1] += 1;
  EXPECT_TRUE(iio::check_conservation(tree, supplies, instance.demands()));
}

}  // namespace
