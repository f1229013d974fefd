#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "iio/init.hpp"
#include "oracles.hpp"

namespace {

using iio::BasisTree;
using iio::Cost;
using iio::Flow;
using iio::FlowEntry;
using iio::Index;
using iio::Instance;

// Straightforward greedy reference: every step rescans the whole matrix.
// Shares only the documented rules with the library.
class NaiveGreedy {
 public:
  explicit NaiveGreedy(const Instance& instance)
      : instance_(instance),
        a_(instance.supplies()),
        b_(instance.demands()),
        row_(static_cast<std::size_t>(instance.sources()), true),
        col_(static_cast<std::size_t>(instance.destinations()), true) {}

  int open_rows() const { return static_cast<int>(std::count(row_.begin(), row_.end(), true)); }
  int open_cols() const { return static_cast<int>(std::count(col_.begin(), col_.end(), true)); }
  bool done() const { return open_rows() == 0 && open_cols() == 0; }
  bool row_open(int i) const { return row_[i]; }
  bool col_open(int j) const { return col_[j]; }

  void allocate(int i, int j) {
    const Flow x = std::min(a_[i], b_[j]);
    out_.push_back({i, j, x});
    a_[i] -= x;
    b_[j] -= x;
    if (a_[i] == 0 && b_[j] == 0) {
      if (open_cols() > 1) {
        col_[j] = false;
        int best = -1;
        for (int c = 0; c < instance_.destinations(); ++c)
          if (col_[c] && (best < 0 || instance_.cost(i, c) < instance_.cost(i, best))) best = c;
        out_.push_back({i, best, 0});
        row_[i] = false;
      } else if (open_rows() > 1) {
        row_[i] = false;
      } else {
        row_[i] = false;
        col_[j] = false;
      }
    } else if (a_[i] == 0) {
      row_[i] = false;
    } else {
      col_[j] = false;
    }
  }

  std::vector<FlowEntry> edges() const {
    auto sorted = out_;
    std::sort(sorted.begin(), sorted.end(), [](const FlowEntry& x, const FlowEntry& y) {
      return std::pair(x.source, x.destination) < std::pair(y.source, y.destination);
    });
    return sorted;
  }

 private:
  const Instance& instance_;
  std::vector<Flow> a_;
  std::vector<Flow> b_;
  std::vector<bool> row_;
  std::vector<bool> col_;
  std::vector<FlowEntry> out_;
};

std::vector<FlowEntry> naive_mmr(const Instance& instance) {
  NaiveGreedy g(instance);
  while (!g.done()) {
    int bi = -1;
    int bj = -1;
    for (int i = 0; i < instance.sources(); ++i)
      for (int j = 0; j < instance.destinations(); ++j)
        if (g.row_open(i) && g.col_open(j) && (bi < 0 || instance.cost(i, j) < instance.cost(bi, bj))) {
          bi = i;
          bj = j;
        }
    g.allocate(bi, bj);
  }
  return g.edges();
}

std::vector<FlowEntry> naive_vam(const Instance& instance) {
  NaiveGreedy g(instance);
  const int m = instance.sources();
  const int n = instance.destinations();
  // Penalty and cheapest index of a line, given the costs of its open cells
  // in index order.
  const auto assess = [](const std::vector<std::pair<Cost, int>>& cells) {
    auto sorted = cells;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const auto& x, const auto& y) { return x.first < y.first; });
    const Cost penalty = sorted.size() > 1 ? sorted[1].first - sorted[0].first : 0;
    return std::pair(penalty, sorted[0].second);
  };
  while (!g.done()) {
    Cost best = -1;
    int bi = -1;
    int bj = -1;
    for (int i = 0; i < m; ++i) {
      if (!g.row_open(i)) continue;
      std::vector<std::pair<Cost, int>> cells;
      for (int j = 0; j < n; ++j)
        if (g.col_open(j)) cells.push_back({instance.cost(i, j), j});
      if (cells.empty()) continue;
      const auto [penalty, j] = assess(cells);
      if (penalty > best) {
        best = penalty;
        bi = i;
        bj = j;
      }
    }
    for (int j = 0; j < n; ++j) {
      if (!g.col_open(j)) continue;
      std::vector<std::pair<Cost, int>> cells;
      for (int i = 0; i < m; ++i)
        if (g.row_open(i)) cells.push_back({instance.cost(i, j), i});
      if (cells.empty()) continue;
      const auto [penalty, i] = assess(cells);
      if (penalty > best) {
        best = penalty;
        bi = i;
        bj = j;
      }
    }
    g.allocate(bi, bj);
  }
  return g.edges();
}

void expect_valid_basis(const Instance& instance, const BasisTree& tree) {
  const auto edges = tree.edges();
  EXPECT_TRUE(oracle::is_spanning_tree(instance.sources(), instance.destinations(), edges));
  EXPECT_TRUE(oracle::is_feasible(instance, edges));
  EXPECT_FALSE(iio::check_tree(tree));
}

TEST(NorthWestCorner, WorkedExample) {
  const auto instance = fixture::small();
  const BasisTree tree = iio::north_west_corner(instance);
  EXPECT_EQ(tree.edges(),
            (std::vector<FlowEntry>{{0, 0, 20}, {0, 1, 10}, {1, 1, 30}, {2, 1, 10}, {2, 2, 20}}));
  EXPECT_EQ(iio::to_solution(tree, instance).objective, 190);
}

TEST(NorthWestCorner, SingleCell) {
  const Instance instance(1, 1, {5}, {5}, {3});
  EXPECT_EQ(iio::north_west_corner(instance).edges(), (std::vector<FlowEntry>{{0, 0, 5}}));
}

TEST(NorthWestCorner, SimultaneousExhaustionKeepsTree) {
  const Instance instance(2, 2, {1, 1}, {1, 1}, {1, 1, 1, 1});
  EXPECT_EQ(iio::north_west_corner(instance).edges(),
            (std::vector<FlowEntry>{{0, 0, 1}, {0, 1, 0}, {1, 1, 1}}));
}

TEST(MatrixMinimumRule, WorkedExample) {
  const auto instance = fixture::small();
  const BasisTree tree = iio::matrix_minimum_rule(instance);
  EXPECT_EQ(tree.edges(), fixture::small_optimum());
  EXPECT_EQ(iio::to_solution(tree, instance).objective, 110);
}

TEST(MatrixMinimumRule, DistinctIncreasingCostsFollowGreedyOrder) {
  const Instance instance(2, 3, {4, 6}, {3, 3, 4}, {1, 2, 3, 4, 5, 6});
  // (1,1)=3, (1,2)=1, then row 1 closes; (2,2)=2, (2,3)=4.
  EXPECT_EQ(iio::matrix_minimum_rule(instance).edges(),
            (std::vector<FlowEntry>{{0, 0, 3}, {0, 1, 1}, {1, 1, 2}, {1, 2, 4}}));
}

TEST(MatrixMinimumRule, MatchesNaiveGreedy) {
  std::mt19937_64 rng(3);
  for (int round = 0; round < 300; ++round) {
    const int m = std::uniform_int_distribution<int>(1, 12)(rng);
    const int n = std::uniform_int_distribution<int>(1, 12)(rng);
    const auto instance = oracle::random_instance(m, n, rng, 6, 5);
    const BasisTree tree = iio::matrix_minimum_rule(instance);
    expect_valid_basis(instance, tree);
    ASSERT_EQ(tree.edges(), naive_mmr(instance)) << "round " << round;
  }
}

TEST(MatrixMinimumRule, UsuallyBeatsNorthWestCorner) {
  std::mt19937_64 rng(8);
  int better_or_equal = 0;
  for (int round = 0; round < 200; ++round) {
    const auto instance = oracle::random_instance(10, 10, rng, 100, 100);
    const BasisTree mmr = iio::matrix_minimum_rule(instance);
    const BasisTree nwc = iio::north_west_corner(instance);
    expect_valid_basis(instance, mmr);
    expect_valid_basis(instance, nwc);
    better_or_equal += iio::to_solution(mmr, instance).objective <= iio::to_solution(nwc, instance).objective;
  }
  EXPECT_GE(better_or_equal, 180);
}

TEST(Vogel, WorkedExample) {
  const auto instance = fixture::small();
  const BasisTree tree = iio::vogel_approximation(instance);
  EXPECT_EQ(tree.edges(), naive_vam(instance));
  EXPECT_EQ(tree.edges(), fixture::small_optimum());
  EXPECT_EQ(iio::to_solution(tree, instance).objective, 110);
}

TEST(Vogel, SingleRowAllocatesEverything) {
  const Instance instance(1, 4, {10}, {1, 2, 3, 4}, {4, 3, 2, 1});
  const auto edges = iio::vogel_approximation(instance).edges();
  EXPECT_EQ(edges, (std::vector<FlowEntry>{{0, 0, 1}, {0, 1, 2}, {0, 2, 3}, {0, 3, 4}}));
}

TEST(Vogel, MatchesNaiveVogel) {
  std::mt19937_64 rng(4);
  for (int round = 0; round < 300; ++round) {
    const int m = std::uniform_int_distribution<int>(1, 12)(rng);
    const int n = std::uniform_int_distribution<int>(1, 12)(rng);
    const auto instance = oracle::random_instance(m, n, rng, 6, 9);
    const BasisTree tree = iio::vogel_approximation(instance);
    expect_valid_basis(instance, tree);
    ASSERT_EQ(tree.edges(), naive_vam(instance)) << "round " << round;
  }
}

TEST(InitialBasis, ZeroMassLinesAreCovered) {
  const Instance instance(3, 3, {0, 4, 0}, {0, 0, 4}, {1, 2, 3, 4, 5, 6, 7, 8, 9});
  for (auto method : {iio::InitMethod::nwc, iio::InitMethod::mmr, iio::InitMethod::vam}) {
    expect_valid_basis(instance, iio::initial_basis(instance, method));
  }
}

TEST(InitialBasis, RandomInstancesGiveValidBases) {
  std::mt19937_64 rng(9);
  for (int round = 0; round < 200; ++round) {
    const auto instance = oracle::random_instance(10, 10, rng);
    for (auto method : {iio::InitMethod::nwc, iio::InitMethod::mmr, iio::InitMethod::vam})
      expect_valid_basis(instance, iio::initial_basis(instance, method));
  }
}

TEST(InitMethod, ParsesNames) {
  EXPECT_EQ(iio::parse_init_method("vam"), iio::InitMethod::vam);
  EXPECT_EQ(iio::to_string(iio::InitMethod::nwc), "nwc");
  EXPECT_FALSE(iio::parse_init_method("tmr"));
}

}  // namespace
