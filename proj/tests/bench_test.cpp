#include <gtest/gtest.h>

#include <sstream>

#include "iio/bench.hpp"

namespace {

using iio::BenchSpec;
using iio::Variant;

BenchSpec small_spec(unsigned threads) {
  BenchSpec spec;
  spec.sizes = {{100, 100}, {200, 200}};
  spec.seeds = 3;
  spec.variants = {Variant::iio_plus, Variant::ns};
  spec.threads = threads;
  return spec;
}

std::vector<std::vector<std::string>> split_csv(const std::string& text) {
  std::vector<std::vector<std::string>> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) fields.push_back(cell);
    out.push_back(std::move(fields));
  }
  return out;
}

TEST(Bench, RowsAndAverages) {
  const auto spec = small_spec(1);
  const auto result = iio::run_bench(spec);
  ASSERT_EQ(result.rows.size(), 12U);
  ASSERT_EQ(result.averages.size(), 4U);
  std::ostringstream out;
  iio::write_bench(out, spec, result);
  const auto table = split_csv(out.str());
  ASSERT_EQ(table.size(), 17U);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), iio::bench_header);
  EXPECT_EQ(table[1][0], "usq-100x100-s1");
  EXPECT_EQ(table[1][3], "iio+");
  EXPECT_EQ(table[2][3], "ns");
  EXPECT_EQ(table[7][0], "usq-100x100-avg");
  EXPECT_EQ(table[7][14], "mean of 3");
  for (const auto& row : result.rows) {
    EXPECT_TRUE(row.error.empty());
    EXPECT_TRUE(row.optimal);
  }
  // Both variants reach the same optimum on every instance.
  for (std::size_t k = 0; k < result.rows.size(); k += 2)
    EXPECT_EQ(result.rows[k].objective, result.rows[k + 1].objective);
  EXPECT_EQ(result.rows[1].alpha, 0);
  EXPECT_EQ(result.rows[0].alpha, 2000);
}

TEST(Bench, AveragesAreExactMeans) {
  const auto spec = small_spec(1);
  const auto result = iio::run_bench(spec);
  const auto& avg = result.averages[0];
  iio::Objective pivots = 0;
  for (int k = 0; k < 3; ++k) pivots += result.rows[static_cast<std::size_t>(2 * k)].pivots;
  EXPECT_EQ(avg.pivots, pivots);
  EXPECT_EQ(avg.runs, 3);
  EXPECT_EQ(iio::detail::exact_mean(10, 3), "3.333333");
  EXPECT_EQ(iio::detail::exact_mean(20, 3), "6.666667");
  EXPECT_EQ(iio::detail::exact_mean(-7, 2), "-3.500000");
  EXPECT_EQ(iio::detail::exact_mean(9, 1), "9.000000");
}

TEST(Bench, RerunDiffersOnlyInTime) {
  const auto strip_time = [](const std::string& csv) {
    auto table = split_csv(csv);
    for (auto& row : table) row[8].clear();
    return table;
  };
  std::ostringstream first;
  std::ostringstream second;
  auto spec = small_spec(1);
  iio::write_bench(first, spec, iio::run_bench(spec));
  spec.threads = 3;
  iio::write_bench(second, spec, iio::run_bench(spec));
  EXPECT_EQ(strip_time(first.str()), strip_time(second.str()));
}

TEST(Bench, FailedRunsBecomeErrorRows) {
  BenchSpec spec;
  spec.family = iio::Family::uniform_square;
  spec.sizes = {{4, 5}, {6, 6}};
  spec.seeds = 1;
  spec.variants = {Variant::iio_plus};
  const auto result = iio::run_bench(spec);
  ASSERT_EQ(result.rows.size(), 2U);
  EXPECT_FALSE(result.rows[0].error.empty());
  EXPECT_TRUE(result.rows[1].error.empty());
  EXPECT_EQ(result.averages[0].runs, 0);
  std::ostringstream out;
  iio::write_bench(out, spec, result);
  EXPECT_NE(out.str().find("error: uniform-square"), std::string::npos);
}

TEST(Bench, ParsesSizes) {
  EXPECT_EQ(iio::parse_bench_size("100").m, 100);
  EXPECT_EQ(iio::parse_bench_size("100").n, 100);
  EXPECT_EQ(iio::parse_bench_size("30x40").n, 40);
  EXPECT_THROW(iio::parse_bench_size("x4"), std::invalid_argument);
  EXPECT_THROW(iio::parse_bench_size("0"), std::invalid_argument);
  EXPECT_THROW(iio::parse_bench_size("5y"), std::invalid_argument);
}

TEST(Bench, GridFamilyUsesSide) {
  BenchSpec spec;
  spec.family = iio::Family::grid_quadratic;
  spec.sizes = {{4, 4}};
  spec.seeds = 2;
  spec.variants = {Variant::iio_plus, Variant::iio_minus};
  const auto result = iio::run_bench(spec);
  ASSERT_EQ(result.rows.size(), 4U);
  EXPECT_EQ(result.rows[0].m, 16);
  EXPECT_EQ(result.rows[0].instance, "grid-g4-s1");
  EXPECT_EQ(result.rows[0].objective, result.rows[1].objective);
}

TEST(Bench, WorkerCountFromEnvironment) {
  EXPECT_EQ(iio::bench_workers(4), 4U);
  ::setenv("IIO_BENCH_WORKERS", "3", 1);
  EXPECT_EQ(iio::bench_workers(0), 3U);
  ::setenv("IIO_BENCH_WORKERS", "zero", 1);
  EXPECT_EQ(iio::bench_workers(0), 1U);
  ::unsetenv("IIO_BENCH_WORKERS");
  EXPECT_EQ(iio::bench_workers(0), 1U);
}

}  // namespace
