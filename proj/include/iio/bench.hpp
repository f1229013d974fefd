#pragma once

#include <atomic>
#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "iio/gen.hpp"
#include "iio/solve.hpp"

namespace iio {

/// One row of the bench CSV. Integer columns are copied from SolveReport;
/// `alpha` is 0 and the phase statistics are 0 for ns runs.
struct BenchRow {
  std::string instance;
  Index m = 0;
  Index n = 0;
  std::string variant;
  std::string init;
  std::int64_t alpha = 0;
  std::int64_t pivots = 0;
  std::int64_t macro_iterations = 0;
  double time_seconds = 0;
  Objective objective = 0;
  double p_length_phase1 = 0;
  double p_length_phase2 = 0;
  double colored_nodes_phase1 = 0;
  double involved_nodes_phase2 = 0;
  bool optimal = false;
  /// Empty when the run succeeded.
  std::string error;
};

inline BenchRow make_row(std::string label, const Instance& instance, const SolveOptions& options,
                         const SolveReport& report) {
  BenchRow row;
  row.instance = std::move(label);
  row.m = instance.sources();
  row.n = instance.destinations();
  row.variant = std::string(to_string(options.variant));
  row.init = std::string(to_string(options.init));
  const bool iio = options.variant != Variant::ns;
  row.alpha = iio ? options.resolved_alpha(instance) : 0;
  row.pivots = report.pivots_total;
  row.macro_iterations = report.macro_iterations;
  row.time_seconds = report.wall_time;
  row.objective = report.objective;
  row.p_length_phase1 = iio ? report.avg_path_length_phase1 : 0.0;
  row.p_length_phase2 = iio ? report.avg_path_length_phase2 : 0.0;
  row.colored_nodes_phase1 = iio ? report.avg_colored_nodes_phase1 : 0.0;
  row.involved_nodes_phase2 = iio ? report.avg_involved_nodes_phase2 : 0.0;
  row.optimal = report.optimal;
  return row;
}

inline constexpr std::string_view bench_header =
    "instance,m,n,variant,init,alpha,pivots,macro_iterations,time_seconds,objective,"
    "p_length_phase1,p_length_phase2,colored_nodes_phase1,involved_nodes_phase2,status";

namespace detail {

inline std::string shortest(double x) {
  char buf[32];
  const auto end = std::to_chars(buf, buf + sizeof buf, x).ptr;
  return std::string(buf, end);
}

inline std::string fixed(double x, int digits) {
  char buf[64];
  const auto end = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::fixed, digits).ptr;
  return std::string(buf, end);
}

/// sum / count printed with six decimals, rounded half away from zero,
/// computed in integers.
inline std::string exact_mean(Objective sum, std::int64_t count) {
  const bool negative = sum < 0;
  Objective scaled = (negative ? -sum : sum) * 1000000;
  scaled = (scaled + count / 2) / count;
  std::string digits = to_string(scaled / 1000000);
  std::string frac = to_string(scaled % 1000000);
  frac.insert(0, 6 - frac.size(), '0');
  return (negative ? "-" : "") + digits + "." + frac;
}

inline std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace detail

inline void write_bench_header(std::ostream& out) { out << bench_header << '\n'; }

inline void write_bench_row(std::ostream& out, const BenchRow& row) {
  out << detail::csv_field(row.instance) << ',' << row.m << ',' << row.n << ',' << row.variant << ','
      << row.init << ',' << row.alpha << ',' << row.pivots << ',' << row.macro_iterations << ','
      << detail::fixed(row.time_seconds, 6) << ',' << to_string(row.objective) << ','
      << detail::shortest(row.p_length_phase1) << ',' << detail::shortest(row.p_length_phase2) << ','
      << detail::shortest(row.colored_nodes_phase1) << ','
      << detail::shortest(row.involved_nodes_phase2) << ','
      << detail::csv_field(row.error.empty() ? (row.optimal ? "optimal" : "stopped") : "error: " + row.error)
      << '\n';
}

/// Mean over the successful rows of one (size, variant) group.
struct BenchAverage {
  std::string instance;
  Index m = 0;
  Index n = 0;
  std::string variant;
  std::string init;
  std::int64_t alpha = 0;
  std::int64_t runs = 0;
  Objective pivots = 0;
  Objective macro_iterations = 0;
  Objective objective = 0;
  double time_seconds = 0;
  double p_length_phase1 = 0;
  double p_length_phase2 = 0;
  double colored_nodes_phase1 = 0;
  double involved_nodes_phase2 = 0;

  void add(const BenchRow& row) {
    if (!row.error.empty()) return;
    ++runs;
    pivots += row.pivots;
    macro_iterations += row.macro_iterations;
    objective += row.objective;
    time_seconds += row.time_seconds;
    p_length_phase1 += row.p_length_phase1;
    p_length_phase2 += row.p_length_phase2;
    colored_nodes_phase1 += row.colored_nodes_phase1;
    involved_nodes_phase2 += row.involved_nodes_phase2;
  }

  double mean(double total) const { return runs > 0 ? total / static_cast<double>(runs) : 0.0; }
  double mean_pivots() const { return runs > 0 ? static_cast<double>(pivots) / static_cast<double>(runs) : 0.0; }
};

inline void write_bench_average(std::ostream& out, const BenchAverage& avg) {
  const auto integer = [&](Objective total) {
    return avg.runs > 0 ? detail::exact_mean(total, avg.runs) : std::string("0");
  };
  out << detail::csv_field(avg.instance) << ',' << avg.m << ',' << avg.n << ',' << avg.variant << ','
      << avg.init << ',' << avg.alpha << ',' << integer(avg.pivots) << ','
      << integer(avg.macro_iterations) << ',' << detail::fixed(avg.mean(avg.time_seconds), 6) << ','
      << integer(avg.objective) << ',' << detail::shortest(avg.mean(avg.p_length_phase1)) << ','
      << detail::shortest(avg.mean(avg.p_length_phase2)) << ','
      << detail::shortest(avg.mean(avg.colored_nodes_phase1)) << ','
      << detail::shortest(avg.mean(avg.involved_nodes_phase2)) << ",mean of " << avg.runs << '\n';
}

/// A size to benchmark: m x n for the uniform families, the grid side for
/// grid_quadratic.
struct BenchSize {
  Index m = 0;
  Index n = 0;
};

/// Parses "K" (K x K) or "MxN".
inline BenchSize parse_bench_size(std::string_view text) {
  const auto number = [&](std::string_view part) {
    Index value = 0;
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
    if (ec != std::errc() || ptr != part.data() + part.size() || value < 1)
      throw std::invalid_argument("bad size '" + std::string(text) + "'");
    return value;
  };
  const auto x = text.find('x');
  if (x == std::string_view::npos) {
    const Index k = number(text);
    return {k, k};
  }
  return {number(text.substr(0, x)), number(text.substr(x + 1))};
}

struct BenchSpec {
  Family family = Family::uniform_square;
  std::vector<BenchSize> sizes;
  int seeds = 10;
  std::uint64_t first_seed = 1;
  std::vector<Variant> variants{Variant::iio_plus, Variant::iio_minus, Variant::ns};
  InitMethod init = InitMethod::mmr;
  std::optional<std::int64_t> alpha;
  Flow mass_max = 1000;
  std::optional<Cost> cost_max;
  /// Worker threads; 0 reads IIO_BENCH_WORKERS and falls back to 1.
  unsigned threads = 0;
};

inline unsigned bench_workers(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("IIO_BENCH_WORKERS")) {
    unsigned value = 0;
    const std::string_view text(env);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec == std::errc() && ptr == text.data() + text.size() && value > 0) return value;
  }
  return 1;
}

struct BenchResult {
  std::vector<BenchRow> rows;
  std::vector<BenchAverage> averages;
};

namespace detail {

inline GenSpec gen_spec_for(const BenchSpec& spec, BenchSize size, std::uint64_t seed) {
  GenSpec gen;
  gen.family = spec.family;
  gen.seed = seed;
  gen.mass_max = spec.mass_max;
  gen.cost_max = spec.cost_max;
  if (spec.family == Family::grid_quadratic) {
    gen.grid_side = size.m;
  } else {
    gen.m = size.m;
    gen.n = size.n;
  }
  return gen;
}

inline std::string size_label(const BenchSpec& spec, BenchSize size) {
  std::string label(to_string(spec.family));
  if (spec.family == Family::grid_quadratic) return label + "-g" + std::to_string(size.m);
  return label + "-" + std::to_string(size.m) + "x" + std::to_string(size.n);
}

}  // namespace detail

/// Runs every (size, seed) job, each generating its instance once and
/// solving it with every variant in turn. Jobs are spread over worker
/// threads; rows come back in (size, seed, variant) order whatever the
/// thread count. A failing run becomes an error row.
inline BenchResult run_bench(const BenchSpec& spec) {
  if (spec.seeds < 1) throw std::invalid_argument("seeds must be at least 1");
  if (spec.variants.empty()) throw std::invalid_argument("no variants to run");
  const std::size_t per_job = spec.variants.size();
  const std::size_t jobs = spec.sizes.size() * static_cast<std::size_t>(spec.seeds);
  std::vector<BenchRow> rows(jobs * per_job);

  const auto run_job = [&](std::size_t job) {
    const BenchSize size = spec.sizes[job / static_cast<std::size_t>(spec.seeds)];
    const std::uint64_t seed = spec.first_seed + job % static_cast<std::size_t>(spec.seeds);
    const std::string label = detail::size_label(spec, size) + "-s" + std::to_string(seed);
    std::optional<Instance> instance;
    std::string gen_error;
    try {
      instance = generate(detail::gen_spec_for(spec, size, seed));
    } catch (const std::exception& e) {
      gen_error = e.what();
    }
    for (std::size_t v = 0; v < per_job; ++v) {
      SolveOptions options;
      options.variant = spec.variants[v];
      options.init = spec.init;
      options.alpha = spec.alpha;
      options.seed = seed;
      BenchRow& row = rows[job * per_job + v];
      if (!instance) {
        row.instance = label;
        row.variant = std::string(to_string(options.variant));
        row.init = std::string(to_string(options.init));
        row.error = gen_error;
        continue;
      }
      try {
        row = make_row(label, *instance, options, solve(*instance, options).report);
      } catch (const std::exception& e) {
        row = BenchRow{};
        row.instance = label;
        row.m = instance->sources();
        row.n = instance->destinations();
        row.variant = std::string(to_string(options.variant));
        row.init = std::string(to_string(options.init));
        row.error = e.what();
      }
    }
  };

  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(bench_workers(spec.threads), std::max<std::size_t>(jobs, 1)));
  if (workers <= 1) {
    for (std::size_t job = 0; job < jobs; ++job) run_job(job);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t job = next++; job < jobs; job = next++) run_job(job);
      });
    }
    for (auto& t : pool) t.join();
  }

  BenchResult result;
  result.rows = std::move(rows);
  for (std::size_t s = 0; s < spec.sizes.size(); ++s) {
    for (std::size_t v = 0; v < per_job; ++v) {
      BenchAverage avg;
      avg.instance = detail::size_label(spec, spec.sizes[s]) + "-avg";
      avg.variant = std::string(to_string(spec.variants[v]));
      avg.init = std::string(to_string(spec.init));
      for (int k = 0; k < spec.seeds; ++k) {
        const BenchRow& row = result.rows[(s * static_cast<std::size_t>(spec.seeds) + static_cast<std::size_t>(k)) * per_job + v];
        if (avg.m == 0) {
          avg.m = row.m;
          avg.n = row.n;
          avg.alpha = row.alpha;
        }
        avg.add(row);
      }
      result.averages.push_back(std::move(avg));
    }
  }
  return result;
}

/// Header, then for each size its run rows followed by its average rows.
inline void write_bench(std::ostream& out, const BenchSpec& spec, const BenchResult& result) {
  write_bench_header(out);
  const std::size_t per_size = static_cast<std::size_t>(spec.seeds) * spec.variants.size();
  for (std::size_t s = 0; s < spec.sizes.size(); ++s) {
    for (std::size_t k = 0; k < per_size; ++k) write_bench_row(out, result.rows[s * per_size + k]);
    for (std::size_t v = 0; v < spec.variants.size(); ++v)
      write_bench_average(out, result.averages[s * spec.variants.size() + v]);
  }
}

}  // namespace iio
