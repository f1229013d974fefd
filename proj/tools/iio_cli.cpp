// iio: generate, solve, verify and benchmark transportation instances.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "iio/bench.hpp"
#include "iio/gen.hpp"
#include "iio/instance.hpp"
#include "iio/solve.hpp"
#include "iio/verify.hpp"

namespace {

constexpr int exit_error = 3;

iio::Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  return iio::read_instance(in);
}

iio::FlowSolution load_solution(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  return iio::read_solution(in);
}

std::ofstream open_output(const std::string& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

template <class T, class Parse>
T parse_named(const std::string& text, Parse parse, const char* what) {
  if (auto value = parse(text)) return *value;
  throw CLI::ValidationError(std::string("unknown ") + what + " '" + text + "'");
}

struct GenArgs {
  std::string family = "usq";
  iio::Index m = 0;
  iio::Index n = 0;
  iio::Index g = 0;
  std::uint64_t seed = 1;
  iio::Flow mass_max = 1000;
  iio::Cost cost_max = 0;
  std::string out;
};

int run_gen(const GenArgs& args) {
  iio::GenSpec spec;
  spec.family = parse_named<iio::Family>(args.family, iio::parse_family, "family");
  spec.m = args.m;
  spec.n = args.n == 0 ? args.m : args.n;
  spec.grid_side = args.g;
  spec.seed = args.seed;
  spec.mass_max = args.mass_max;
  if (args.cost_max > 0) spec.cost_max = args.cost_max;
  const auto instance = iio::generate(spec);
  auto out = open_output(args.out);
  iio::write_instance(out, instance);
  std::cout << "wrote " << instance.sources() << "x" << instance.destinations() << " instance to "
            << args.out << '\n';
  return 0;
}

struct SolveArgs {
  std::string in;
  std::string out;
  std::string report;
  std::string variant = "iio+";
  std::string init = "mmr";
  std::string alpha = "auto";
  std::int64_t max_macro = 0;
  bool trace = false;
};

int run_solve(const SolveArgs& args) {
  iio::SolveOptions options;
  options.variant = parse_named<iio::Variant>(args.variant, iio::parse_variant, "variant");
  options.init = parse_named<iio::InitMethod>(args.init, iio::parse_init_method, "init method");
  if (args.alpha != "auto") {
    std::int64_t alpha = 0;
    const auto [ptr, ec] = std::from_chars(args.alpha.data(), args.alpha.data() + args.alpha.size(), alpha);
    if (ec != std::errc() || ptr != args.alpha.data() + args.alpha.size() || alpha < 1)
      throw CLI::ValidationError("--alpha must be a positive integer or 'auto'");
    options.alpha = alpha;
  }
  if (args.max_macro > 0) options.max_macro_iterations = args.max_macro;
  options.record_trace = args.trace;

  const auto instance = load_instance(args.in);
  const auto result = iio::solve(instance, options);
  const auto& report = result.report;
  if (!args.out.empty()) {
    auto out = open_output(args.out);
    iio::write_solution(out, result.solution);
  }
  if (!args.report.empty()) {
    const bool fresh = !std::filesystem::exists(args.report) || std::filesystem::file_size(args.report) == 0;
    auto out = open_output(args.report, std::ios::app);
    if (fresh) iio::write_bench_header(out);
    iio::write_bench_row(out, iio::make_row(std::filesystem::path(args.in).stem().string(), instance, options, report));
  }
  for (const auto& e : report.trace) {
    std::cout << "trace x" << e.source + 1 << e.destination + 1 << " amount " << e.amount;
    if (e.leaving) std::cout << " leaving x" << e.leaving->first + 1 << e.leaving->second + 1;
    std::cout << " z " << iio::to_string(e.objective) << '\n';
  }
  std::cout << "objective " << iio::to_string(report.objective) << '\n'
            << "optimal " << (report.optimal ? "true" : "false") << '\n'
            << "pivots " << report.pivots_total << '\n'
            << "macro_iterations " << report.macro_iterations << '\n'
            << "time_seconds " << report.wall_time << '\n';
  return 0;
}

struct VerifyArgs {
  std::string in;
  std::string solution;
  bool check_optimal = false;
};

int run_verify(const VerifyArgs& args) {
  const auto instance = load_instance(args.in);
  if (auto error = iio::validate(instance)) throw iio::InvalidInstance(*error);
  const auto solution = load_solution(args.solution);
  if (auto error = iio::check_feasibility(instance, solution)) {
    std::cout << "infeasible: " << *error << '\n';
    return 1;
  }
  if (!args.check_optimal) {
    std::cout << "feasible, objective " << iio::to_string(solution.objective) << '\n';
    return 0;
  }
  const auto cert = iio::certify_optimality(instance, solution);
  if (cert.optimal) {
    std::cout << "optimal, objective " << iio::to_string(solution.objective) << '\n';
    return 0;
  }
  std::cout << "not optimal: objective " << iio::to_string(cert.objective) << ", optimum "
            << iio::to_string(cert.improved);
  if (cert.witness)
    std::cout << ", witness r" << cert.witness->source + 1 << cert.witness->destination + 1 << " = "
              << cert.witness->reduced << " at (" << cert.witness->source + 1 << ","
              << cert.witness->destination + 1 << ")";
  std::cout << '\n';
  return 2;
}

struct BenchArgs {
  std::string family = "usq";
  std::vector<std::string> sizes;
  int seeds = 10;
  std::uint64_t first_seed = 1;
  std::vector<std::string> variants{"iio+", "iio-", "ns"};
  std::string init = "mmr";
  std::int64_t alpha = 0;
  iio::Flow mass_max = 1000;
  iio::Cost cost_max = 0;
  unsigned threads = 0;
  std::string out;
};

int run_bench(const BenchArgs& args) {
  iio::BenchSpec spec;
  spec.family = parse_named<iio::Family>(args.family, iio::parse_family, "family");
  for (const auto& s : args.sizes) spec.sizes.push_back(iio::parse_bench_size(s));
  spec.seeds = args.seeds;
  spec.first_seed = args.first_seed;
  spec.variants.clear();
  for (const auto& v : args.variants)
    spec.variants.push_back(parse_named<iio::Variant>(v, iio::parse_variant, "variant"));
  spec.init = parse_named<iio::InitMethod>(args.init, iio::parse_init_method, "init method");
  if (args.alpha > 0) spec.alpha = args.alpha;
  spec.mass_max = args.mass_max;
  if (args.cost_max > 0) spec.cost_max = args.cost_max;
  spec.threads = args.threads;
  const auto result = iio::run_bench(spec);
  if (args.out.empty() || args.out == "-") {
    iio::write_bench(std::cout, spec, result);
  } else {
    auto out = open_output(args.out);
    iio::write_bench(out, spec, result);
  }
  int failures = 0;
  for (const auto& row : result.rows) failures += row.error.empty() ? 0 : 1;
  if (failures > 0) std::cerr << failures << " run(s) failed; see the status column\n";
  return failures > 0 ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transportation problem solver: improved inside-out simplex and network simplex"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a seeded instance");
  gen_cmd->add_option("--family", gen.family, "usq (square uniform), urect (rectangular uniform) or grid")
      ->capture_default_str();
  gen_cmd->add_option("--m", gen.m, "Number of sources (uniform families)");
  gen_cmd->add_option("--n", gen.n, "Number of destinations (defaults to --m)");
  gen_cmd->add_option("--g", gen.g, "Grid side for the grid family (m = n = g*g)");
  gen_cmd->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
  gen_cmd->add_option("--mass-max", gen.mass_max, "Masses are drawn from [1, mass-max]")->capture_default_str();
  gen_cmd->add_option("--cost-max", gen.cost_max, "Costs are drawn from [1, cost-max]; default max(m, n)");
  gen_cmd->add_option("--out", gen.out, "Instance file to write")->required();

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Solve an instance file");
  solve_cmd->add_option("--in", solve.in, "Instance file")->required()->check(CLI::ExistingFile);
  solve_cmd->add_option("--out", solve.out, "Solution file to write");
  solve_cmd->add_option("--report", solve.report, "CSV file to append one bench row to");
  solve_cmd->add_option("--variant", solve.variant, "iio+, iio- or ns")->capture_default_str();
  solve_cmd->add_option("--init", solve.init, "nwc, mmr or vam")->capture_default_str();
  solve_cmd->add_option("--alpha", solve.alpha, "Shortlist size, or auto for 10(m+n)")->capture_default_str();
  solve_cmd->add_option("--max-macro-it", solve.max_macro, "Stop after this many macro-iterations");
  solve_cmd->add_flag("--trace", solve.trace, "Print every pivot");

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand(
      "verify", "Check a solution; exit 0 if valid, 1 if infeasible, 2 if not optimal, 3 on bad input");
  verify_cmd->add_option("--in", verify.in, "Instance file")->required()->check(CLI::ExistingFile);
  verify_cmd->add_option("--solution", verify.solution, "Solution file")->required()->check(CLI::ExistingFile);
  verify_cmd->add_flag("--check-optimal", verify.check_optimal, "Also certify optimality");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand(
      "bench", "Run seeded instances with several variants and write CSV (IIO_BENCH_WORKERS caps threads)");
  bench_cmd->add_option("--family", bench.family, "usq, urect or grid")->capture_default_str();
  bench_cmd->add_option("--sizes", bench.sizes, "Sizes as K or MxN (grid: side g)")
      ->required()
      ->delimiter(',');
  bench_cmd->add_option("--seeds", bench.seeds, "Instances per size")->capture_default_str();
  bench_cmd->add_option("--first-seed", bench.first_seed, "Seed of the first instance")->capture_default_str();
  bench_cmd->add_option("--variants", bench.variants, "Comma-separated variants")->delimiter(',');
  bench_cmd->add_option("--init", bench.init, "nwc, mmr or vam")->capture_default_str();
  bench_cmd->add_option("--alpha", bench.alpha, "Shortlist size; default 10(m+n)");
  bench_cmd->add_option("--mass-max", bench.mass_max, "Masses are drawn from [1, mass-max]")->capture_default_str();
  bench_cmd->add_option("--cost-max", bench.cost_max, "Costs are drawn from [1, cost-max]; default max(m, n)");
  bench_cmd->add_option("--threads", bench.threads, "Worker threads; overrides IIO_BENCH_WORKERS");
  bench_cmd->add_option("--out", bench.out, "CSV file (default stdout)");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*gen_cmd) return run_gen(gen);
    if (*solve_cmd) return run_solve(solve);
    if (*verify_cmd) return run_verify(verify);
    if (*bench_cmd) return run_bench(bench);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return *verify_cmd ? exit_error : 1;
  }
  return 1;
}
