#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "iio/basis.hpp"
#include "iio/coloring.hpp"
#include "iio/init.hpp"
#include "iio/instance.hpp"
#include "iio/pricing.hpp"
#include "iio/report.hpp"

namespace iio {

/// The alpha globally cheapest cells, ordered by (cost, row, column).
class Shortlist {
 public:
  Shortlist() = default;
  Shortlist(const Instance& instance, std::int64_t alpha) {
    if (alpha < 1) throw std::invalid_argument("alpha must be at least 1");
    const std::size_t cells = instance.cells();
    const std::size_t keep =
        static_cast<std::uint64_t>(alpha) >= cells ? cells : static_cast<std::size_t>(alpha);
    const auto& costs = instance.costs();
    const auto less = [&](std::uint32_t x, std::uint32_t y) {
      return costs[x] != costs[y] ? costs[x] < costs[y] : x < y;
    };
    std::vector<std::uint32_t> order(cells);
    std::iota(order.begin(), order.end(), 0U);
    if (keep < cells) {
      std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), order.end(), less);
      order.resize(keep);
    }
    std::sort(order.begin(), order.end(), less);
    const auto n = static_cast<std::uint32_t>(instance.destinations());
    entries_.reserve(order.size());
    for (std::uint32_t k : order) entries_.push_back({static_cast<Index>(k / n), static_cast<Index>(k % n)});
  }

  struct Cell {
    Index source;
    Index destination;
  };

  const std::vector<Cell>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  /// Set once the shortlist held no negative reduced cost; never resets.
  bool exhausted() const { return exhausted_; }
  void mark_exhausted() { exhausted_ = true; }

 private:
  std::vector<Cell> entries_;
  bool exhausted_ = false;
};

/// Variables raised in Phase 1, in the order they were added.
struct AddedVariable {
  Index source;
  Index destination;
  Flow amount;
};
using AddedVariableLog = std::vector<AddedVariable>;

struct Reinsertion {
  bool entered = false;
  /// Flow change applied around the cycle, signed.
  Flow change = 0;
  Objective objective_change = 0;
  std::optional<std::pair<Index, Index>> leaving;
  std::size_t rehung = 0;
};

/// Puts one raised variable back. `tree` must balance the masses without
/// `added.amount` on its cell. With a non-positive cycle cost the variable is
/// raised further and enters, even by a zero step; otherwise it is lowered
/// and either vanishes or, when an even edge empties first, enters with the
/// remainder.
inline Reinsertion reinsert_variable(BasisTree& tree, const Instance& instance,
                                     const AddedVariable& added, CyclePath& path) {
  Reinsertion out;
  find_path(tree, added.source, added.destination, path);
  const Objective delta = cycle_cost(path, tree, instance);
  if (delta <= 0) {
    const Bottleneck up = max_increase(path, tree);
    out.leaving = tree.edge_cell(path.edge_at(up.position));
    apply_flow_change(tree, path, up.amount);
    out.rehung = pivot_exchange(tree, path, added.amount + up.amount, up.position);
    out.entered = true;
    out.change = up.amount;
  } else {
    const Bottleneck down = max_decrease(path, tree);
    if (down.position == 0 || added.amount <= down.amount) {
      apply_flow_change(tree, path, -added.amount);
      out.change = -added.amount;
    } else {
      out.leaving = tree.edge_cell(path.edge_at(down.position));
      apply_flow_change(tree, path, -down.amount);
      out.rehung = pivot_exchange(tree, path, added.amount - down.amount, down.position);
      out.entered = true;
      out.change = -down.amount;
    }
  }
  out.objective_change = static_cast<Objective>(out.change) * delta;
  return out;
}

/// Iterated Inside Out on one instance. Each macro-iteration prices the basis
/// once, raises improving non-basic variables around cycles of the fixed
/// tree while shrinking the working supplies and demands (Phase 1), then
/// reinserts those variables one pivot at a time until a basis of the
/// original instance is restored (Phase 2).
class InsideOutSolver {
 public:
  InsideOutSolver(const Instance& instance, BasisTree basis, SolveOptions options)
      : instance_(instance), tree_(std::move(basis)), options_(options) {
    require_valid(instance_);
    require_cost_range(instance_);
    require_feasible_basis(instance_, tree_);
    if (options_.variant == Variant::ns)
      throw std::invalid_argument("InsideOutSolver runs iio+ or iio- only");
    shortlist_ = Shortlist(instance_, options_.resolved_alpha(instance_));
    work_supply_ = instance_.supplies();
    work_demand_ = instance_.demands();
    objective_ = to_solution(tree_, instance_).objective;
  }

  const BasisTree& tree() const { return tree_; }
  const Multipliers& multipliers() const { return y_; }
  const ColorForest& forest() const { return forest_; }
  const Shortlist& shortlist() const { return shortlist_; }
  const std::vector<PricedCell>& candidates() const { return candidates_; }
  const std::vector<Flow>& working_supplies() const { return work_supply_; }
  const std::vector<Flow>& working_demands() const { return work_demand_; }
  Objective objective() const { return objective_; }
  const SolveReport& report() const { return report_; }
  bool plus() const { return options_.variant == Variant::iio_plus; }

  /// Computes multipliers and collects the negative reduced costs of the
  /// current candidate set: the shortlist until it runs dry, then every cell
  /// in row-major order. Returns false when the basis is optimal.
  bool price() {
    compute_multipliers(tree_, instance_, y_);
    ++report_.multiplier_computations;
    candidates_.clear();
    full_scan_ = false;
    if (!shortlist_.exhausted()) {
      for (const auto& cell : shortlist_.entries()) {
        const Cost r = reduced_cost(cell.source, cell.destination, y_, instance_);
        if (r < 0) candidates_.push_back({cell.source, cell.destination, r});
      }
      if (!candidates_.empty()) return true;
      shortlist_.mark_exhausted();
    }
    full_scan_ = true;
    const Index m = instance_.sources();
    const Index n = instance_.destinations();
    const Cost* v = y_.v.data();
    for (Index i = 0; i < m; ++i) {
      const Cost* row = instance_.row(i);
      const Cost ui = y_.u[static_cast<std::size_t>(i)];
      for (Index j = 0; j < n; ++j) {
        const Cost r = row[j] - ui - v[j];
        if (r < 0) candidates_.push_back({i, j, r});
      }
    }
    return !candidates_.empty();
  }

  /// One pass over the priced candidates. The basis and multipliers stay
  /// fixed, so the reduced costs remain exact throughout.
  AddedVariableLog phase1() {
    AddedVariableLog log;
    if (plus()) forest_.build(tree_);
    for (const auto& cand : candidates_) {
      if (plus()) {
        const auto verdict = forest_.admissible(cand.source, cand.destination);
        if (verdict != Admissibility::admissible) {
          ++(verdict == Admissibility::blocked ? report_.skipped_blocked
                                               : report_.skipped_indeterminate);
          continue;
        }
      }
      find_path(tree_, cand.source, cand.destination, path_);
      const Bottleneck push = max_increase(path_, tree_);
      if (push.amount == 0) {
        if (plus()) throw std::logic_error("coloring admitted a variable with a zero bottleneck");
        ++report_.zero_pushes;
        continue;
      }
      apply_flow_change(tree_, path_, push.amount);
      objective_ += static_cast<Objective>(push.amount) * cand.reduced;
      work_supply_[static_cast<std::size_t>(cand.source)] -= push.amount;
      work_demand_[static_cast<std::size_t>(cand.destination)] -= push.amount;
      log.push_back({cand.source, cand.destination, push.amount});

      std::size_t colored = 0;
      if (plus()) colored = update_forest();
      ++report_.pivots_phase1;
      phase1_path_nodes_ += path_.node_count();
      phase1_colored_ += colored;
      trace(TraceEvent::Kind::phase1_push, cand.source, cand.destination, push.amount,
            std::nullopt);
    }
    return log;
  }

  /// Reinserts the logged variables in order, pivoting each by the sign of
  /// its current cycle cost.
  void phase2(const AddedVariableLog& log) {
    for (const auto& added : log) {
      work_supply_[static_cast<std::size_t>(added.source)] += added.amount;
      work_demand_[static_cast<std::size_t>(added.destination)] += added.amount;
      const Reinsertion step = reinsert_variable(tree_, instance_, added, path_);
      objective_ += step.objective_change;
      trace(step.entered ? TraceEvent::Kind::phase2_enter : TraceEvent::Kind::phase2_vanish,
            added.source, added.destination, step.change, step.leaving);
      ++report_.pivots_phase2;
      phase2_path_nodes_ += path_.node_count();
      phase2_involved_ += path_.node_count() + step.rehung;
    }
    if (work_supply_ != instance_.supplies() || work_demand_ != instance_.demands())
      throw std::logic_error("phase 2 did not restore the original supplies and demands");
  }

  /// Bland-rule network simplex pivots until the objective strictly drops.
  /// Returns true if optimality was proven instead.
  bool break_stall() {
    const Objective start = objective_;
    while (true) {
      compute_multipliers(tree_, instance_, y_);
      ++report_.multiplier_computations;
      const auto entering = first_negative(instance_, y_);
      if (!entering) return true;
      find_path(tree_, entering->source, entering->destination, path_);
      const Bottleneck up = max_increase(path_, tree_, LeavingRule::smallest_index);
      const auto leaving = tree_.edge_cell(path_.edge_at(up.position));
      apply_flow_change(tree_, path_, up.amount);
      objective_ += static_cast<Objective>(up.amount) * entering->reduced;
      pivot_exchange(tree_, path_, up.amount, up.position);
      ++report_.pivots_anti_cycling;
      all_path_nodes_ += path_.node_count();
      trace(TraceEvent::Kind::anti_cycling, entering->source, entering->destination, up.amount,
            leaving);
      if (objective_ < start) return false;
    }
  }

  /// Runs macro-iterations to optimality or the iteration cap.
  SolveResult run() {
    const auto started = std::chrono::steady_clock::now();
    bool optimal = false;
    while (true) {
      if (options_.max_macro_iterations &&
          report_.macro_iterations >= *options_.max_macro_iterations)
        break;
      if (!price()) {
        optimal = true;
        break;
      }
      ++report_.macro_iterations;
      MacroRecord record;
      record.objective_before = objective_;
      record.candidates = candidates_.size();
      record.full_scan = full_scan_;
      const AddedVariableLog log = phase1();
      record.objective_after_phase1 = objective_;
      record.added = log.size();
      record.positive_after_phase1 = log.size();
      for (Index v = 1; v < tree_.nodes(); ++v) record.positive_after_phase1 += tree_.flow(v) > 0;
      phase2(log);
      record.objective_after = objective_;
      report_.macro_log.push_back(record);
      if (options_.check_invariants) check_invariants();
      if (objective_ > record.objective_before)
        throw std::logic_error("objective increased across a macro-iteration");
      if (objective_ == record.objective_before && break_stall()) {
        optimal = true;
        break;
      }
    }
    const auto finished = std::chrono::steady_clock::now();
    return finish(optimal, std::chrono::duration<double>(finished - started).count());
  }

  void check_invariants() const {
    if (auto error = check_tree(tree_)) throw std::logic_error("basis: " + *error);
    if (auto error = check_conservation(tree_, instance_.supplies(), instance_.demands()))
      throw std::logic_error("basis: " + *error);
    const Multipliers fresh = compute_multipliers(tree_, instance_);
    require_dual_consistency(tree_, instance_, fresh);
    if (to_solution(tree_, instance_).objective != objective_)
      throw std::logic_error("tracked objective drifted from the basis cost");
  }

 private:
  /// Registers the degeneracy changes caused by the last push. Even edges
  /// that were degenerate now carry flow; odd edges may have emptied.
  std::size_t update_forest() {
    std::size_t colored = 0;
    const std::size_t total = path_.edge_count();
    for (std::size_t p = 2; p <= total; p += 2) {
      const Index child = path_.edge_at(p);
      if (forest_.is_degenerate(child)) colored += forest_.on_edge_became_positive(tree_, child);
    }
    for (std::size_t p = 1; p <= total; p += 2) {
      const Index child = path_.edge_at(p);
      if (tree_.flow(child) == 0) colored += forest_.on_edge_became_degenerate(tree_, child);
    }
    return colored;
  }

  void trace(TraceEvent::Kind kind, Index i, Index j, Flow amount,
             std::optional<std::pair<Index, Index>> leaving) {
    if (options_.record_trace) report_.trace.push_back({kind, i, j, amount, leaving, objective_});
  }

  SolveResult finish(bool optimal, double seconds) {
    auto ratio = [](std::size_t num, std::int64_t den) {
      return den > 0 ? static_cast<double>(num) / static_cast<double>(den) : 0.0;
    };
    report_.objective = objective_;
    report_.optimal = optimal;
    report_.pivots_total =
        report_.pivots_phase1 + report_.pivots_phase2 + report_.pivots_anti_cycling;
    report_.avg_path_length_phase1 = ratio(phase1_path_nodes_, report_.pivots_phase1);
    report_.avg_path_length_phase2 = ratio(phase2_path_nodes_, report_.pivots_phase2);
    report_.avg_colored_nodes_phase1 = ratio(phase1_colored_, report_.pivots_phase1);
    report_.avg_involved_nodes_phase2 = ratio(phase2_involved_, report_.pivots_phase2);
    report_.avg_path_length =
        ratio(phase1_path_nodes_ + phase2_path_nodes_ + all_path_nodes_, report_.pivots_total);
    report_.wall_time = seconds;
    SolveResult result;
    result.solution = to_solution(tree_, instance_);
    if (result.solution.objective != objective_)
      throw std::logic_error("tracked objective drifted from the basis cost");
    result.report = report_;
    result.basis = tree_;
    return result;
  }

  const Instance& instance_;
  BasisTree tree_;
  SolveOptions options_;
  Multipliers y_;
  ColorForest forest_;
  Shortlist shortlist_;
  std::vector<PricedCell> candidates_;
  bool full_scan_ = false;
  std::vector<Flow> work_supply_;
  std::vector<Flow> work_demand_;
  Objective objective_ = 0;
  CyclePath path_;
  SolveReport report_;
  std::size_t phase1_path_nodes_ = 0;
  std::size_t phase2_path_nodes_ = 0;
  std::size_t phase1_colored_ = 0;
  std::size_t phase2_involved_ = 0;
  std::size_t all_path_nodes_ = 0;
};

/// Solves from a given feasible basis.
inline SolveResult solve_inside_out(const Instance& instance, BasisTree basis,
                                    const SolveOptions& options) {
  InsideOutSolver solver(instance, std::move(basis), options);
  return solver.run();
}

}  // namespace iio
