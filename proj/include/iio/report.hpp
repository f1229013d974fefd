#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "iio/basis.hpp"
#include "iio/init.hpp"
#include "iio/instance.hpp"

namespace iio {

enum class Variant : std::uint8_t { iio_plus, iio_minus, ns };

inline std::string_view to_string(Variant variant) {
  switch (variant) {
    case Variant::iio_plus: return "iio+";
    case Variant::iio_minus: return "iio-";
    case Variant::ns: return "ns";
  }
  return "?";
}

inline std::optional<Variant> parse_variant(std::string_view name) {
  if (name == "iio+") return Variant::iio_plus;
  if (name == "iio-") return Variant::iio_minus;
  if (name == "ns") return Variant::ns;
  return std::nullopt;
}

struct SolveOptions {
  Variant variant = Variant::iio_plus;
  InitMethod init = InitMethod::mmr;
  /// Shortlist size; unset means 10(m+n).
  std::optional<std::int64_t> alpha;
  /// Stop after this many macro-iterations, reporting optimal = false.
  std::optional<std::int64_t> max_macro_iterations;
  /// Echoed into reports only.
  std::uint64_t seed = 0;
  /// Record every pivot in SolveReport::trace.
  bool record_trace = false;
  /// Re-verify basis, conservation and multipliers after each macro-iteration
  /// (O(m+n) per check, throws std::logic_error on violation).
  bool check_invariants = false;

  std::int64_t resolved_alpha(const Instance& instance) const {
    return alpha.value_or(10 * static_cast<std::int64_t>(instance.nodes()));
  }
};

struct TraceEvent {
  enum class Kind : std::uint8_t {
    phase1_push,     // non-basic variable raised, basis kept
    phase2_enter,    // logged variable entered the basis
    phase2_vanish,   // logged variable decreased to zero, basis kept
    anti_cycling,    // Bland pivot
    simplex_pivot,   // baseline network simplex pivot
  };
  Kind kind;
  Index source;
  Index destination;
  Flow amount;  // flow moved around the cycle
  std::optional<std::pair<Index, Index>> leaving;
  Objective objective;
};

struct MacroRecord {
  Objective objective_before = 0;
  Objective objective_after_phase1 = 0;
  Objective objective_after = 0;
  std::size_t candidates = 0;
  std::size_t added = 0;
  /// Strictly positive variables (basic plus added) at the end of Phase 1.
  std::size_t positive_after_phase1 = 0;
  bool full_scan = false;
};

struct SolveReport {
  Objective objective = 0;
  bool optimal = false;
  std::int64_t pivots_total = 0;
  std::int64_t pivots_phase1 = 0;
  std::int64_t pivots_phase2 = 0;
  std::int64_t pivots_anti_cycling = 0;
  std::int64_t macro_iterations = 0;
  std::int64_t multiplier_computations = 0;
  double avg_path_length_phase1 = 0;
  double avg_path_length_phase2 = 0;
  double avg_colored_nodes_phase1 = 0;
  double avg_involved_nodes_phase2 = 0;
  /// Average path length over every pivot (the only path statistic for ns).
  double avg_path_length = 0;
  /// Phase-1 candidates dropped without a path search (iio+ only).
  std::int64_t skipped_blocked = 0;
  std::int64_t skipped_indeterminate = 0;
  /// Phase-1 path searches that found a zero bottleneck.
  std::int64_t zero_pushes = 0;
  double wall_time = 0;
  std::vector<MacroRecord> macro_log;
  std::vector<TraceEvent> trace;
};

struct SolveResult {
  FlowSolution solution;
  SolveReport report;
  BasisTree basis;
};

}  // namespace iio
