#pragma once

#include <cstddef>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "iio/types.hpp"

namespace iio {

/// Balanced transportation instance with a dense row-major cost matrix.
/// Construction does not validate; call validate() or let a solver do it.
class Instance {
 public:
  Instance() = default;
  Instance(Index m, Index n, std::vector<Flow> supplies, std::vector<Flow> demands,
           std::vector<Cost> costs)
      : m_(m),
        n_(n),
        supplies_(std::move(supplies)),
        demands_(std::move(demands)),
        costs_(std::move(costs)) {}

  Index sources() const { return m_; }
  Index destinations() const { return n_; }
  Index nodes() const { return m_ + n_; }

  const std::vector<Flow>& supplies() const { return supplies_; }
  const std::vector<Flow>& demands() const { return demands_; }
  const std::vector<Cost>& costs() const { return costs_; }

  Flow supply(Index i) const { return supplies_[static_cast<std::size_t>(i)]; }
  Flow demand(Index j) const { return demands_[static_cast<std::size_t>(j)]; }
  Cost cost(Index i, Index j) const {
    return costs_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) +
                  static_cast<std::size_t>(j)];
  }
  const Cost* row(Index i) const {
    return costs_.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(n_);
  }
  std::size_t cells() const { return static_cast<std::size_t>(m_) * static_cast<std::size_t>(n_); }

  friend bool operator==(const Instance&, const Instance&) = default;

 private:
  Index m_ = 0;
  Index n_ = 0;
  std::vector<Flow> supplies_;
  std::vector<Flow> demands_;
  std::vector<Cost> costs_;
};

struct FlowEntry {
  Index source = 0;
  Index destination = 0;
  Flow flow = 0;

  friend bool operator==(const FlowEntry&, const FlowEntry&) = default;
};

struct FlowSolution {
  std::vector<FlowEntry> entries;
  Objective objective = 0;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInstance : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Returns nullopt when every instance invariant holds, otherwise a
/// description of the first violation.
inline std::optional<std::string> validate(const Instance& instance) {
  const Index m = instance.sources();
  const Index n = instance.destinations();
  if (m < 1 || n < 1) return "dimension: m and n must be positive";
  if (instance.supplies().size() != static_cast<std::size_t>(m))
    return "dimension mismatch: expected " + std::to_string(m) + " supplies, got " +
           std::to_string(instance.supplies().size());
  if (instance.demands().size() != static_cast<std::size_t>(n))
    return "dimension mismatch: expected " + std::to_string(n) + " demands, got " +
           std::to_string(instance.demands().size());
  if (instance.cells() > std::numeric_limits<std::uint32_t>::max())
    return "dimension: m*n exceeds 2^32-1 cells";
  if (instance.costs().size() != instance.cells())
    return "dimension mismatch: expected " + std::to_string(instance.cells()) +
           " costs, got " + std::to_string(instance.costs().size());

  Flow total_supply = 0;
  for (Index i = 0; i < m; ++i) {
    if (instance.supply(i) < 0) return "negative supply at source " + std::to_string(i + 1);
    if (__builtin_add_overflow(total_supply, instance.supply(i), &total_supply))
      return "total supply overflows 64 bits";
  }
  Flow total_demand = 0;
  for (Index j = 0; j < n; ++j) {
    if (instance.demand(j) < 0)
      return "negative demand at destination " + std::to_string(j + 1);
    if (__builtin_add_overflow(total_demand, instance.demand(j), &total_demand))
      return "total demand overflows 64 bits";
  }
  for (std::size_t k = 0; k < instance.cells(); ++k) {
    if (instance.costs()[k] < 0)
      return "negative cost at cell (" + std::to_string(k / static_cast<std::size_t>(n) + 1) +
             "," + std::to_string(k % static_cast<std::size_t>(n) + 1) + ")";
  }
  if (total_supply != total_demand)
    return "unbalanced: total supply " + std::to_string(total_supply) + " != total demand " +
           std::to_string(total_demand);
  return std::nullopt;
}

inline void require_valid(const Instance& instance) {
  if (auto error = validate(instance)) throw InvalidInstance(*error);
}

/// Exact z = sum c_ij x_ij. Throws std::out_of_range on bad indices and
/// std::overflow_error instead of wrapping.
inline Objective objective(const Instance& instance, const FlowSolution& solution) {
  Objective z = 0;
  for (const auto& e : solution.entries) {
    if (e.source < 0 || e.source >= instance.sources() || e.destination < 0 ||
        e.destination >= instance.destinations())
      throw std::out_of_range("solution entry outside the instance");
    z = checked_add(z, checked_mul(instance.cost(e.source, e.destination), e.flow));
  }
  return z;
}

namespace detail {

/// Splits the stream into non-empty, non-comment lines of tokens.
class TokenLines {
 public:
  explicit TokenLines(std::istream& in) : in_(in) {}

  bool next(std::vector<std::string>& tokens) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      std::istringstream ls(line);
      tokens.clear();
      std::string tok;
      while (ls >> tok) tokens.push_back(tok);
      if (tokens.empty() || tokens.front().front() == '#') continue;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("line " + std::to_string(line_no_) + ": " + what);
  }

  std::int64_t integer(const std::string& tok) const {
    std::size_t used = 0;
    long long value = 0;
    try {
      value = std::stoll(tok, &used);
    } catch (const std::exception&) {
      fail("not an integer: '" + tok + "'");
    }
    if (used != tok.size()) fail("not an integer: '" + tok + "'");
    return value;
  }

  std::vector<std::int64_t> record(const std::string& tag, std::size_t arity) {
    std::vector<std::string> tokens;
    if (!next(tokens)) fail("unexpected end of input, expected '" + tag + "' line");
    if (tokens.front() != tag) fail("expected '" + tag + "' line, got '" + tokens.front() + "'");
    if (tokens.size() - 1 != arity)
      fail("'" + tag + "' line has " + std::to_string(tokens.size() - 1) + " values, expected " +
           std::to_string(arity));
    std::vector<std::int64_t> values;
    values.reserve(arity);
    for (std::size_t k = 1; k < tokens.size(); ++k) values.push_back(integer(tokens[k]));
    return values;
  }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

}  // namespace detail

/// Reads the `p tp m n` / `s` / `d` / `c` text format. The result is validated.
inline Instance read_instance(std::istream& in) {
  detail::TokenLines lines(in);
  std::vector<std::string> tokens;
  if (!lines.next(tokens)) lines.fail("empty input");
  if (tokens.size() != 4 || tokens[0] != "p" || tokens[1] != "tp")
    lines.fail("malformed header, expected 'p tp <m> <n>'");
  const auto m = lines.integer(tokens[2]);
  const auto n = lines.integer(tokens[3]);
  if (m < 1 || n < 1 || m > std::numeric_limits<Index>::max() / 2 ||
      n > std::numeric_limits<Index>::max() / 2)
    lines.fail("dimensions out of range");

  auto supplies = lines.record("s", static_cast<std::size_t>(m));
  auto demands = lines.record("d", static_cast<std::size_t>(n));
  std::vector<Cost> costs;
  costs.reserve(static_cast<std::size_t>(m) * static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < m; ++i) {
    auto row = lines.record("c", static_cast<std::size_t>(n));
    costs.insert(costs.end(), row.begin(), row.end());
  }
  if (lines.next(tokens)) lines.fail("trailing data after cost matrix");

  Instance instance(static_cast<Index>(m), static_cast<Index>(n), std::move(supplies),
                    std::move(demands), std::move(costs));
  if (auto error = validate(instance)) throw ParseError("invalid instance: " + *error);
  return instance;
}

inline void write_instance(std::ostream& out, const Instance& instance) {
  out << "p tp " << instance.sources() << ' ' << instance.destinations() << '\n';
  out << 's';
  for (Flow a : instance.supplies()) out << ' ' << a;
  out << "\nd";
  for (Flow b : instance.demands()) out << ' ' << b;
  out << '\n';
  for (Index i = 0; i < instance.sources(); ++i) {
    out << 'c';
    const Cost* row = instance.row(i);
    for (Index j = 0; j < instance.destinations(); ++j) out << ' ' << row[j];
    out << '\n';
  }
}

/// `o <objective>` then one `f <i> <j> <flow>` line per positive entry, 1-based.
inline void write_solution(std::ostream& out, const FlowSolution& solution) {
  out << "o " << to_string(solution.objective) << '\n';
  for (const auto& e : solution.entries) {
    if (e.flow > 0) out << "f " << e.source + 1 << ' ' << e.destination + 1 << ' ' << e.flow << '\n';
  }
}

inline FlowSolution read_solution(std::istream& in) {
  detail::TokenLines lines(in);
  std::vector<std::string> tokens;
  FlowSolution solution;
  if (!lines.next(tokens) || tokens.size() != 2 || tokens[0] != "o")
    lines.fail("expected 'o <objective>' line");
  // The objective may exceed 64 bits; parse it digit by digit.
  {
    const std::string& text = tokens[1];
    std::size_t pos = (text.front() == '-') ? 1 : 0;
    if (pos == text.size()) lines.fail("malformed objective");
    Objective z = 0;
    for (; pos < text.size(); ++pos) {
      if (text[pos] < '0' || text[pos] > '9') lines.fail("malformed objective");
      z = checked_add(checked_mul(z, 10), text[pos] - '0');
    }
    solution.objective = text.front() == '-' ? -z : z;
  }
  while (lines.next(tokens)) {
    if (tokens.size() != 4 || tokens[0] != "f") lines.fail("expected 'f <i> <j> <flow>' line");
    const auto i = lines.integer(tokens[1]);
    const auto j = lines.integer(tokens[2]);
    const auto x = lines.integer(tokens[3]);
    if (i < 1 || j < 1 || i > std::numeric_limits<Index>::max() ||
        j > std::numeric_limits<Index>::max())
      lines.fail("index out of range");
    solution.entries.push_back({static_cast<Index>(i - 1), static_cast<Index>(j - 1), x});
  }
  return solution;
}

}  // namespace iio
