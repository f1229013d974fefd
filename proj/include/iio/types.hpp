#pragma once

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>

namespace iio {

using Index = std::int32_t;
using Flow = std::int64_t;
using Cost = std::int64_t;

/// Exact objective value. 64-bit products of cost and flow summed over
/// up to m*n cells do not fit in 64 bits in general.
__extension__ typedef __int128 Objective;

enum class Side : std::uint8_t { source, destination };

/// A vertex of the bipartite graph. Sources occupy tree slots 0..m-1 and
/// destinations m..m+n-1.
struct NodeId {
  Side side = Side::source;
  Index index = 0;

  static constexpr NodeId source(Index i) { return {Side::source, i}; }
  static constexpr NodeId destination(Index j) { return {Side::destination, j}; }

  constexpr Index slot(Index m) const { return side == Side::source ? index : m + index; }
  static constexpr NodeId from_slot(Index slot, Index m) {
    return slot < m ? source(slot) : destination(slot - m);
  }

  friend constexpr bool operator==(const NodeId&, const NodeId&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const NodeId& node) {
  return os << (node.side == Side::source ? 's' : 'd') << node.index + 1;
}

inline std::string to_string(Objective value) {
  if (value == 0) return "0";
  const bool negative = value < 0;
  // Work in the negative range so the minimum value does not overflow.
  Objective v = negative ? value : -value;
  std::string digits;
  while (v != 0) {
    digits.push_back(static_cast<char>('0' - static_cast<int>(v % 10)));
    v /= 10;
  }
  if (negative) digits.push_back('-');
  return {digits.rbegin(), digits.rend()};
}

inline Objective checked_add(Objective a, Objective b) {
  Objective out;
  if (__builtin_add_overflow(a, b, &out)) throw std::overflow_error("objective overflow");
  return out;
}

inline Objective checked_mul(Objective a, Objective b) {
  Objective out;
  if (__builtin_mul_overflow(a, b, &out)) throw std::overflow_error("objective overflow");
  return out;
}

}  // namespace iio
