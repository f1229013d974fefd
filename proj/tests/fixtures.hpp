#pragma once

#include <vector>

#include "iio/instance.hpp"

namespace fixture {

/// The 3x3 worked example: a = [30 30 30], b = [20 50 20].
inline iio::Instance small() {
  return iio::Instance(3, 3, {30, 30, 30}, {20, 50, 20}, {5, 1, 7, 1, 1, 5, 6, 1, 2});
}

/// Its stated starting basis, z = 250.
inline std::vector<iio::FlowEntry> small_start() {
  return {{0, 0, 20}, {0, 1, 10}, {1, 1, 10}, {1, 2, 20}, {2, 1, 30}};
}

/// Its optimum, z = 110.
inline std::vector<iio::FlowEntry> small_optimum() {
  return {{0, 1, 30}, {1, 0, 20}, {1, 1, 10}, {2, 1, 10}, {2, 2, 20}};
}

inline const char* small_text() {
  return "# worked example\n"
         "p tp 3 3\n"
         "s 30 30 30\n"
         "d 20 50 20\n"
         "c 5 1 7\n"
         "c 1 1 5\n"
         "c 6 1 2\n";
}

}  // namespace fixture
