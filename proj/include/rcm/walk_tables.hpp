#pragma once

#include <cstdint>
#include <vector>

#include "rcm/environment.hpp"

namespace rcm {

// Walker alias tables for O(1) jump sampling, one table per site. Slot k of a
// site picks `target[k]` with probability `prob[k]`, otherwise
// `alias_target[k]`. Target kExit means the jump leaves the box.
struct Environment::WalkTables {
  static constexpr std::int64_t kExit = -1;

  std::vector<std::int64_t> offset;        // site -> first slot, size n+1
  std::vector<double> prob;
  std::vector<std::int64_t> target;
  std::vector<std::int64_t> alias_target;

  std::int64_t sample(std::int64_t site, double u_slot, double u_accept) const {
    const std::int64_t lo = offset[static_cast<std::size_t>(site)];
    const std::int64_t k = offset[static_cast<std::size_t>(site) + 1] - lo;
    std::int64_t j = lo + static_cast<std::int64_t>(u_slot * static_cast<double>(k));
    if (j >= lo + k) j = lo + k - 1;
    return u_accept <= prob[static_cast<std::size_t>(j)]
               ? target[static_cast<std::size_t>(j)]
               : alias_target[static_cast<std::size_t>(j)];
  }
};

}  // namespace rcm
