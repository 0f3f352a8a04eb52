#pragma once

// Brute-force checks for memory plans. Buffers that share a root are one
// piece of storage reused in place and are exempt from the disjointness rule.

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "tnn/memory_planner.hpp"

namespace tnn::testing {

struct PlanVerdict {
  bool ok = true;
  std::string message;
};

inline PlanVerdict check_plan(const MemoryPlan& p) {
  const auto& b = p.buffers;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const std::size_t oi = p.offsets[i];
    if (oi % kArenaAlignment != 0) return {false, "misaligned buffer " + std::to_string(i)};
    if (oi + b[i].bytes > p.arena_bytes) return {false, "buffer past arena end " + std::to_string(i)};
    for (std::size_t j = i + 1; j < b.size(); ++j) {
      if (b[i].root() == b[j].root() || !b[i].overlaps_in_time(b[j])) continue;
      const std::size_t oj = p.offsets[j];
      if (oi < oj + b[j].bytes && oj < oi + b[i].bytes) {
        return {false, "live buffers " + std::to_string(i) + " and " + std::to_string(j) + " overlap"};
      }
    }
  }
  return {};
}

// Peak over steps of the storage that must coexist.
inline std::size_t live_lower_bound(const std::vector<BufferLifetime>& b) {
  std::size_t last_step = 0;
  for (const auto& x : b) last_step = std::max(last_step, x.last);
  std::size_t peak = 0;
  for (std::size_t t = 0; t <= last_step; ++t) {
    std::map<std::size_t, std::size_t> per_root;
    for (const auto& x : b) {
      if (x.first <= t && t <= x.last) per_root[x.root()] = std::max(per_root[x.root()], x.aligned_bytes());
    }
    std::size_t total = 0;
    for (const auto& [root, bytes] : per_root) total += bytes;
    peak = std::max(peak, total);
  }
  return peak;
}

inline std::size_t no_reuse_upper_bound(const std::vector<BufferLifetime>& b) {
  std::size_t total = 0;
  for (const auto& x : b) total += x.aligned_bytes();
  return total;
}

}  // namespace tnn::testing
