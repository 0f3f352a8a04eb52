#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "tnn/graph.hpp"

namespace tnn {

inline constexpr std::size_t kArenaAlignment = 8;

enum class BufferKind { kInput, kActivation, kState, kScratch };

std::string_view to_string(BufferKind kind);

// Layer i executes at step i. A buffer occupies its bytes from the step of
// its first writer through the step of its last reader, inclusive. The graph
// input is written before step 0.
struct BufferLifetime {
  std::size_t id = 0;
  std::size_t bytes = 0;  // element_count * 4
  std::size_t first = 0;
  std::size_t last = 0;
  BufferKind kind = BufferKind::kActivation;
  int owner_layer = -1;  // -1 for the graph input
  // Root buffer whose storage this one reuses in place (batchnorm, maxpool).
  std::optional<std::size_t> alias_of;

  std::size_t aligned_bytes() const {
    return (bytes + kArenaAlignment - 1) / kArenaAlignment * kArenaAlignment;
  }
  bool overlaps_in_time(const BufferLifetime& o) const { return first <= o.last && o.first <= last; }
  std::size_t root() const { return alias_of.value_or(id); }

  friend bool operator==(const BufferLifetime&, const BufferLifetime&) = default;
};

struct MemoryPlan {
  std::size_t arena_bytes = 0;
  std::vector<BufferLifetime> buffers;  // indexed by id
  std::vector<std::size_t> offsets;     // byte offset per buffer id
  std::uint64_t flash_bytes = 0;
  std::size_t state_bytes = 0;
  std::size_t input_buffer = 0;
  std::vector<std::size_t> layer_output;  // buffer id written by layer i
  std::vector<std::optional<std::size_t>> layer_state;    // lstm h then c
  std::vector<std::optional<std::size_t>> layer_scratch;  // lstm gate preactivations

  std::size_t offset_of(std::size_t id) const { return offsets.at(id); }

  friend bool operator==(const MemoryPlan&, const MemoryPlan&) = default;
};

// True when the layer's output is written over its input buffer.
bool runs_in_place(const LayerSpec& layer);

std::vector<BufferLifetime> buffer_lifetimes(const Graph& graph);

// Greedy first-fit by decreasing size over live intervals. Buffers sharing a
// root are placed at one offset. Returns offsets indexed by id.
std::vector<std::size_t> place_buffers(const std::vector<BufferLifetime>& buffers,
                                       std::size_t* arena_bytes);

MemoryPlan plan(const Graph& graph);

std::uint64_t flash_estimate(const Graph& graph);

}  // namespace tnn
