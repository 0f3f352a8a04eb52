#include "tnn/memory_planner.hpp"

#include <algorithm>
#include <map>

#include "tnn/error.hpp"

namespace tnn {

std::string_view to_string(BufferKind kind) {
  switch (kind) {
    case BufferKind::kInput: return "input";
    case BufferKind::kActivation: return "activation";
    case BufferKind::kState: return "state";
    case BufferKind::kScratch: return "scratch";
  }
  return "activation";
}

bool runs_in_place(const LayerSpec& layer) {
  const LayerKind k = kind_of(layer);
  return k == LayerKind::kBatchNorm || k == LayerKind::kMaxPool1D;
}

std::vector<BufferLifetime> buffer_lifetimes(const Graph& graph) {
  if (!graph.resolved()) throw Error(ErrorCode::kInvalidArgument, "graph shapes are not resolved");
  const std::size_t n = graph.size();
  std::vector<BufferLifetime> out;
  out.push_back({0, graph.input_shape().element_count() * 4, 0, 0, BufferKind::kInput, -1, {}});
  std::size_t previous = 0;
  for (std::size_t i = 0; i < n; ++i) {
    BufferLifetime y;
    y.id = out.size();
    y.bytes = graph.layer_output_shape(i).element_count() * 4;
    y.first = i;
    y.last = i + 1 < n ? i + 1 : i;
    y.kind = BufferKind::kActivation;
    y.owner_layer = static_cast<int>(i);
    if (runs_in_place(graph.layers()[i])) y.alias_of = out[previous].root();
    out.push_back(y);
    previous = y.id;
    if (const auto* l = std::get_if<LstmSpec>(&graph.layers()[i])) {
      out.push_back({out.size(), 2 * l->units * 4, i, i, BufferKind::kState, static_cast<int>(i), {}});
      out.push_back({out.size(), 4 * l->units * 4, i, i, BufferKind::kScratch, static_cast<int>(i), {}});
    }
  }
  return out;
}

std::vector<std::size_t> place_buffers(const std::vector<BufferLifetime>& buffers,
                                       std::size_t* arena_bytes) {
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (const BufferLifetime& b : buffers) groups[b.root()].push_back(b.id);

  struct Group {
    std::size_t root;
    std::size_t bytes;
    std::vector<std::size_t> members;
  };
  std::vector<Group> order;
  for (auto& [root, members] : groups) {
    std::size_t bytes = 0;
    for (std::size_t id : members) bytes = std::max(bytes, buffers[id].aligned_bytes());
    order.push_back({root, bytes, members});
  }
  std::stable_sort(order.begin(), order.end(),
                   [](const Group& a, const Group& b) { return a.bytes > b.bytes; });

  std::vector<std::size_t> offsets(buffers.size(), 0);
  std::vector<const Group*> placed;
  std::size_t arena = 0;
  for (const Group& g : order) {
    // Byte ranges already claimed by buffers that are live alongside a member.
    struct Claim {
      std::size_t member, begin, end;
    };
    std::vector<Claim> claims;
    for (const Group* h : placed) {
      for (std::size_t m : g.members) {
        for (std::size_t o : h->members) {
          if (buffers[m].overlaps_in_time(buffers[o])) {
            const std::size_t begin = offsets[o];
            claims.push_back({m, begin, begin + buffers[o].aligned_bytes()});
          }
        }
      }
    }
    std::vector<std::size_t> candidates{0};
    for (const Claim& c : claims) candidates.push_back(c.end);
    std::sort(candidates.begin(), candidates.end());

    std::size_t chosen = candidates.back();
    for (std::size_t cand : candidates) {
      const bool fits = std::none_of(claims.begin(), claims.end(), [&](const Claim& c) {
        const std::size_t end = cand + buffers[c.member].aligned_bytes();
        return cand < c.end && c.begin < end;
      });
      if (fits) {
        chosen = cand;
        break;
      }
    }
    for (std::size_t m : g.members) {
      offsets[m] = chosen;
      arena = std::max(arena, chosen + buffers[m].aligned_bytes());
    }
    placed.push_back(&g);
  }
  if (arena_bytes) *arena_bytes = arena;
  return offsets;
}

std::uint64_t flash_estimate(const Graph& graph) { return 4 * stored_weight_count(graph); }

MemoryPlan plan(const Graph& graph) {
  MemoryPlan p;
  p.buffers = buffer_lifetimes(graph);
  p.offsets = place_buffers(p.buffers, &p.arena_bytes);
  p.flash_bytes = flash_estimate(graph);
  p.layer_output.resize(graph.size());
  p.layer_state.resize(graph.size());
  p.layer_scratch.resize(graph.size());
  for (const BufferLifetime& b : p.buffers) {
    if (b.owner_layer < 0) {
      p.input_buffer = b.id;
      continue;
    }
    const auto layer = static_cast<std::size_t>(b.owner_layer);
    switch (b.kind) {
      case BufferKind::kActivation: p.layer_output[layer] = b.id; break;
      case BufferKind::kState:
        p.layer_state[layer] = b.id;
        p.state_bytes += b.bytes;
        break;
      case BufferKind::kScratch: p.layer_scratch[layer] = b.id; break;
      case BufferKind::kInput: break;
    }
  }
  return p;
}

}  // namespace tnn
