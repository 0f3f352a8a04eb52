#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "tnn/graph.hpp"
#include "tnn/memory_planner.hpp"

namespace tnn {

struct GeneratedBundle {
  std::string name;
  std::string header;          // <name>_model.h
  std::string source;          // <name>_model.c
  std::string weights_source;  // <name>_weights.c
  std::string report;          // JSON compile report

  std::string header_file() const { return name + "_model.h"; }
  std::string source_file() const { return name + "_model.c"; }
  std::string weights_file() const { return name + "_weights.c"; }
};

bool is_c_identifier(std::string_view name);

// Flat weight table in manifest order: layer by layer, slots in storage order.
std::vector<float> flatten_weights(const Graph& graph, const WeightStore& weights);

// Hex bit-pattern initializers for `<name>_weights`. Throws NonFiniteWeight.
std::string emit_weights_table(std::span<const float> values, std::string_view name);

// Throws InvalidIdentifier when `name` is not a usable C identifier.
GeneratedBundle generate(const Graph& graph, const WeightStore& weights, const MemoryPlan& plan,
                         const std::string& name);

void write_bundle(const GeneratedBundle& bundle, const std::filesystem::path& dir);

}  // namespace tnn
