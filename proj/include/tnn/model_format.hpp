#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "tnn/graph.hpp"

namespace tnn {

inline constexpr const char* kFormatTag = "tnnf-v1";

struct Model {
  Graph graph;  // shapes resolved
  WeightStore weights;
};

struct SerializedModel {
  std::string manifest;             // canonical JSON text
  std::vector<std::uint8_t> blob;   // headerless little-endian binary32
};

// Throws ParseError, BlobMismatch or NonFiniteWeight; never returns a
// partially built model.
Model load_model(std::string_view manifest_text, std::span<const std::uint8_t> blob);

// Throws IncompleteWeights when the graph is empty or a tensor is missing.
SerializedModel save_model(const Graph& graph, const WeightStore& weights);

// `<dir>/<name>.tnnf.json` + `<dir>/<name>.weights.bin`.
std::filesystem::path blob_path_for(const std::filesystem::path& manifest_path);
Model load_model_file(const std::filesystem::path& manifest_path);
std::filesystem::path save_model_files(const std::filesystem::path& dir, const Graph& graph,
                                       const WeightStore& weights);

std::string sha256_hex(std::span<const std::uint8_t> bytes);

// Little-endian binary32 packing shared by the blob and vector files.
std::vector<std::uint8_t> pack_f32_le(std::span<const float> values);
std::vector<float> unpack_f32_le(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
std::string read_file_text(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_file_text(const std::filesystem::path& path, std::string_view text);

}  // namespace tnn
