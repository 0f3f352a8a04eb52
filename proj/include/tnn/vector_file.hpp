#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

namespace tnn {

// "TNNV" | u32 count | u32 length | count*length binary32, all little-endian.
// An optional trailing u64 carries the harness's median inference time (ns).
struct VectorFile {
  std::uint32_t count = 0;
  std::uint32_t length = 0;
  std::vector<float> values;
  std::optional<std::uint64_t> median_ns;

  std::span<const float> vector(std::size_t i) const {
    return std::span<const float>(values).subspan(i * length, length);
  }

  friend bool operator==(const VectorFile&, const VectorFile&) = default;
};

VectorFile make_vector_file(std::uint32_t length, std::vector<float> values);

std::vector<std::uint8_t> encode_vector_file(const VectorFile& file);
// Throws ParseError on bad magic or a payload that disagrees with the header.
VectorFile decode_vector_file(std::span<const std::uint8_t> bytes);

VectorFile read_vector_file(const std::filesystem::path& path);
void write_vector_file(const std::filesystem::path& path, const VectorFile& file);

}  // namespace tnn
