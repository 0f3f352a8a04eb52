#include "tnn/vector_file.hpp"

#include <cstring>

#include "tnn/error.hpp"
#include "tnn/model_format.hpp"

namespace tnn {

namespace {

constexpr std::uint8_t kMagic[4] = {'T', 'N', 'N', 'V'};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
}

std::uint64_t get_le(std::span<const std::uint8_t> bytes, std::size_t at, int width) {
  std::uint64_t v = 0;
  for (int b = 0; b < width; ++b) v |= std::uint64_t{bytes[at + b]} << (8 * b);
  return v;
}

}  // namespace

VectorFile make_vector_file(std::uint32_t length, std::vector<float> values) {
  if (length == 0 ? !values.empty() : values.size() % length != 0) {
    throw Error(ErrorCode::kLengthMismatch, "value count is not a multiple of the vector length");
  }
  VectorFile f;
  f.length = length;
  f.count = length == 0 ? 0 : static_cast<std::uint32_t>(values.size() / length);
  f.values = std::move(values);
  return f;
}

std::vector<std::uint8_t> encode_vector_file(const VectorFile& file) {
  if (file.values.size() != std::size_t{file.count} * file.length) {
    throw Error(ErrorCode::kLengthMismatch, "vector file payload disagrees with its header");
  }
  std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
  put_u32(out, file.count);
  put_u32(out, file.length);
  const auto payload = pack_f32_le(file.values);
  out.insert(out.end(), payload.begin(), payload.end());
  if (file.median_ns) {
    for (int b = 0; b < 8; ++b) out.push_back(static_cast<std::uint8_t>(*file.median_ns >> (8 * b)));
  }
  return out;
}

VectorFile decode_vector_file(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 12 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw Error(ErrorCode::kParseError, "not a TNNV vector file");
  }
  VectorFile f;
  f.count = static_cast<std::uint32_t>(get_le(bytes, 4, 4));
  f.length = static_cast<std::uint32_t>(get_le(bytes, 8, 4));
  const std::uint64_t payload = std::uint64_t{f.count} * f.length * 4;
  const std::uint64_t rest = bytes.size() - 12;
  if (rest != payload && rest != payload + 8) {
    throw Error(ErrorCode::kParseError, "vector file payload is " + std::to_string(rest) +
                                            " bytes, header implies " + std::to_string(payload));
  }
  f.values = unpack_f32_le(bytes.subspan(12, payload));
  if (rest == payload + 8) f.median_ns = get_le(bytes, 12 + payload, 8);
  return f;
}

VectorFile read_vector_file(const std::filesystem::path& path) {
  return decode_vector_file(read_file_bytes(path));
}

void write_vector_file(const std::filesystem::path& path, const VectorFile& file) {
  write_file_bytes(path, encode_vector_file(file));
}

}  // namespace tnn
