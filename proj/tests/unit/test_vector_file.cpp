#include <cstring>
#include <filesystem>

#include "doctest.h"
#include "support/random.hpp"
#include "tnn/error.hpp"
#include "tnn/vector_file.hpp"

using namespace tnn;

namespace {

ErrorCode decode_error(const std::vector<std::uint8_t>& bytes) {
  try {
    decode_vector_file(bytes);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("decode accepted a malformed file");
  return ErrorCode::kIoError;
}

}  // namespace

TEST_CASE("layout is bit exact") {
  const VectorFile f = make_vector_file(2, {1.0f, -0.0f, 0.5f, -2.0f});
  const auto bytes = encode_vector_file(f);
  REQUIRE(bytes.size() == 12 + 16);
  CHECK(std::memcmp(bytes.data(), "TNNV", 4) == 0);
  CHECK(std::vector<std::uint8_t>(bytes.begin() + 4, bytes.begin() + 12) ==
        std::vector<std::uint8_t>{2, 0, 0, 0, 2, 0, 0, 0});
  // 1.0f little-endian, then -0.0f.
  CHECK(std::vector<std::uint8_t>(bytes.begin() + 12, bytes.begin() + 20) ==
        std::vector<std::uint8_t>{0x00, 0x00, 0x80, 0x3F, 0x00, 0x00, 0x00, 0x80});
  CHECK(decode_vector_file(bytes) == f);
}

TEST_CASE("empty file and timing trailer") {
  const VectorFile empty = make_vector_file(480, {});
  CHECK(empty.count == 0);
  CHECK(decode_vector_file(encode_vector_file(empty)) == empty);

  VectorFile timed = make_vector_file(1, {3.0f});
  timed.median_ns = 123456789012ull;
  const auto bytes = encode_vector_file(timed);
  CHECK(bytes.size() == 12 + 4 + 8);
  CHECK(decode_vector_file(bytes).median_ns == 123456789012ull);
}

TEST_CASE("random round trips") {
  testing::Rng rng(4);
  for (int k = 0; k < 200; ++k) {
    const auto len = static_cast<std::uint32_t>(rng.between(1, 16));
    const VectorFile f = make_vector_file(len, rng.floats(len * rng.between(0, 10), -1e6f, 1e6f));
    const VectorFile back = decode_vector_file(encode_vector_file(f));
    CHECK(back == f);
    CHECK(back.vector(back.count ? back.count - 1 : 0).size() == (back.count ? len : len));
  }
}

TEST_CASE("malformed files") {
  auto bytes = encode_vector_file(make_vector_file(3, {1, 2, 3, 4, 5, 6}));
  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  CHECK(decode_error(bad_magic) == ErrorCode::kParseError);
  auto truncated = bytes;
  truncated.pop_back();
  CHECK(decode_error(truncated) == ErrorCode::kParseError);
  CHECK(decode_error({'T', 'N', 'N'}) == ErrorCode::kParseError);
  auto odd_trailer = bytes;
  odd_trailer.push_back(0);
  CHECK(decode_error(odd_trailer) == ErrorCode::kParseError);
}

TEST_CASE("files on disk") {
  const auto path = std::filesystem::temp_directory_path() / "tnn_vector_file_test.tnnv";
  const VectorFile f = make_vector_file(4, {1, 2, 3, 4});
  write_vector_file(path, f);
  CHECK(read_vector_file(path) == f);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_vector_file(path), Error);
}
