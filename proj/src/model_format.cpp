#include "tnn/model_format.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "json.hpp"
#include "tnn/error.hpp"

namespace tnn {

namespace {

using nlohmann::json;

static_assert(std::numeric_limits<float>::is_iec559);

json layer_to_json(const LayerSpec& spec) {
  json j;
  j["kind"] = to_string(kind_of(spec));
  if (auto* d = std::get_if<DenseSpec>(&spec)) {
    j["units"] = d->units;
    j["activation"] = to_string(d->activation);
  } else if (auto* c = std::get_if<Conv1DSpec>(&spec)) {
    j["filters"] = c->filters;
    j["kernel"] = c->kernel;
    j["stride"] = c->stride;
    j["padding"] = "valid";
    j["activation"] = to_string(c->activation);
  } else if (auto* p = std::get_if<MaxPool1DSpec>(&spec)) {
    j["pool"] = p->pool;
    j["stride"] = p->stride;
  } else if (auto* b = std::get_if<BatchNormSpec>(&spec)) {
    j["epsilon"] = b->epsilon;
  } else if (auto* l = std::get_if<LstmSpec>(&spec)) {
    j["units"] = l->units;
    j["return_sequences"] = l->return_sequences;
  }
  return j;
}

[[noreturn]] void parse_fail(const std::string& msg) { throw Error(ErrorCode::kParseError, msg); }

std::size_t positive_field(const json& j, const char* key, std::size_t fallback, bool required) {
  if (!j.contains(key)) {
    if (required) parse_fail(std::string("layer is missing '") + key + "'");
    return fallback;
  }
  const json& v = j.at(key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 1) {
    parse_fail(std::string("'") + key + "' must be a positive integer");
  }
  return v.get<std::size_t>();
}

LayerSpec layer_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    parse_fail("layer descriptor needs a string 'kind'");
  }
  const auto activation = [&]() {
    if (!j.contains("activation")) return Activation::kLinear;
    if (!j.at("activation").is_string()) parse_fail("'activation' must be a string");
    return activation_from_string(j.at("activation").get<std::string>());
  };
  switch (layer_kind_from_string(j.at("kind").get<std::string>())) {
    case LayerKind::kDense:
      return DenseSpec{positive_field(j, "units", 1, true), activation()};
    case LayerKind::kConv1D: {
      if (j.contains("padding") && j.at("padding") != "valid") {
        parse_fail("conv1d supports only 'valid' padding");
      }
      return Conv1DSpec{positive_field(j, "filters", 1, true), positive_field(j, "kernel", 1, true),
                        positive_field(j, "stride", 1, false), activation()};
    }
    case LayerKind::kMaxPool1D: {
      const std::size_t pool = positive_field(j, "pool", 2, false);
      return MaxPool1DSpec{pool, positive_field(j, "stride", pool, false)};
    }
    case LayerKind::kBatchNorm: {
      BatchNormSpec b;
      if (j.contains("epsilon")) {
        if (!j.at("epsilon").is_number()) parse_fail("'epsilon' must be a number");
        b.epsilon = static_cast<float>(j.at("epsilon").get<double>());
      }
      return b;
    }
    case LayerKind::kLstm: {
      LstmSpec l{positive_field(j, "units", 1, true), false};
      if (j.contains("return_sequences")) {
        if (!j.at("return_sequences").is_boolean()) parse_fail("'return_sequences' must be a bool");
        l.return_sequences = j.at("return_sequences").get<bool>();
      }
      return l;
    }
  }
  parse_fail("unreachable layer kind");
}

std::vector<std::size_t> shape_from_json(const json& j) {
  if (!j.is_array() || j.empty()) parse_fail("shape must be a non-empty array");
  std::vector<std::size_t> dims;
  for (const json& d : j) {
    if (!d.is_number_integer() || d.get<std::int64_t>() < 1) parse_fail("shape extents must be positive integers");
    dims.push_back(d.get<std::size_t>());
  }
  return dims;
}

}  // namespace

std::vector<std::uint8_t> pack_f32_le(std::span<const float> values) {
  std::vector<std::uint8_t> out(values.size() * 4);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto bits = std::bit_cast<std::uint32_t>(values[i]);
    for (int b = 0; b < 4; ++b) out[4 * i + b] = static_cast<std::uint8_t>(bits >> (8 * b));
  }
  return out;
}

std::vector<float> unpack_f32_le(std::span<const std::uint8_t> bytes) {
  if (bytes.size() % 4 != 0) {
    throw Error(ErrorCode::kBlobMismatch, "byte length is not a multiple of 4");
  }
  std::vector<float> out(bytes.size() / 4);
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::uint32_t bits = 0;
    for (int b = 0; b < 4; ++b) bits |= std::uint32_t{bytes[4 * i + b]} << (8 * b);
    out[i] = std::bit_cast<float>(bits);
  }
  return out;
}

std::string sha256_hex(std::span<const std::uint8_t> bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::kIoError, "sha256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xF];
  }
  return out;
}

Model load_model(std::string_view manifest_text, std::span<const std::uint8_t> blob) {
  json m;
  try {
    m = json::parse(manifest_text);
  } catch (const json::exception& e) {
    parse_fail(std::string("manifest is not valid JSON: ") + e.what());
  }
  if (!m.is_object()) parse_fail("manifest must be an object");
  if (!m.contains("format") || m.at("format") != kFormatTag) {
    parse_fail(std::string("format tag must be '") + kFormatTag + "'");
  }
  if (!m.contains("name") || !m.at("name").is_string()) parse_fail("manifest needs a string 'name'");
  if (!m.contains("input_shape")) parse_fail("manifest needs 'input_shape'");
  if (!m.contains("layers") || !m.at("layers").is_array()) parse_fail("manifest needs a 'layers' array");

  std::vector<LayerSpec> layers;
  for (const json& l : m.at("layers")) layers.push_back(layer_from_json(l));
  if (layers.empty()) parse_fail("manifest has no layers");

  Graph graph;
  try {
    graph = infer_shapes(Graph(m.at("name").get<std::string>(),
                               TensorShape(shape_from_json(m.at("input_shape"))), std::move(layers)));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kParseError) throw;
    parse_fail(std::string("graph is not shape-consistent: ") + e.what());
  }

  if (blob.size() % 4 != 0) throw Error(ErrorCode::kBlobMismatch, "blob length is not a multiple of 4");
  if (m.contains("sha256")) {
    if (!m.at("sha256").is_string()) parse_fail("'sha256' must be a string");
    if (m.at("sha256").get<std::string>() != sha256_hex(blob)) {
      throw Error(ErrorCode::kBlobMismatch, "blob sha256 digest does not match manifest");
    }
  }
  const std::vector<float> values = unpack_f32_le(blob);

  WeightStore weights;
  std::vector<std::pair<std::size_t, std::size_t>> ranges;
  for (std::size_t i = 0; i < graph.size(); ++i) {
    const json& lj = m.at("layers")[i];
    const json empty = json::object();
    const json& wj = lj.contains("weights") ? lj.at("weights") : empty;
    if (!wj.is_object()) parse_fail("layer 'weights' must be an object");
    const std::vector<WeightSlot> slots = weight_slots(graph, i);
    if (wj.size() != slots.size()) {
      throw Error(ErrorCode::kBlobMismatch, "layer " + std::to_string(i) + " references " +
                                                std::to_string(wj.size()) + " tensors, expected " +
                                                std::to_string(slots.size()));
    }
    for (const WeightSlot& slot : slots) {
      const std::string role(to_string(slot.role));
      if (!wj.contains(role)) {
        throw Error(ErrorCode::kBlobMismatch, "layer " + std::to_string(i) + " lacks '" + role + "'");
      }
      const json& ref = wj.at(role);
      if (!ref.is_object() || !ref.contains("offset") || !ref.at("offset").is_number_unsigned()) {
        parse_fail("weight reference needs an unsigned 'offset'");
      }
      if (!ref.contains("shape") || shape_from_json(ref.at("shape")) != slot.shape) {
        throw Error(ErrorCode::kBlobMismatch, "layer " + std::to_string(i) + " '" + role +
                                                  "' shape disagrees with the layer spec");
      }
      const std::size_t offset = ref.at("offset").get<std::size_t>();
      const std::size_t count = slot.element_count();
      if (offset > values.size() || count > values.size() - offset) {
        throw Error(ErrorCode::kBlobMismatch, "layer " + std::to_string(i) + " '" + role +
                                                  "' runs past the end of the blob");
      }
      ranges.emplace_back(offset, count);
      weights.set(i, slot.role,
                  std::vector<float>(values.begin() + static_cast<std::ptrdiff_t>(offset),
                                     values.begin() + static_cast<std::ptrdiff_t>(offset + count)));
    }
  }

  std::sort(ranges.begin(), ranges.end());
  std::size_t referenced = 0;
  for (std::size_t k = 0; k < ranges.size(); ++k) {
    if (k > 0 && ranges[k - 1].first + ranges[k - 1].second > ranges[k].first) {
      throw Error(ErrorCode::kBlobMismatch, "weight references overlap");
    }
    referenced += ranges[k].second;
  }
  if (referenced != values.size()) {
    throw Error(ErrorCode::kBlobMismatch, "blob holds " + std::to_string(values.size()) +
                                              " values but manifest references " +
                                              std::to_string(referenced));
  }

  validate_weights(graph, weights);
  return Model{std::move(graph), std::move(weights)};
}

SerializedModel save_model(const Graph& graph, const WeightStore& weights) {
  if (graph.layers().empty()) {
    throw Error(ErrorCode::kIncompleteWeights, "cannot save a graph with no layers");
  }
  const Graph g = graph.resolved() ? graph : infer_shapes(graph);
  validate_weights(g, weights);

  json m;
  m["format"] = kFormatTag;
  m["name"] = g.name();
  m["input_shape"] = g.input_shape().dims();
  std::vector<float> flat;
  json layers = json::array();
  for (std::size_t i = 0; i < g.size(); ++i) {
    json lj = layer_to_json(g.layers()[i]);
    json wj = json::object();
    for (const WeightSlot& slot : weight_slots(g, i)) {
      const std::vector<float>& v = weights.get(i, slot.role);
      wj[std::string(to_string(slot.role))] = {{"offset", flat.size()}, {"shape", slot.shape}};
      flat.insert(flat.end(), v.begin(), v.end());
    }
    lj["weights"] = std::move(wj);
    lj["output_shape"] = g.layer_output_shape(i).dims();
    layers.push_back(std::move(lj));
  }
  m["layers"] = std::move(layers);
  SerializedModel out;
  out.blob = pack_f32_le(flat);
  m["blob_elements"] = flat.size();
  m["sha256"] = sha256_hex(out.blob);
  out.manifest = m.dump(2) + "\n";
  return out;
}

std::filesystem::path blob_path_for(const std::filesystem::path& manifest_path) {
  std::string file = manifest_path.filename().string();
  static constexpr std::string_view kSuffix = ".tnnf.json";
  if (file.size() > kSuffix.size() && file.ends_with(kSuffix)) {
    file.resize(file.size() - kSuffix.size());
  } else {
    file = manifest_path.stem().string();
  }
  return manifest_path.parent_path() / (file + ".weights.bin");
}

Model load_model_file(const std::filesystem::path& manifest_path) {
  const std::string text = read_file_text(manifest_path);
  const std::vector<std::uint8_t> blob = read_file_bytes(blob_path_for(manifest_path));
  return load_model(text, blob);
}

std::filesystem::path save_model_files(const std::filesystem::path& dir, const Graph& graph,
                                       const WeightStore& weights) {
  const SerializedModel s = save_model(graph, weights);
  const auto manifest_path = dir / (graph.name() + ".tnnf.json");
  write_file_text(manifest_path, s.manifest);
  write_file_bytes(blob_path_for(manifest_path), s.blob);
  return manifest_path;
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

std::string read_file_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIoError, "short write to " + path.string());
}

void write_file_text(const std::filesystem::path& path, std::string_view text) {
  write_file_bytes(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

}  // namespace tnn
