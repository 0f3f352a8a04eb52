#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace tnn {

// Rank-1 `[features]` or rank-2 `[timesteps, features]` extents.
class TensorShape {
 public:
  TensorShape() = default;
  explicit TensorShape(std::vector<std::size_t> dims);
  TensorShape(std::initializer_list<std::size_t> dims)
      : TensorShape(std::vector<std::size_t>(dims)) {}

  std::size_t rank() const { return dims_.size(); }
  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t operator[](std::size_t i) const { return dims_.at(i); }

  // Rank-1 shapes report a single timestep.
  std::size_t timesteps() const { return rank() == 2 ? dims_[0] : 1; }
  std::size_t features() const { return dims_.back(); }
  std::size_t element_count() const;

  std::string to_string() const;  // "24x20"

  friend bool operator==(const TensorShape&, const TensorShape&) = default;

 private:
  std::vector<std::size_t> dims_;
};

enum class Activation { kLinear, kRelu, kTanh, kSigmoid };

std::string_view to_string(Activation act);
Activation activation_from_string(std::string_view name);

struct DenseSpec {
  std::size_t units = 1;
  Activation activation = Activation::kLinear;
  friend bool operator==(const DenseSpec&, const DenseSpec&) = default;
};

// Valid padding only.
struct Conv1DSpec {
  std::size_t filters = 1;
  std::size_t kernel = 1;
  std::size_t stride = 1;
  Activation activation = Activation::kLinear;
  friend bool operator==(const Conv1DSpec&, const Conv1DSpec&) = default;
};

struct MaxPool1DSpec {
  std::size_t pool = 2;
  std::size_t stride = 2;
  friend bool operator==(const MaxPool1DSpec&, const MaxPool1DSpec&) = default;
};

struct BatchNormSpec {
  float epsilon = 1e-3f;
  friend bool operator==(const BatchNormSpec&, const BatchNormSpec&) = default;
};

struct LstmSpec {
  std::size_t units = 1;
  bool return_sequences = false;
  friend bool operator==(const LstmSpec&, const LstmSpec&) = default;
};

using LayerSpec =
    std::variant<DenseSpec, Conv1DSpec, MaxPool1DSpec, BatchNormSpec, LstmSpec>;

enum class LayerKind { kDense, kConv1D, kMaxPool1D, kBatchNorm, kLstm };

LayerKind kind_of(const LayerSpec& layer);
std::string_view to_string(LayerKind kind);
LayerKind layer_kind_from_string(std::string_view name);

// Ordered linear chain of layers. Output shapes are filled in by
// `infer_shapes`; an unresolved graph has none.
class Graph {
 public:
  Graph() = default;
  Graph(std::string name, TensorShape input_shape, std::vector<LayerSpec> layers)
      : name_(std::move(name)),
        input_shape_(std::move(input_shape)),
        layers_(std::move(layers)) {}

  const std::string& name() const { return name_; }
  const TensorShape& input_shape() const { return input_shape_; }
  const std::vector<LayerSpec>& layers() const { return layers_; }
  std::size_t size() const { return layers_.size(); }

  bool resolved() const { return !layers_.empty() && output_shapes_.size() == layers_.size(); }
  const std::vector<TensorShape>& output_shapes() const { return output_shapes_; }
  const TensorShape& layer_input_shape(std::size_t i) const;
  const TensorShape& layer_output_shape(std::size_t i) const;
  const TensorShape& output_shape() const { return layer_output_shape(size() - 1); }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  friend Graph infer_shapes(const Graph& graph);

  std::string name_;
  TensorShape input_shape_;
  std::vector<LayerSpec> layers_;
  std::vector<TensorShape> output_shapes_;
};

// Throws ShapeMismatch (or InvalidArgument for a bad attribute / empty chain).
Graph infer_shapes(const Graph& graph);

enum class WeightRole {
  kKernel,     // dense W[out][in], conv W[filters][kernel][in_ch], lstm W[4U][in]
  kRecurrent,  // lstm U[4U][U]
  kBias,
  kGamma,
  kBeta,
  kMovingMean,
  kMovingVariance,
};

std::string_view to_string(WeightRole role);
WeightRole weight_role_from_string(std::string_view name);

struct WeightSlot {
  WeightRole role;
  std::vector<std::size_t> shape;
  bool trainable = true;

  std::size_t element_count() const;
};

// Roles in storage order for layer `i` of a resolved graph.
std::vector<WeightSlot> weight_slots(const Graph& graph, std::size_t i);

std::uint64_t layer_param_count(const Graph& graph, std::size_t i);
std::uint64_t param_count(const Graph& graph);
// Trainable plus non-trainable stored values (batchnorm moving statistics).
std::uint64_t layer_stored_count(const Graph& graph, std::size_t i);
std::uint64_t stored_weight_count(const Graph& graph);

struct MaccCount {
  std::vector<std::uint64_t> per_layer;
  std::uint64_t total = 0;
};

MaccCount macc_count(const Graph& graph);

// Immutable-after-build map from (layer index, role) to values.
class WeightStore {
 public:
  using Key = std::pair<std::size_t, WeightRole>;

  void set(std::size_t layer, WeightRole role, std::vector<float> values);
  bool contains(std::size_t layer, WeightRole role) const;
  const std::vector<float>& get(std::size_t layer, WeightRole role) const;
  std::size_t total_elements() const;
  const std::map<Key, std::vector<float>>& entries() const { return tensors_; }

  friend bool operator==(const WeightStore&, const WeightStore&) = default;

 private:
  std::map<Key, std::vector<float>> tensors_;
};

// Throws IncompleteWeights, BlobMismatch (wrong length), NonFiniteWeight or
// NegativeVariance.
void validate_weights(const Graph& graph, const WeightStore& weights);

}  // namespace tnn
