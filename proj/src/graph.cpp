#include "tnn/graph.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "tnn/error.hpp"

namespace tnn {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::size_t product(const std::vector<std::size_t>& dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1},
                         std::multiplies<>());
}

void require_positive(std::size_t value, const char* what, std::size_t layer) {
  if (value < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "layer " + std::to_string(layer) + ": " + what + " must be >= 1");
  }
}

[[noreturn]] void shape_error(std::size_t layer, const std::string& msg) {
  throw Error(ErrorCode::kShapeMismatch, "layer " + std::to_string(layer) + ": " + msg);
}

TensorShape resolve_layer(const LayerSpec& spec, const TensorShape& in, std::size_t i) {
  return std::visit(
      Overloaded{
          [&](const DenseSpec& d) {
            require_positive(d.units, "units", i);
            if (in.rank() == 2) return TensorShape{in[0], d.units};
            return TensorShape{d.units};
          },
          [&](const Conv1DSpec& c) {
            require_positive(c.filters, "filters", i);
            require_positive(c.kernel, "kernel", i);
            require_positive(c.stride, "stride", i);
            if (in.rank() != 2) shape_error(i, "conv1d needs [timesteps, channels] input, got " + in.to_string());
            if (c.kernel > in[0]) shape_error(i, "kernel exceeds timesteps of " + in.to_string());
            return TensorShape{(in[0] - c.kernel) / c.stride + 1, c.filters};
          },
          [&](const MaxPool1DSpec& p) {
            require_positive(p.pool, "pool", i);
            require_positive(p.stride, "stride", i);
            if (in.rank() != 2) shape_error(i, "maxpool1d needs [timesteps, channels] input, got " + in.to_string());
            if (p.pool > in[0]) shape_error(i, "pool exceeds timesteps of " + in.to_string());
            return TensorShape{(in[0] - p.pool) / p.stride + 1, in[1]};
          },
          [&](const BatchNormSpec& b) {
            if (!(b.epsilon >= 0.0f) || !std::isfinite(b.epsilon)) {
              throw Error(ErrorCode::kInvalidArgument,
                          "layer " + std::to_string(i) + ": epsilon must be finite and >= 0");
            }
            return in;
          },
          [&](const LstmSpec& l) {
            require_positive(l.units, "units", i);
            if (in.rank() != 2) shape_error(i, "lstm needs [timesteps, features] input, got " + in.to_string());
            if (l.return_sequences) return TensorShape{in[0], l.units};
            return TensorShape{l.units};
          },
      },
      spec);
}

}  // namespace

TensorShape::TensorShape(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
  if (dims_.empty() || dims_.size() > 2) {
    throw Error(ErrorCode::kShapeMismatch, "tensor rank must be 1 or 2");
  }
  for (std::size_t d : dims_) {
    if (d < 1) throw Error(ErrorCode::kShapeMismatch, "tensor extents must be >= 1");
  }
}

std::size_t TensorShape::element_count() const { return product(dims_); }

std::string TensorShape::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (i) out += 'x';
    out += std::to_string(dims_[i]);
  }
  return out;
}

std::string_view to_string(Activation act) {
  switch (act) {
    case Activation::kLinear: return "linear";
    case Activation::kRelu: return "relu";
    case Activation::kTanh: return "tanh";
    case Activation::kSigmoid: return "sigmoid";
  }
  return "linear";
}

Activation activation_from_string(std::string_view name) {
  if (name == "linear") return Activation::kLinear;
  if (name == "relu") return Activation::kRelu;
  if (name == "tanh") return Activation::kTanh;
  if (name == "sigmoid") return Activation::kSigmoid;
  throw Error(ErrorCode::kParseError, "unknown activation '" + std::string(name) + "'");
}

LayerKind kind_of(const LayerSpec& layer) {
  return static_cast<LayerKind>(layer.index());
}

std::string_view to_string(LayerKind kind) {
  switch (kind) {
    case LayerKind::kDense: return "dense";
    case LayerKind::kConv1D: return "conv1d";
    case LayerKind::kMaxPool1D: return "maxpool1d";
    case LayerKind::kBatchNorm: return "batchnorm";
    case LayerKind::kLstm: return "lstm";
  }
  return "dense";
}

LayerKind layer_kind_from_string(std::string_view name) {
  if (name == "dense") return LayerKind::kDense;
  if (name == "conv1d") return LayerKind::kConv1D;
  if (name == "maxpool1d") return LayerKind::kMaxPool1D;
  if (name == "batchnorm") return LayerKind::kBatchNorm;
  if (name == "lstm") return LayerKind::kLstm;
  throw Error(ErrorCode::kParseError, "unknown layer kind '" + std::string(name) + "'");
}

const TensorShape& Graph::layer_input_shape(std::size_t i) const {
  if (i == 0) return input_shape_;
  return layer_output_shape(i - 1);
}

const TensorShape& Graph::layer_output_shape(std::size_t i) const {
  if (!resolved()) throw Error(ErrorCode::kInvalidArgument, "graph shapes are not resolved");
  return output_shapes_.at(i);
}

Graph infer_shapes(const Graph& graph) {
  if (graph.layers_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "graph '" + graph.name_ + "' has no layers");
  }
  if (graph.input_shape_.rank() == 0) {
    throw Error(ErrorCode::kShapeMismatch, "graph input shape is unset");
  }
  Graph out = graph;
  out.output_shapes_.clear();
  const TensorShape* in = &out.input_shape_;
  for (std::size_t i = 0; i < out.layers_.size(); ++i) {
    out.output_shapes_.push_back(resolve_layer(out.layers_[i], *in, i));
    in = &out.output_shapes_.back();
  }
  return out;
}

std::string_view to_string(WeightRole role) {
  switch (role) {
    case WeightRole::kKernel: return "kernel";
    case WeightRole::kRecurrent: return "recurrent_kernel";
    case WeightRole::kBias: return "bias";
    case WeightRole::kGamma: return "gamma";
    case WeightRole::kBeta: return "beta";
    case WeightRole::kMovingMean: return "moving_mean";
    case WeightRole::kMovingVariance: return "moving_variance";
  }
  return "kernel";
}

WeightRole weight_role_from_string(std::string_view name) {
  for (WeightRole r : {WeightRole::kKernel, WeightRole::kRecurrent, WeightRole::kBias,
                       WeightRole::kGamma, WeightRole::kBeta, WeightRole::kMovingMean,
                       WeightRole::kMovingVariance}) {
    if (to_string(r) == name) return r;
  }
  throw Error(ErrorCode::kParseError, "unknown weight role '" + std::string(name) + "'");
}

std::size_t WeightSlot::element_count() const { return product(shape); }

std::vector<WeightSlot> weight_slots(const Graph& graph, std::size_t i) {
  const TensorShape& in = graph.layer_input_shape(i);
  const std::size_t in_features = in.features();
  return std::visit(
      Overloaded{
          [&](const DenseSpec& d) {
            return std::vector<WeightSlot>{{WeightRole::kKernel, {d.units, in_features}},
                                           {WeightRole::kBias, {d.units}}};
          },
          [&](const Conv1DSpec& c) {
            return std::vector<WeightSlot>{
                {WeightRole::kKernel, {c.filters, c.kernel, in_features}},
                {WeightRole::kBias, {c.filters}}};
          },
          [&](const MaxPool1DSpec&) { return std::vector<WeightSlot>{}; },
          [&](const BatchNormSpec&) {
            return std::vector<WeightSlot>{{WeightRole::kGamma, {in_features}},
                                           {WeightRole::kBeta, {in_features}},
                                           {WeightRole::kMovingMean, {in_features}, false},
                                           {WeightRole::kMovingVariance, {in_features}, false}};
          },
          [&](const LstmSpec& l) {
            return std::vector<WeightSlot>{{WeightRole::kKernel, {4 * l.units, in_features}},
                                           {WeightRole::kRecurrent, {4 * l.units, l.units}},
                                           {WeightRole::kBias, {4 * l.units}}};
          },
      },
      graph.layers().at(i));
}

std::uint64_t layer_param_count(const Graph& graph, std::size_t i) {
  std::uint64_t n = 0;
  for (const WeightSlot& s : weight_slots(graph, i)) {
    if (s.trainable) n += s.element_count();
  }
  return n;
}

std::uint64_t param_count(const Graph& graph) {
  std::uint64_t n = 0;
  for (std::size_t i = 0; i < graph.size(); ++i) n += layer_param_count(graph, i);
  return n;
}

std::uint64_t layer_stored_count(const Graph& graph, std::size_t i) {
  std::uint64_t n = 0;
  for (const WeightSlot& s : weight_slots(graph, i)) n += s.element_count();
  return n;
}

std::uint64_t stored_weight_count(const Graph& graph) {
  std::uint64_t n = 0;
  for (std::size_t i = 0; i < graph.size(); ++i) n += layer_stored_count(graph, i);
  return n;
}

MaccCount macc_count(const Graph& graph) {
  MaccCount out;
  for (std::size_t i = 0; i < graph.size(); ++i) {
    const TensorShape& in = graph.layer_input_shape(i);
    const TensorShape& y = graph.layer_output_shape(i);
    const std::uint64_t t_in = in.timesteps();
    const std::uint64_t f_in = in.features();
    const std::uint64_t m = std::visit(
        Overloaded{
            [&](const DenseSpec& d) -> std::uint64_t { return t_in * f_in * d.units; },
            [&](const Conv1DSpec& c) -> std::uint64_t {
              return std::uint64_t{y[0]} * c.kernel * f_in * c.filters;
            },
            [&](const MaxPool1DSpec&) -> std::uint64_t { return 0; },
            [&](const BatchNormSpec&) -> std::uint64_t { return t_in * f_in; },
            [&](const LstmSpec& l) -> std::uint64_t {
              return t_in * 4 * l.units * (f_in + l.units);
            },
        },
        graph.layers()[i]);
    out.per_layer.push_back(m);
    out.total += m;
  }
  return out;
}

void WeightStore::set(std::size_t layer, WeightRole role, std::vector<float> values) {
  tensors_[{layer, role}] = std::move(values);
}

bool WeightStore::contains(std::size_t layer, WeightRole role) const {
  return tensors_.count({layer, role}) != 0;
}

const std::vector<float>& WeightStore::get(std::size_t layer, WeightRole role) const {
  auto it = tensors_.find({layer, role});
  if (it == tensors_.end()) {
    throw Error(ErrorCode::kIncompleteWeights, "missing " + std::string(to_string(role)) +
                                                   " for layer " + std::to_string(layer));
  }
  return it->second;
}

std::size_t WeightStore::total_elements() const {
  std::size_t n = 0;
  for (const auto& [key, values] : tensors_) n += values.size();
  return n;
}

void validate_weights(const Graph& graph, const WeightStore& weights) {
  std::size_t expected_entries = 0;
  for (std::size_t i = 0; i < graph.size(); ++i) {
    for (const WeightSlot& slot : weight_slots(graph, i)) {
      ++expected_entries;
      const std::vector<float>& v = weights.get(i, slot.role);
      if (v.size() != slot.element_count()) {
        throw Error(ErrorCode::kBlobMismatch,
                    "layer " + std::to_string(i) + " " + std::string(to_string(slot.role)) +
                        ": expected " + std::to_string(slot.element_count()) +
                        " values, got " + std::to_string(v.size()));
      }
      for (float x : v) {
        if (!std::isfinite(x)) {
          throw Error(ErrorCode::kNonFiniteWeight,
                      "layer " + std::to_string(i) + " " + std::string(to_string(slot.role)));
        }
        if (slot.role == WeightRole::kMovingVariance && x < 0.0f) {
          throw Error(ErrorCode::kNegativeVariance, "layer " + std::to_string(i));
        }
      }
    }
  }
  if (weights.entries().size() != expected_entries) {
    throw Error(ErrorCode::kBlobMismatch, "weight store holds tensors not used by the graph");
  }
}

}  // namespace tnn
