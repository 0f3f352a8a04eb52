#include "doctest.h"
#include "support/naive_oracle.hpp"
#include "support/random_graph.hpp"
#include "tnn/error.hpp"
#include "tnn/fixtures.hpp"
#include "tnn/graph.hpp"

using namespace tnn;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::kIoError;
}

// Runs the wide-precision oracle layer by layer and returns its multiply count.
std::uint64_t oracle_multiplies(const Graph& g, const WeightStore& w) {
  oracle::Counter n;
  testing::Rng rng(1);
  std::vector<float> x = rng.floats(g.input_shape().element_count());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const TensorShape& in = g.layer_input_shape(i);
    const std::size_t steps = in.timesteps(), feat = in.features();
    std::vector<double> y;
    const LayerSpec& s = g.layers()[i];
    if (auto* d = std::get_if<DenseSpec>(&s)) {
      y = oracle::dense(x, steps, feat, w.get(i, WeightRole::kKernel), w.get(i, WeightRole::kBias), d->units,
                        d->activation, n);
    } else if (auto* c = std::get_if<Conv1DSpec>(&s)) {
      y = oracle::conv1d(x, steps, feat, w.get(i, WeightRole::kKernel), w.get(i, WeightRole::kBias),
                         c->filters, c->kernel, c->stride, c->activation, n);
    } else if (auto* p = std::get_if<MaxPool1DSpec>(&s)) {
      y = oracle::maxpool(x, steps, feat, p->pool, p->stride);
    } else if (auto* b = std::get_if<BatchNormSpec>(&s)) {
      y = oracle::batchnorm(x, feat, w.get(i, WeightRole::kGamma), w.get(i, WeightRole::kBeta),
                            w.get(i, WeightRole::kMovingMean), w.get(i, WeightRole::kMovingVariance),
                            b->epsilon, n);
    } else {
      const auto& l = std::get<LstmSpec>(s);
      y = oracle::lstm(x, steps, feat, w.get(i, WeightRole::kKernel), w.get(i, WeightRole::kRecurrent),
                       w.get(i, WeightRole::kBias), l.units, l.return_sequences, n);
    }
    x.assign(y.begin(), y.end());
  }
  return n.multiplies;
}

}  // namespace

TEST_CASE("tensor shape invariants") {
  CHECK(TensorShape{24, 20}.element_count() == 480);
  CHECK(TensorShape{24, 20}.to_string() == "24x20");
  CHECK(TensorShape{7}.timesteps() == 1);
  CHECK(code_of([] { TensorShape(std::vector<std::size_t>{}); }) == ErrorCode::kShapeMismatch);
  CHECK(code_of([] { TensorShape{2, 0}; }) == ErrorCode::kShapeMismatch);
  CHECK(code_of([] { TensorShape(std::vector<std::size_t>{1, 2, 3}); }) == ErrorCode::kShapeMismatch);
}

TEST_CASE("autoencoder shapes follow the topology table") {
  const Graph g = can_autoencoder_graph();
  REQUIRE(g.size() == 4);
  CHECK(g.input_shape() == TensorShape{24, 20});
  CHECK(g.layer_output_shape(0) == TensorShape{24, 20});
  CHECK(g.layer_output_shape(1) == TensorShape{24, 18});
  CHECK(g.layer_output_shape(2) == TensorShape{24, 18});
  CHECK(g.layer_output_shape(3) == TensorShape{24, 20});
}

TEST_CASE("conv and pool shapes") {
  const Graph g = battery_cnn_lstm_graph();
  CHECK(g.layer_output_shape(0) == TensorShape{17, 32});  // (20-4)/1+1
  CHECK(g.layer_output_shape(1) == TensorShape{17, 32});
  CHECK(g.layer_output_shape(2) == TensorShape{8, 32});  // floor((17-2)/2)+1
  CHECK(g.layer_output_shape(3) == TensorShape{32});
  CHECK(g.output_shape() == TensorShape{1});

  const Graph strided = infer_shapes(Graph("s", TensorShape{10, 3}, {Conv1DSpec{2, 3, 2, Activation::kLinear}}));
  CHECK(strided.output_shape() == TensorShape{4, 2});
}

TEST_CASE("shape inference is idempotent") {
  const Graph g = can_autoencoder_graph();
  CHECK(infer_shapes(g) == g);
  testing::Rng rng(7);
  for (int k = 0; k < 50; ++k) {
    const Graph r = testing::random_chain(rng);
    CHECK(infer_shapes(r) == r);
  }
}

TEST_CASE("shape errors") {
  CHECK(code_of([] { infer_shapes(Graph("e", TensorShape{3, 2}, {})); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([] {
          infer_shapes(Graph("k", TensorShape{3, 2}, {Conv1DSpec{1, 4, 1, Activation::kLinear}}));
        }) == ErrorCode::kShapeMismatch);
  CHECK(code_of([] { infer_shapes(Graph("p", TensorShape{3, 2}, {MaxPool1DSpec{4, 1}})); }) ==
        ErrorCode::kShapeMismatch);
  // lstm without sequences emits rank 1; nothing temporal may follow.
  CHECK(code_of([] {
          infer_shapes(Graph("l", TensorShape{3, 2}, {LstmSpec{2, false}, LstmSpec{2, false}}));
        }) == ErrorCode::kShapeMismatch);
  CHECK(code_of([] {
          infer_shapes(Graph("l", TensorShape{3, 2}, {LstmSpec{2, false}, MaxPool1DSpec{1, 1}}));
        }) == ErrorCode::kShapeMismatch);
  CHECK(code_of([] { infer_shapes(Graph("z", TensorShape{3, 2}, {DenseSpec{0}})); }) ==
        ErrorCode::kInvalidArgument);
  const Graph ok = infer_shapes(Graph("ok", TensorShape{3, 2}, {LstmSpec{2, false}, DenseSpec{1}}));
  CHECK(ok.output_shape() == TensorShape{1});
}

TEST_CASE("parameter counts") {
  const Graph dense = infer_shapes(Graph("d", TensorShape{24, 20}, {DenseSpec{20}}));
  CHECK(param_count(dense) == 420);

  const Graph ae = can_autoencoder_graph();
  CHECK(layer_param_count(ae, 0) == 420);
  CHECK(layer_param_count(ae, 1) == 2808);
  CHECK(layer_param_count(ae, 2) == 2664);
  CHECK(layer_param_count(ae, 3) == 380);
  CHECK(param_count(ae) == 6272);

  const Graph cnn = battery_cnn_lstm_graph();
  CHECK(layer_param_count(cnn, 0) == 544);
  CHECK(layer_param_count(cnn, 1) == 64);
  CHECK(layer_param_count(cnn, 2) == 0);
  CHECK(layer_param_count(cnn, 3) == 8320);
  CHECK(layer_param_count(cnn, 4) == 33);
  CHECK(param_count(cnn) == 8961);
  CHECK(stored_weight_count(cnn) == 8961 + 64);
}

TEST_CASE("param count equals trainable weight-store entries") {
  testing::Rng rng(11);
  for (int k = 0; k < 100; ++k) {
    const Graph g = testing::random_chain(rng);
    const WeightStore w = random_weights(g, static_cast<std::uint32_t>(k));
    std::uint64_t trainable = 0;
    for (const auto& [key, values] : w.entries()) {
      if (key.second != WeightRole::kMovingMean && key.second != WeightRole::kMovingVariance) {
        trainable += values.size();
      }
    }
    CHECK(param_count(g) == trainable);
    CHECK(stored_weight_count(g) == w.total_elements());
  }
}

TEST_CASE("macc counts for the case-study graphs") {
  const MaccCount ae = macc_count(can_autoencoder_graph());
  CHECK(ae.per_layer == std::vector<std::uint64_t>{9600, 65664, 62208, 8640});
  CHECK(ae.total == 146112);

  const MaccCount cnn = macc_count(battery_cnn_lstm_graph());
  CHECK(cnn.per_layer == std::vector<std::uint64_t>{8704, 544, 0, 65536, 32});
  CHECK(cnn.total == 74816);

  const Graph one = infer_shapes(Graph("one", TensorShape{1, 1}, {DenseSpec{1}}));
  CHECK(macc_count(one).total == 1);
}

TEST_CASE("macc count equals multiplies executed by the naive oracle") {
  CHECK(macc_count(can_autoencoder_graph()).total ==
        oracle_multiplies(can_autoencoder_graph(), random_weights(can_autoencoder_graph(), 3)));
  CHECK(macc_count(battery_cnn_lstm_graph()).total ==
        oracle_multiplies(battery_cnn_lstm_graph(), random_weights(battery_cnn_lstm_graph(), 3)));
  testing::Rng rng(5);
  for (int k = 0; k < 300; ++k) {
    const Graph g = testing::random_chain(rng);
    CHECK(macc_count(g).total == oracle_multiplies(g, random_weights(g, static_cast<std::uint32_t>(k))));
  }
}

TEST_CASE("weight validation") {
  const Graph g = infer_shapes(Graph("bn", TensorShape{2, 2}, {BatchNormSpec{}}));
  WeightStore w = random_weights(g, 1);
  CHECK_NOTHROW(validate_weights(g, w));
  w.set(0, WeightRole::kMovingVariance, {1.0f, -0.5f});
  CHECK(code_of([&] { validate_weights(g, w); }) == ErrorCode::kNegativeVariance);
  w.set(0, WeightRole::kMovingVariance, {1.0f});
  CHECK(code_of([&] { validate_weights(g, w); }) == ErrorCode::kBlobMismatch);
  w.set(0, WeightRole::kMovingVariance, {1.0f, std::nanf("")});
  CHECK(code_of([&] { validate_weights(g, w); }) == ErrorCode::kNonFiniteWeight);
  WeightStore missing;
  CHECK(code_of([&] { validate_weights(g, missing); }) == ErrorCode::kIncompleteWeights);
}
