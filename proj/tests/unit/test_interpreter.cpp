#include <cmath>
#include <cstring>

#include "doctest.h"
#include "support/kernel_suite.hpp"
#include "support/random_graph.hpp"
#include "tnn/batch.hpp"
#include "tnn/error.hpp"
#include "tnn/fixtures.hpp"
#include "tnn/interpreter.hpp"

using namespace tnn;

namespace {

constexpr double kOracleAtol = 1e-6;

}  // namespace

TEST_CASE("dense examples") {
  const Tensor x(TensorShape{2, 3}, {1, 2, 3, 4, 5, 6});
  const std::vector<float> eye{1, 0, 0, 0, 1, 0, 0, 0, 1};
  CHECK(run_dense(x, eye, std::vector<float>(3, 0.0f), 3, Activation::kLinear).values == x.values);

  const std::vector<float> zero(6, 0.0f), c{0.5f, -2.0f};
  const Tensor y = run_dense(x, zero, c, 2, Activation::kLinear);
  CHECK(y.shape == TensorShape{2, 2});
  CHECK(y.values == std::vector<float>{0.5f, -2.0f, 0.5f, -2.0f});
}

TEST_CASE("conv1d examples") {
  const Tensor ones(TensorShape{20, 4}, std::vector<float>(80, 1.0f));
  const Tensor y = run_conv1d(ones, std::vector<float>(32 * 4 * 4, 0.0f), std::vector<float>(32, 1.0f), 32, 4,
                              1, Activation::kRelu);
  CHECK(y.shape == TensorShape{17, 32});
  CHECK(y.values == std::vector<float>(17 * 32, 1.0f));

  // A kernel spanning the whole sequence is a dense layer on the flattened input.
  testing::Rng rng(3);
  const Tensor x(TensorShape{5, 3}, rng.floats(15));
  const auto W = rng.floats(4 * 15);
  const auto b = rng.floats(4);
  const Tensor conv = run_conv1d(x, W, b, 4, 5, 1, Activation::kTanh);
  const Tensor flat(TensorShape{15}, x.values);
  CHECK(conv.values == run_dense(flat, W, b, 4, Activation::kTanh).values);
}

TEST_CASE("maxpool examples") {
  const Tensor constant(TensorShape{6, 2}, std::vector<float>(12, 0.25f));
  CHECK(run_maxpool1d(constant, 2, 2).values == std::vector<float>(6, 0.25f));

  const Tensor rising(TensorShape{6, 1}, {0, 1, 2, 3, 4, 5});
  CHECK(run_maxpool1d(rising, 2, 2).values == std::vector<float>{1, 3, 5});

  const Tensor x(TensorShape{3, 2}, {1, -5, 7, 2, -3, 4});
  CHECK(run_maxpool1d(x, 3, 1).values == std::vector<float>{7, 4});
}

TEST_CASE("batchnorm examples") {
  const Tensor x(TensorShape{2, 2}, {1, -2, 3, 0.5f});
  CHECK(run_batchnorm(x, std::vector<float>{1, 1}, std::vector<float>{0, 0}, std::vector<float>{0, 0},
                      std::vector<float>{1, 1}, 0.0f)
            .values == x.values);
  CHECK(run_batchnorm(x, std::vector<float>{0, 0}, std::vector<float>{0.5f, -1}, std::vector<float>{0.2f, 0},
                      std::vector<float>{2, 1}, 1e-3f)
            .values == std::vector<float>{0.5f, -1, 0.5f, -1});
}

TEST_CASE("lstm examples") {
  const Tensor x(TensorShape{3, 2}, {1, 2, 3, 4, 5, 6});
  const Tensor zero = run_lstm(x, std::vector<float>(8 * 2, 0.0f), std::vector<float>(8 * 2, 0.0f),
                               std::vector<float>(8, 0.0f), 2, true);
  CHECK(zero.values == std::vector<float>(6, 0.0f));

  // T=1, U=1: h = sigma(o) * tanh(sigma(i) * tanh(g)) with c0 = 0.
  const Tensor one(TensorShape{1, 1}, {0.5f});
  const std::vector<float> W{0.2f, -0.4f, 0.6f, 0.8f}, R{0.3f, 0.3f, 0.3f, 0.3f}, b{0.1f, 0.0f, -0.1f, 0.05f};
  const double i = 1 / (1 + std::exp(-(0.1 + 0.2 * 0.5)));
  const double g = std::tanh(-0.1 + 0.6 * 0.5);
  const double o = 1 / (1 + std::exp(-(0.05 + 0.8 * 0.5)));
  const double h = o * std::tanh(i * g);
  const Tensor y = run_lstm(one, W, R, b, 1, false);
  CHECK(y.shape == TensorShape{1});
  CHECK(std::fabs(y.values[0] - h) <= kOracleAtol);
}

TEST_CASE("kernel oracle suite") {
  const auto results = testing::run_kernel_oracle_suite(2024, 1000);
  REQUIRE(results.size() == 5);
  for (const auto& r : results) {
    INFO(r.kernel, " max abs error ", r.max_abs_error, " over ", r.instances, " instances");
    CHECK(r.instances >= 1000);
    CHECK(r.max_abs_error <= testing::kOracleAtol);
    CHECK(r.bounds_ok);
  }
}

TEST_CASE("forward on the case-study graphs") {
  const Model ae = make_can_autoencoder();
  testing::Rng rng(9);
  const Tensor x(ae.graph.input_shape(), rng.floats(480));
  const Tensor y = forward(ae.graph, ae.weights, x);
  CHECK(y.shape == TensorShape{24, 20});
  CHECK(forward(ae.graph, ae.weights, x).values == y.values);

  WeightStore zero;
  for (const auto& [key, values] : ae.weights.entries()) {
    zero.set(key.first, key.second, std::vector<float>(values.size(), 0.0f));
  }
  CHECK(forward(ae.graph, zero, x).values == std::vector<float>(480, 0.0f));

  const Model cnn = make_battery_cnn_lstm();
  const Tensor bx(cnn.graph.input_shape(), rng.floats(80, 0.0f, 1.0f));
  const Tensor by = forward(cnn.graph, cnn.weights, bx);
  CHECK(by.shape == TensorShape{1});

  // Kernel-by-kernel replay.
  const auto& w = cnn.weights;
  Tensor t = run_conv1d(bx, w.get(0, WeightRole::kKernel), w.get(0, WeightRole::kBias), 32, 4, 1,
                        Activation::kRelu);
  t = run_batchnorm(t, w.get(1, WeightRole::kGamma), w.get(1, WeightRole::kBeta),
                    w.get(1, WeightRole::kMovingMean), w.get(1, WeightRole::kMovingVariance), 1e-3f);
  t = run_maxpool1d(t, 2, 2);
  t = run_lstm(t, w.get(3, WeightRole::kKernel), w.get(3, WeightRole::kRecurrent), w.get(3, WeightRole::kBias),
               32, false);
  t = run_dense(t, w.get(4, WeightRole::kKernel), w.get(4, WeightRole::kBias), 1, Activation::kLinear);
  CHECK(t.values == by.values);

  try {
    forward(cnn.graph, cnn.weights, x);
    FAIL("expected ShapeMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kShapeMismatch);
  }
}

TEST_CASE("identity dense forward") {
  const Graph g = infer_shapes(Graph("identity", TensorShape{1}, {DenseSpec{1}}));
  WeightStore w;
  w.set(0, WeightRole::kKernel, {1.0f});
  w.set(0, WeightRole::kBias, {0.0f});
  for (float v : {0.0f, -0.0f, 1.5f, -3.25f, 1e-30f}) {
    const Tensor y = forward(g, w, Tensor(TensorShape{1}, {v}));
    CHECK(y.values[0] == v + 0.0f);
  }
}

TEST_CASE("parallel batch equals serial batch bit for bit") {
  testing::Rng rng(17);
  for (const Model& m : {make_can_autoencoder(), make_battery_cnn_lstm()}) {
    const auto inputs = rng.floats(64 * m.graph.input_shape().element_count());
    const auto serial = forward_batch_serial(m.graph, m.weights, inputs);
    const auto parallel = forward_batch_parallel(m.graph, m.weights, inputs);
    REQUIRE(serial.size() == parallel.size());
    CHECK(std::memcmp(serial.data(), parallel.data(), serial.size() * 4) == 0);
  }
  for (int k = 0; k < 40; ++k) {
    const Graph g = testing::random_chain(rng);
    const WeightStore w = random_weights(g, static_cast<std::uint32_t>(k));
    const auto inputs = rng.floats(rng.between(0, 20) * g.input_shape().element_count());
    CHECK(forward_batch_parallel(g, w, inputs) == forward_batch_serial(g, w, inputs));
  }
}
