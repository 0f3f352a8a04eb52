#pragma once

#include <vector>

#include "random.hpp"
#include "tnn/graph.hpp"

namespace tnn::testing {

// Shape-valid random chain with every extent in [1, max_extent].
inline Graph random_chain(Rng& rng, std::size_t max_layers = 6, std::size_t max_extent = 6) {
  const bool rank2 = rng.coin(0.85);
  TensorShape input = rank2 ? TensorShape{rng.between(1, max_extent), rng.between(1, max_extent)}
                            : TensorShape{rng.between(1, max_extent)};
  std::vector<LayerSpec> layers;
  TensorShape cur = input;
  const std::size_t n = rng.between(1, max_layers);
  const auto activation = [&] { return static_cast<Activation>(rng.between(0, 3)); };
  for (std::size_t i = 0; i < n; ++i) {
    LayerSpec spec;
    if (cur.rank() == 1) {
      spec = rng.coin() ? LayerSpec(DenseSpec{rng.between(1, max_extent), activation()})
                        : LayerSpec(BatchNormSpec{rng.coin() ? 1e-3f : 0.0f});
    } else {
      const std::size_t steps = cur[0];
      switch (rng.between(0, 4)) {
        case 0: spec = DenseSpec{rng.between(1, max_extent), activation()}; break;
        case 1:
          spec = Conv1DSpec{rng.between(1, max_extent), rng.between(1, steps), rng.between(1, 2),
                            activation()};
          break;
        case 2: spec = MaxPool1DSpec{rng.between(1, steps), rng.between(1, 2)}; break;
        case 3: spec = BatchNormSpec{1e-3f}; break;
        default: spec = LstmSpec{rng.between(1, max_extent), rng.coin(0.7)}; break;
      }
    }
    layers.push_back(spec);
    cur = infer_shapes(Graph("probe", input, layers)).output_shape();
  }
  return infer_shapes(Graph("random_chain", input, std::move(layers)));
}

}  // namespace tnn::testing
