#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "tnn/vector_file.hpp"

namespace tnn {

// Fixed-shape [timesteps x features] windows with one label each. For CAN
// windows the label is an attack code (0 normal, 1 + AttackKind); for battery
// windows it is the cycle capacity.
struct WindowSet {
  std::size_t timesteps = 0;
  std::size_t features = 0;
  std::vector<float> values;  // windows concatenated row-major
  std::vector<float> labels;

  std::size_t size() const { return labels.size(); }
  std::size_t window_elements() const { return timesteps * features; }
  std::span<const float> window(std::size_t i) const {
    return std::span<const float>(values).subspan(i * window_elements(), window_elements());
  }
};

// Persisted as two vector files: windows (length T*F) and labels (length 1).
std::pair<VectorFile, VectorFile> to_vector_files(const WindowSet& set);
WindowSet from_vector_files(const VectorFile& windows, const VectorFile& labels,
                            std::size_t timesteps, std::size_t features);

}  // namespace tnn
