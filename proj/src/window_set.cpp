#include "tnn/window_set.hpp"

#include "tnn/error.hpp"

namespace tnn {

std::pair<VectorFile, VectorFile> to_vector_files(const WindowSet& set) {
  if (set.values.size() != set.size() * set.window_elements()) {
    throw Error(ErrorCode::kLengthMismatch, "window values disagree with the label count");
  }
  VectorFile windows;
  windows.count = static_cast<std::uint32_t>(set.size());
  windows.length = static_cast<std::uint32_t>(set.window_elements());
  windows.values = set.values;
  VectorFile labels;
  labels.count = static_cast<std::uint32_t>(set.size());
  labels.length = 1;
  labels.values = set.labels;
  return {std::move(windows), std::move(labels)};
}

WindowSet from_vector_files(const VectorFile& windows, const VectorFile& labels,
                            std::size_t timesteps, std::size_t features) {
  if (windows.count != 0 && windows.length != timesteps * features) {
    throw Error(ErrorCode::kShapeMismatch, "windows have length " + std::to_string(windows.length) +
                                               ", expected " + std::to_string(timesteps * features));
  }
  if (labels.count != windows.count || (labels.count != 0 && labels.length != 1)) {
    throw Error(ErrorCode::kLengthMismatch, "need exactly one label per window");
  }
  WindowSet set;
  set.timesteps = timesteps;
  set.features = features;
  set.values = windows.values;
  set.labels = labels.values;
  return set;
}

}  // namespace tnn
