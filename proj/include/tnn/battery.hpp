#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tnn/window_set.hpp"

namespace tnn {

struct BatterySample {
  double time = 0, voltage = 0, current = 0, temperature = 0;
};

struct DischargeCycle {
  std::string id;
  std::vector<BatterySample> samples;
  double capacity = 0;
};

// CSV `cycle_id,time,voltage,current,temperature,capacity`; rows are grouped
// by cycle id in order of first appearance.
std::vector<DischargeCycle> parse_battery_csv(std::string_view text);

// round(i * (n - 1) / (samples - 1)) for i in [0, samples), halves rounding up.
std::vector<std::size_t> even_indices(std::size_t n, std::size_t samples);

// Rows are [current, voltage, temperature, dt] with dt = 0 on the first row.
// Labels are cycle capacities. Throws ShortCycle.
WindowSet build_battery_windows(std::span<const DischargeCycle> cycles, std::size_t samples = 20);

class MinMaxScaler {
 public:
  MinMaxScaler() = default;
  MinMaxScaler(std::vector<float> min, std::vector<float> max);

  // Per-feature min/max over every row of every window in `set`.
  static MinMaxScaler fit(const WindowSet& set);
  static MinMaxScaler from_json(std::string_view text);
  std::string to_json() const;

  // (v - min) / (max - min); a feature with max == min maps to 0.
  WindowSet apply(const WindowSet& set) const;
  WindowSet invert(const WindowSet& set) const;

  const std::vector<float>& min() const { return min_; }
  const std::vector<float>& max() const { return max_; }
  std::vector<std::size_t> degenerate_features() const;

 private:
  std::vector<float> min_;
  std::vector<float> max_;
};

// Throws LengthMismatch (or EmptyScores when both are empty).
double eval_capacity(std::span<const float> predictions, std::span<const float> targets);

inline constexpr double kSohReplaceThreshold = 0.8;

struct StateOfHealth {
  double soh = 0;
  bool replace = false;  // soh strictly below 0.8
};

// Throws NonPositiveRated.
StateOfHealth compute_soh(double c_max, double c_rated);

}  // namespace tnn
