#include "tnn/battery.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "csv.hpp"
#include "json.hpp"
#include "tnn/error.hpp"

namespace tnn {

std::vector<DischargeCycle> parse_battery_csv(std::string_view text) {
  const auto rows = detail::parse_csv(text);
  const std::vector<std::string> header{"cycle_id", "time", "voltage", "current", "temperature", "capacity"};
  if (rows.empty() || rows[0] != header) {
    throw Error(ErrorCode::kParseError,
                "battery CSV header must be cycle_id,time,voltage,current,temperature,capacity");
  }
  std::vector<DischargeCycle> cycles;
  std::map<std::string, std::size_t> index;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::string where = "battery CSV line " + std::to_string(r + 1);
    if (row.size() != header.size()) throw Error(ErrorCode::kParseError, where + ": expected 6 cells");
    auto [it, fresh] = index.emplace(row[0], cycles.size());
    if (fresh) cycles.push_back({row[0], {}, detail::parse_double(row[5], where)});
    DischargeCycle& c = cycles[it->second];
    if (detail::parse_double(row[5], where) != c.capacity) {
      throw Error(ErrorCode::kParseError, where + ": capacity changes within cycle " + c.id);
    }
    c.samples.push_back({detail::parse_double(row[1], where), detail::parse_double(row[2], where),
                         detail::parse_double(row[3], where), detail::parse_double(row[4], where)});
  }
  return cycles;
}

std::vector<std::size_t> even_indices(std::size_t n, std::size_t samples) {
  if (samples < 2 || n < samples) {
    throw Error(ErrorCode::kShortCycle, "cannot pick " + std::to_string(samples) + " of " +
                                            std::to_string(n) + " measurements");
  }
  std::vector<std::size_t> out;
  const std::size_t den = samples - 1;
  for (std::size_t i = 0; i < samples; ++i) out.push_back((2 * i * (n - 1) + den) / (2 * den));
  return out;
}

WindowSet build_battery_windows(std::span<const DischargeCycle> cycles, std::size_t samples) {
  WindowSet set;
  set.timesteps = samples;
  set.features = 4;
  for (const DischargeCycle& c : cycles) {
    if (c.samples.size() < samples) {
      throw Error(ErrorCode::kShortCycle, "cycle " + c.id + " has " + std::to_string(c.samples.size()) +
                                              " measurements, needs " + std::to_string(samples));
    }
    const auto idx = even_indices(c.samples.size(), samples);
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const BatterySample& s = c.samples[idx[k]];
      const double dt = k == 0 ? 0.0 : s.time - c.samples[idx[k - 1]].time;
      set.values.push_back(static_cast<float>(s.current));
      set.values.push_back(static_cast<float>(s.voltage));
      set.values.push_back(static_cast<float>(s.temperature));
      set.values.push_back(static_cast<float>(dt));
    }
    set.labels.push_back(static_cast<float>(c.capacity));
  }
  return set;
}

MinMaxScaler::MinMaxScaler(std::vector<float> min, std::vector<float> max)
    : min_(std::move(min)), max_(std::move(max)) {
  if (min_.size() != max_.size()) throw Error(ErrorCode::kLengthMismatch, "scaler min/max lengths differ");
  for (std::size_t f = 0; f < min_.size(); ++f) {
    if (!(max_[f] >= min_[f])) throw Error(ErrorCode::kInvalidArgument, "scaler max below min");
  }
}

MinMaxScaler MinMaxScaler::fit(const WindowSet& set) {
  if (set.features == 0 || set.values.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "cannot fit a scaler on an empty window set");
  }
  std::vector<float> lo(set.features), hi(set.features);
  for (std::size_t f = 0; f < set.features; ++f) lo[f] = hi[f] = set.values[f];
  for (std::size_t k = 0; k < set.values.size(); ++k) {
    const std::size_t f = k % set.features;
    lo[f] = std::min(lo[f], set.values[k]);
    hi[f] = std::max(hi[f], set.values[k]);
  }
  return MinMaxScaler(std::move(lo), std::move(hi));
}

std::vector<std::size_t> MinMaxScaler::degenerate_features() const {
  std::vector<std::size_t> out;
  for (std::size_t f = 0; f < min_.size(); ++f) {
    if (max_[f] == min_[f]) out.push_back(f);
  }
  return out;
}

WindowSet MinMaxScaler::apply(const WindowSet& set) const {
  if (set.features != min_.size()) throw Error(ErrorCode::kShapeMismatch, "scaler feature count differs");
  WindowSet out = set;
  for (std::size_t k = 0; k < out.values.size(); ++k) {
    const std::size_t f = k % set.features;
    const float range = max_[f] - min_[f];
    out.values[k] = range == 0.0f ? 0.0f : (set.values[k] - min_[f]) / range;
  }
  return out;
}

WindowSet MinMaxScaler::invert(const WindowSet& set) const {
  if (set.features != min_.size()) throw Error(ErrorCode::kShapeMismatch, "scaler feature count differs");
  WindowSet out = set;
  for (std::size_t k = 0; k < out.values.size(); ++k) {
    const std::size_t f = k % set.features;
    out.values[k] = set.values[k] * (max_[f] - min_[f]) + min_[f];
  }
  return out;
}

std::string MinMaxScaler::to_json() const {
  return nlohmann::json{{"schema", "tnnc-minmax-v1"}, {"min", min_}, {"max", max_}}.dump(2) + "\n";
}

MinMaxScaler MinMaxScaler::from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    return MinMaxScaler(j.at("min").get<std::vector<float>>(), j.at("max").get<std::vector<float>>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("scaler: ") + e.what());
  }
}

double eval_capacity(std::span<const float> predictions, std::span<const float> targets) {
  if (predictions.size() != targets.size()) {
    throw Error(ErrorCode::kLengthMismatch, "predictions and targets differ in length");
  }
  if (predictions.empty()) throw Error(ErrorCode::kEmptyScores, "no predictions");
  double sum = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    sum += std::fabs(static_cast<double>(predictions[i]) - static_cast<double>(targets[i]));
  }
  return sum / static_cast<double>(predictions.size());
}

StateOfHealth compute_soh(double c_max, double c_rated) {
  if (!(c_rated > 0)) throw Error(ErrorCode::kNonPositiveRated, "rated capacity must be positive");
  const double soh = c_max / c_rated;
  return {soh, soh < kSohReplaceThreshold};
}

}  // namespace tnn
