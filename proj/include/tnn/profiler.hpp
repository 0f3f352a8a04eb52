#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tnn/graph.hpp"
#include "tnn/memory_planner.hpp"

namespace tnn {

inline constexpr double kDefaultCyclesPerMacc = 9.6;

struct McuSpec {
  std::string name;
  double flash_kib = 0;
  double ram_kib = 0;
  double clock_mhz = 0;
  double power_ma = 0;
};

std::vector<McuSpec> parse_mcu_catalog(std::string_view json_text);
std::vector<McuSpec> load_mcu_catalog(const std::filesystem::path& path);
// The three automotive MCUs shipped in data/mcus.json.
std::vector<McuSpec> default_mcu_catalog();
// Throws InvalidArgument for an unknown name.
const McuSpec& find_mcu(const std::vector<McuSpec>& catalog, std::string_view name);

// time_ms = total_macc * cycles_per_macc / (clock_mhz * 1000)
double estimate_target_time(std::uint64_t total_macc, const McuSpec& mcu,
                            double cycles_per_macc = kDefaultCyclesPerMacc);

struct LayerComplexity {
  std::string name;
  LayerKind kind = LayerKind::kDense;
  std::uint64_t macc = 0;
  std::uint64_t flash_bytes = 0;
  std::uint64_t ram_bytes = 0;
  std::optional<double> host_time_ns;
  double flash_pct = 0;
  double ram_pct = 0;
  double time_pct = 0;
};

struct TargetEstimate {
  std::string mcu;
  double clock_mhz = 0;
  double time_ms = 0;
};

struct ComplexityReport {
  std::vector<LayerComplexity> layers;
  std::uint64_t total_macc = 0;
  std::uint64_t total_flash_bytes = 0;
  std::uint64_t total_ram_bytes = 0;
  std::optional<double> total_host_time_ns;
  std::size_t arena_bytes = 0;
  bool time_from_host = false;  // otherwise MACC shares stand in for time
  double cycles_per_macc = kDefaultCyclesPerMacc;
  std::vector<TargetEstimate> estimates;

  std::string to_json() const;
  std::string to_table() const;
};

// Flash per layer is 4 bytes per stored weight; RAM per layer is the bytes of
// arena buffers that layer writes into fresh storage (outputs, LSTM state and
// scratch; in-place layers add nothing).
ComplexityReport profile(const Graph& graph, const WeightStore& weights, const MemoryPlan& plan,
                         std::optional<std::span<const double>> host_timings_ns = std::nullopt);

void add_estimates(ComplexityReport& report, const std::vector<McuSpec>& mcus,
                   double cycles_per_macc = kDefaultCyclesPerMacc);

// Median wall time per layer of the interpreter over `repeats` runs of `input`.
std::vector<double> measure_layer_times(const Graph& graph, const WeightStore& weights,
                                        std::span<const float> input, int repeats);

// Sums a per-layer column over layers of each kind, in LayerKind order.
std::vector<std::pair<LayerKind, double>> share_by_kind(const ComplexityReport& report,
                                                        double LayerComplexity::*column);

}  // namespace tnn
