#include "tnn/profiler.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "tnn/error.hpp"
#include "tnn/interpreter.hpp"
#include "tnn/model_format.hpp"

namespace tnn {

namespace {

constexpr const char* kDefaultCatalog = R"({
  "mcus": [
    {"name": "SPC584B", "flash_kib": 2048, "ram_kib": 192, "clock_mhz": 120, "power_ma": 102.0},
    {"name": "SPC58EC", "flash_kib": 4096, "ram_kib": 512, "clock_mhz": 180, "power_ma": 132.6},
    {"name": "SPC58NH", "flash_kib": 10240, "ram_kib": 1024, "clock_mhz": 200, "power_ma": 239.6}
  ]
})";

double positive_number(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number() || !(j.at(key).get<double>() > 0)) {
    throw Error(ErrorCode::kParseError, std::string("mcu entry needs a positive '") + key + "'");
  }
  return j.at(key).get<double>();
}

std::vector<double> percentages(const std::vector<double>& column) {
  double total = 0;
  for (double v : column) total += v;
  std::vector<double> out(column.size(), 0.0);
  if (total <= 0) return out;
  for (std::size_t i = 0; i < column.size(); ++i) out[i] = 100.0 * column[i] / total;
  return out;
}

}  // namespace

std::vector<McuSpec> parse_mcu_catalog(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("mcu catalog: ") + e.what());
  }
  if (!j.is_object() || !j.contains("mcus") || !j.at("mcus").is_array()) {
    throw Error(ErrorCode::kParseError, "mcu catalog needs an 'mcus' array");
  }
  std::vector<McuSpec> out;
  for (const auto& m : j.at("mcus")) {
    if (!m.is_object() || !m.contains("name") || !m.at("name").is_string()) {
      throw Error(ErrorCode::kParseError, "mcu entry needs a string 'name'");
    }
    out.push_back({m.at("name").get<std::string>(), positive_number(m, "flash_kib"),
                   positive_number(m, "ram_kib"), positive_number(m, "clock_mhz"),
                   positive_number(m, "power_ma")});
  }
  return out;
}

std::vector<McuSpec> load_mcu_catalog(const std::filesystem::path& path) {
  return parse_mcu_catalog(read_file_text(path));
}

std::vector<McuSpec> default_mcu_catalog() { return parse_mcu_catalog(kDefaultCatalog); }

const McuSpec& find_mcu(const std::vector<McuSpec>& catalog, std::string_view name) {
  for (const McuSpec& m : catalog) {
    if (m.name == name) return m;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown MCU '" + std::string(name) + "'");
}

double estimate_target_time(std::uint64_t total_macc, const McuSpec& mcu, double cycles_per_macc) {
  return static_cast<double>(total_macc) * cycles_per_macc / (mcu.clock_mhz * 1000.0);
}

ComplexityReport profile(const Graph& graph, const WeightStore& weights, const MemoryPlan& plan,
                         std::optional<std::span<const double>> host_timings_ns) {
  if (host_timings_ns && host_timings_ns->size() != graph.size()) {
    throw Error(ErrorCode::kLengthMismatch, "host timings need one entry per layer");
  }
  ComplexityReport r;
  r.arena_bytes = plan.arena_bytes;
  const MaccCount macc = macc_count(graph);
  r.layers.resize(graph.size());
  for (std::size_t i = 0; i < graph.size(); ++i) {
    LayerComplexity& row = r.layers[i];
    row.kind = kind_of(graph.layers()[i]);
    row.name = std::string(to_string(row.kind)) + "_" + std::to_string(i);
    row.macc = macc.per_layer[i];
    for (const WeightSlot& s : weight_slots(graph, i)) {
      row.flash_bytes += 4 * weights.get(i, s.role).size();
    }
    if (host_timings_ns) row.host_time_ns = (*host_timings_ns)[i];
  }
  for (const BufferLifetime& b : plan.buffers) {
    if (b.owner_layer < 0 || b.alias_of) continue;
    r.layers[static_cast<std::size_t>(b.owner_layer)].ram_bytes += b.bytes;
  }

  std::vector<double> flash, ram, time;
  for (const LayerComplexity& row : r.layers) {
    flash.push_back(static_cast<double>(row.flash_bytes));
    ram.push_back(static_cast<double>(row.ram_bytes));
    time.push_back(host_timings_ns ? *row.host_time_ns : static_cast<double>(row.macc));
    r.total_macc += row.macc;
    r.total_flash_bytes += row.flash_bytes;
    r.total_ram_bytes += row.ram_bytes;
  }
  r.time_from_host = host_timings_ns.has_value();
  if (r.time_from_host) {
    double total = 0;
    for (double t : time) total += t;
    r.total_host_time_ns = total;
  }
  const auto fp = percentages(flash), rp = percentages(ram), tp = percentages(time);
  for (std::size_t i = 0; i < r.layers.size(); ++i) {
    r.layers[i].flash_pct = fp[i];
    r.layers[i].ram_pct = rp[i];
    r.layers[i].time_pct = tp[i];
  }
  return r;
}

void add_estimates(ComplexityReport& report, const std::vector<McuSpec>& mcus,
                   double cycles_per_macc) {
  report.cycles_per_macc = cycles_per_macc;
  for (const McuSpec& m : mcus) {
    report.estimates.push_back(
        {m.name, m.clock_mhz, estimate_target_time(report.total_macc, m, cycles_per_macc)});
  }
}

std::vector<double> measure_layer_times(const Graph& graph, const WeightStore& weights,
                                        std::span<const float> input, int repeats) {
  using Clock = std::chrono::steady_clock;
  std::vector<std::vector<double>> samples(graph.size());
  for (int rep = 0; rep < std::max(repeats, 1); ++rep) {
    Tensor act(graph.input_shape(), {input.begin(), input.end()});
    for (std::size_t i = 0; i < graph.size(); ++i) {
      const auto start = Clock::now();
      act = run_layer(graph, weights, i, act);
      samples[i].push_back(std::chrono::duration<double, std::nano>(Clock::now() - start).count());
    }
  }
  std::vector<double> medians;
  for (auto& s : samples) {
    std::sort(s.begin(), s.end());
    medians.push_back(s[s.size() / 2]);
  }
  return medians;
}

std::vector<std::pair<LayerKind, double>> share_by_kind(const ComplexityReport& report,
                                                        double LayerComplexity::*column) {
  std::vector<std::pair<LayerKind, double>> out;
  for (LayerKind k : {LayerKind::kDense, LayerKind::kConv1D, LayerKind::kMaxPool1D,
                      LayerKind::kBatchNorm, LayerKind::kLstm}) {
    double sum = 0;
    bool present = false;
    for (const LayerComplexity& row : report.layers) {
      if (row.kind == k) {
        sum += row.*column;
        present = true;
      }
    }
    if (present) out.emplace_back(k, sum);
  }
  return out;
}

std::string ComplexityReport::to_json() const {
  nlohmann::json j;
  j["schema"] = "tnnc-complexity-v1";
  j["total_macc"] = total_macc;
  j["total_flash_bytes"] = total_flash_bytes;
  j["total_ram_bytes"] = total_ram_bytes;
  j["arena_bytes"] = arena_bytes;
  j["time_source"] = time_from_host ? "host" : "macc";
  j["cycles_per_macc"] = cycles_per_macc;
  if (total_host_time_ns) j["total_host_time_ns"] = *total_host_time_ns;
  nlohmann::json rows = nlohmann::json::array();
  for (const LayerComplexity& l : layers) {
    nlohmann::json row{{"name", l.name},         {"kind", to_string(l.kind)},
                       {"macc", l.macc},         {"flash_bytes", l.flash_bytes},
                       {"ram_bytes", l.ram_bytes}, {"flash_pct", l.flash_pct},
                       {"ram_pct", l.ram_pct},   {"time_pct", l.time_pct}};
    if (l.host_time_ns) row["host_time_ns"] = *l.host_time_ns;
    rows.push_back(std::move(row));
  }
  j["layers"] = std::move(rows);
  nlohmann::json est = nlohmann::json::array();
  for (const TargetEstimate& e : estimates) {
    est.push_back({{"mcu", e.mcu}, {"clock_mhz", e.clock_mhz}, {"time_ms", e.time_ms}});
  }
  j["estimates"] = std::move(est);
  return j.dump(2) + "\n";
}

std::string ComplexityReport::to_table() const {
  std::ostringstream os;
  char line[160];
  std::snprintf(line, sizeof line, "%-14s %10s %10s %10s %8s %8s %8s\n", "layer", "macc", "flash_B",
                "ram_B", "flash%", "ram%", time_from_host ? "time%" : "macc%");
  os << line;
  for (const LayerComplexity& l : layers) {
    std::snprintf(line, sizeof line, "%-14s %10llu %10llu %10llu %8.2f %8.2f %8.2f\n", l.name.c_str(),
                  static_cast<unsigned long long>(l.macc), static_cast<unsigned long long>(l.flash_bytes),
                  static_cast<unsigned long long>(l.ram_bytes), l.flash_pct, l.ram_pct, l.time_pct);
    os << line;
  }
  std::snprintf(line, sizeof line, "%-14s %10llu %10llu %10llu %8.2f %8.2f %8.2f\n", "total",
                static_cast<unsigned long long>(total_macc),
                static_cast<unsigned long long>(total_flash_bytes),
                static_cast<unsigned long long>(total_ram_bytes), 100.0, 100.0, 100.0);
  os << line;
  std::snprintf(line, sizeof line, "arena: %zu B (%.2f KiB), flash: %llu B (%.2f KiB)\n", arena_bytes,
                arena_bytes / 1024.0, static_cast<unsigned long long>(total_flash_bytes),
                total_flash_bytes / 1024.0);
  os << line;
  for (const TargetEstimate& e : estimates) {
    std::snprintf(line, sizeof line, "estimate %-10s @ %6.1f MHz: %8.3f ms (%.2f cycles/MACC)\n",
                  e.mcu.c_str(), e.clock_mhz, e.time_ms, cycles_per_macc);
    os << line;
  }
  return os.str();
}

}  // namespace tnn
