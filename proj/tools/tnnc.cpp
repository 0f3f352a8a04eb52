// tnnc: command-line driver for the toolchain.
//
// Exit codes: 0 ok, 1 usage or unknown MCU, 2 bad input, 3 validation
// failure, 4 internal or output I/O error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "tnn/batch.hpp"
#include "tnn/battery.hpp"
#include "tnn/can_ids.hpp"
#include "tnn/codegen.hpp"
#include "tnn/error.hpp"
#include "tnn/memory_planner.hpp"
#include "tnn/model_format.hpp"
#include "tnn/profiler.hpp"
#include "tnn/validator.hpp"
#include "tnn/window_set.hpp"

namespace fs = std::filesystem;
using namespace tnn;

namespace {

enum Exit { kOk = 0, kUsage = 1, kBadInput = 2, kValidationFailed = 3, kInternal = 4 };

struct CliExit {
  int code;
  std::string message;
};

struct Globals {
  std::uint32_t seed = 42;
  std::string report;
  bool quiet = false;
};

Globals g;

std::ostream& out() {
  static std::ostringstream sink;
  if (g.quiet) {
    sink.str("");
    return sink;
  }
  return std::cout;
}

// Input failures (missing or unreadable files included) are exit 2.
template <typename F>
auto read_input(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw CliExit{kBadInput, e.what()};
  }
}

template <typename F>
void write_output(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    throw CliExit{kInternal, e.what()};
  } catch (const fs::filesystem_error& e) {
    throw CliExit{kInternal, e.what()};
  }
}

Model load(const std::string& path) {
  return read_input([&] { return load_model_file(path); });
}

VectorFile load_vectors(const std::string& path) {
  return read_input([&] { return read_vector_file(path); });
}

void write_report(const std::string& path, const nlohmann::json& j) {
  if (path.empty()) return;
  write_output([&] { write_file_text(path, j.dump(2) + "\n"); });
}

nlohmann::json envelope(const std::string& command) {
  return {{"schema", "tnnc-" + command + "-v1"}, {"command", command}};
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string opt_metric(const std::optional<double>& v) { return v ? fmt("%.4f", *v) : "undefined"; }

// ---- inspect ---------------------------------------------------------------

struct InspectArgs {
  std::string model;
};

int cmd_inspect(const InspectArgs& a) {
  const Model m = load(a.model);
  const MaccCount macc = macc_count(m.graph);
  const MemoryPlan p = plan(m.graph);
  auto& os = out();
  os << "model: " << m.graph.name() << "\n"
     << "input: " << m.graph.input_shape().to_string() << "\n";
  char line[160];
  std::snprintf(line, sizeof line, "%-3s %-12s %-16s %10s %10s\n", "#", "layer", "output shape", "params", "macc");
  os << line;
  nlohmann::json layers = nlohmann::json::array();
  for (std::size_t i = 0; i < m.graph.size(); ++i) {
    const std::string kind(to_string(kind_of(m.graph.layers()[i])));
    std::snprintf(line, sizeof line, "%-3zu %-12s %-16s %10llu %10llu\n", i, kind.c_str(),
                  m.graph.layer_output_shape(i).to_string().c_str(),
                  static_cast<unsigned long long>(layer_param_count(m.graph, i)),
                  static_cast<unsigned long long>(macc.per_layer[i]));
    os << line;
    layers.push_back({{"index", i},
                      {"kind", kind},
                      {"output_shape", m.graph.layer_output_shape(i).to_string()},
                      {"params", layer_param_count(m.graph, i)},
                      {"macc", macc.per_layer[i]}});
  }
  os << "params: " << param_count(m.graph) << "\n"
     << "macc: " << macc.total << "\n"
     << "flash_bytes: " << p.flash_bytes << "\n"
     << "arena_bytes: " << p.arena_bytes << "\n";
  auto j = envelope("inspect");
  j["model"] = m.graph.name();
  j["input_shape"] = m.graph.input_shape().to_string();
  j["layers"] = layers;
  j["params"] = param_count(m.graph);
  j["macc"] = macc.total;
  j["flash_bytes"] = p.flash_bytes;
  j["arena_bytes"] = p.arena_bytes;
  write_report(g.report, j);
  return kOk;
}

// ---- compile ---------------------------------------------------------------

struct CompileArgs {
  std::string model, outdir, name;
};

int cmd_compile(const CompileArgs& a) {
  const Model m = load(a.model);
  const std::string name = a.name.empty() ? m.graph.name() : a.name;
  if (!is_c_identifier(name)) throw CliExit{kUsage, "'" + name + "' is not a C identifier; pass --name"};
  const MemoryPlan p = plan(m.graph);
  const GeneratedBundle b = generate(m.graph, m.weights, p, name);
  ComplexityReport c = profile(m.graph, m.weights, p);
  add_estimates(c, default_mcu_catalog());
  write_output([&] {
    write_bundle(b, a.outdir);
    write_file_text(fs::path(a.outdir) / (name + "_compile.json"), b.report);
    write_file_text(fs::path(a.outdir) / (name + "_complexity.json"), c.to_json());
  });
  auto j = nlohmann::json::parse(b.report);
  out() << "wrote " << (fs::path(a.outdir) / b.header_file()).string() << ", " << b.source_file() << ", "
        << b.weights_file() << "\n"
        << "arena_bytes: " << p.arena_bytes << "\n"
        << "flash_bytes: " << p.flash_bytes << "\n";
  write_report(g.report, j);
  return kOk;
}

// ---- vectors / run ---------------------------------------------------------

struct VectorsArgs {
  std::string model, output;
  std::uint32_t count = 1000;
  float lo = -1.0f, hi = 1.0f;
};

int cmd_vectors(const VectorsArgs& a) {
  const Model m = load(a.model);
  if (!(a.lo < a.hi)) throw CliExit{kUsage, "--lo must be below --hi"};
  const VectorFile v = generate_vectors(m.graph, a.count, g.seed, {a.lo, a.hi});
  write_output([&] { write_vector_file(a.output, v); });
  out() << "wrote " << v.count << " vectors of length " << v.length << " (seed " << g.seed << ") to "
        << a.output << "\n";
  auto j = envelope("vectors");
  j["count"] = v.count;
  j["length"] = v.length;
  j["seed"] = g.seed;
  j["range"] = {a.lo, a.hi};
  write_report(g.report, j);
  return kOk;
}

struct RunArgs {
  std::string model, inputs, output;
};

int cmd_run(const RunArgs& a) {
  const Model m = load(a.model);
  const VectorFile in = load_vectors(a.inputs);
  if (in.count > 0 && in.length != m.graph.input_shape().element_count()) {
    throw CliExit{kBadInput, "input vectors have length " + std::to_string(in.length) + ", model expects " +
                                 std::to_string(m.graph.input_shape().element_count())};
  }
  const auto y = forward_batch_parallel(m.graph, m.weights, in.values);
  const auto len = static_cast<std::uint32_t>(m.graph.output_shape().element_count());
  write_output([&] { write_vector_file(a.output, make_vector_file(len, y)); });
  out() << "ran " << in.count << " vectors on " << parallel_threads() << " threads\n";
  auto j = envelope("run");
  j["vectors"] = in.count;
  j["output_length"] = len;
  write_report(g.report, j);
  return kOk;
}

// ---- validate --------------------------------------------------------------

struct ValidateArgs {
  std::string model, inputs, outputs;
  double atol = kDefaultAtol, rtol = kDefaultRtol;
};

int cmd_validate(const ValidateArgs& a) {
  const Model m = load(a.model);
  const VectorFile in = load_vectors(a.inputs);
  const VectorFile c = load_vectors(a.outputs);
  const CrossAccuracyReport r =
      read_input([&] { return cross_validate(m.graph, m.weights, c, in, a.atol, a.rtol); });
  out() << "vectors: " << r.vectors << "\n"
        << "elements: " << r.elements << "\n"
        << "matches: " << r.matches << "\n"
        << "cross_accuracy: " << fmt("%.6f", r.cross_accuracy) << "\n"
        << "max_abs_error: " << fmt("%.3g", r.max_abs_error) << "\n"
        << "max_rel_error: " << fmt("%.3g", r.max_rel_error) << "\n"
        << (r.passed() ? "PASS" : "FAIL") << " at atol " << a.atol << ", rtol " << a.rtol << "\n";
  const std::string path = g.report.empty() ? a.outputs + ".report.json" : g.report;
  write_output([&] { write_file_text(path, r.to_json()); });
  return r.passed() ? kOk : kValidationFailed;
}

// ---- profile ---------------------------------------------------------------

struct ProfileArgs {
  std::string model, catalog;
  std::vector<std::string> mcus;
  double cycles_per_macc = kDefaultCyclesPerMacc;
  int host_repeats = 0;
};

int cmd_profile(const ProfileArgs& a) {
  const Model m = load(a.model);
  const std::vector<McuSpec> catalog =
      a.catalog.empty() ? default_mcu_catalog() : read_input([&] { return load_mcu_catalog(a.catalog); });
  std::vector<McuSpec> targets;
  for (const std::string& name : a.mcus) {
    try {
      targets.push_back(find_mcu(catalog, name));
    } catch (const Error& e) {
      throw CliExit{kUsage, e.what()};
    }
  }
  if (a.mcus.empty()) targets = catalog;
  if (!(a.cycles_per_macc > 0)) throw CliExit{kUsage, "--cycles-per-macc must be positive"};

  const MemoryPlan p = plan(m.graph);
  std::optional<std::vector<double>> times;
  if (a.host_repeats > 0) {
    const VectorFile v = generate_vectors(m.graph, 1, g.seed);
    times = measure_layer_times(m.graph, m.weights, v.values, a.host_repeats);
  }
  ComplexityReport r = times ? profile(m.graph, m.weights, p, std::span<const double>(*times))
                             : profile(m.graph, m.weights, p);
  add_estimates(r, targets, a.cycles_per_macc);
  out() << r.to_table();
  auto j = nlohmann::json::parse(r.to_json());
  j["model"] = m.graph.name();
  write_report(g.report, j);
  return kOk;
}

// ---- CAN intrusion detection ----------------------------------------------

struct IdsWindowArgs {
  std::string csv, map, windows, labels, kind;
  std::size_t window = 24, stride = 1;
};

int cmd_ids_window(const IdsWindowArgs& a) {
  std::optional<AttackKind> kind;
  if (!a.kind.empty()) {
    kind = attack_kind_from_string(a.kind);
    if (!kind) throw CliExit{kUsage, "unknown attack kind '" + a.kind + "'"};
  }
  const auto messages = read_input([&] { return parse_can_csv(read_file_text(a.csv), kind); });
  const SignalMap map = read_input([&] { return SignalMap::parse(read_file_text(a.map)); });
  const CanWindows w = read_input([&] { return build_can_windows(messages, map, a.window, a.stride); });
  const auto [win, lab] = to_vector_files(w.windows);
  write_output([&] {
    write_vector_file(a.windows, win);
    write_vector_file(a.labels, lab);
  });
  std::size_t attacks = 0;
  for (float l : w.windows.labels) attacks += l != kNormalLabel;
  out() << "messages: " << messages.size() << "\n"
        << "skipped_unmapped: " << w.skipped_unmapped << "\n"
        << "rows: " << w.rows << "\n"
        << "windows: " << w.windows.size() << " (" << attacks << " attack)\n";
  auto j = envelope("ids-window");
  j["messages"] = messages.size();
  j["skipped_unmapped"] = w.skipped_unmapped;
  j["rows"] = w.rows;
  j["windows"] = w.windows.size();
  j["attack_windows"] = attacks;
  j["window"] = a.window;
  j["stride"] = a.stride;
  write_report(g.report, j);
  return kOk;
}

std::vector<double> reconstruction_scores(const Model& m, const VectorFile& windows) {
  const std::size_t in = m.graph.input_shape().element_count();
  if (windows.count > 0 && windows.length != in) {
    throw CliExit{kBadInput, "windows have length " + std::to_string(windows.length) + ", model expects " +
                                 std::to_string(in)};
  }
  if (m.graph.output_shape().element_count() != in) {
    throw CliExit{kBadInput, "model output shape differs from its input; not an autoencoder"};
  }
  const auto y = forward_batch_parallel(m.graph, m.weights, windows.values);
  std::vector<double> scores;
  for (std::size_t i = 0; i < windows.count; ++i) {
    scores.push_back(mae_score(windows.vector(i), std::span<const float>(y).subspan(i * in, in)));
  }
  return scores;
}

struct IdsEvalArgs {
  std::string model, windows, labels, calibration, scores_out;
  double quantile = 0.99;
  std::optional<double> threshold;
};

int cmd_ids_eval(const IdsEvalArgs& a) {
  const Model m = load(a.model);
  const VectorFile windows = load_vectors(a.windows);
  const VectorFile labels = load_vectors(a.labels);
  if (labels.length != 1 || labels.count != windows.count) {
    throw CliExit{kBadInput, "labels must hold one value per window"};
  }
  const auto scores = reconstruction_scores(m, windows);

  double threshold = 0;
  std::string source;
  if (a.threshold) {
    threshold = *a.threshold;
    source = "fixed";
  } else {
    std::vector<double> normal;
    if (!a.calibration.empty()) {
      normal = reconstruction_scores(m, load_vectors(a.calibration));
      source = "calibration";
    } else {
      for (std::size_t i = 0; i < scores.size(); ++i) {
        if (labels.values[i] == kNormalLabel) normal.push_back(scores[i]);
      }
      source = "normal-windows";
    }
    try {
      threshold = select_threshold(normal, a.quantile);
    } catch (const Error& e) {
      throw CliExit{e.code() == ErrorCode::kInvalidArgument ? kUsage : kBadInput, e.what()};
    }
  }
  std::vector<bool> flags;
  for (double s : scores) flags.push_back(s > threshold);
  const DetectionReport r = read_input([&] { return eval_detection(flags, labels.values); });

  auto& os = out();
  os << "windows: " << windows.count << "\n"
     << "threshold: " << fmt("%.6g", threshold) << " (" << source << ")\n"
     << "flagged: " << r.overall.tp + r.overall.fp << "\n"
     << "precision: " << opt_metric(r.overall.precision) << "\n"
     << "recall: " << opt_metric(r.overall.recall) << "\n";
  for (const auto& [k, metrics] : r.per_kind) {
    os << "  " << to_string(k) << ": precision " << opt_metric(metrics.precision) << ", recall "
       << opt_metric(metrics.recall) << "\n";
  }
  os << "mean_precision: " << opt_metric(r.mean_precision) << "\n"
     << "mean_recall: " << opt_metric(r.mean_recall) << "\n";

  if (!a.scores_out.empty()) {
    std::vector<float> s(scores.begin(), scores.end());
    write_output([&] { write_vector_file(a.scores_out, make_vector_file(1, s)); });
  }
  auto j = envelope("ids-eval");
  j["threshold"] = threshold;
  j["threshold_source"] = source;
  j["quantile"] = a.quantile;
  j["windows"] = windows.count;
  j["metrics"] = nlohmann::json::parse(r.to_json());
  write_report(g.report, j);
  return kOk;
}

// ---- battery capacity ------------------------------------------------------

struct BattWindowArgs {
  std::string csv, windows, targets, scaler_in, scaler_out;
  std::size_t samples = 20;
};

int cmd_batt_window(const BattWindowArgs& a) {
  const auto cycles = read_input([&] { return parse_battery_csv(read_file_text(a.csv)); });
  const WindowSet raw = read_input([&] { return build_battery_windows(cycles, a.samples); });
  const MinMaxScaler scaler = a.scaler_in.empty()
                                  ? read_input([&] { return MinMaxScaler::fit(raw); })
                                  : read_input([&] { return MinMaxScaler::from_json(read_file_text(a.scaler_in)); });
  const WindowSet scaled = read_input([&] { return scaler.apply(raw); });
  const auto [win, tgt] = to_vector_files(scaled);
  write_output([&] {
    write_vector_file(a.windows, win);
    write_vector_file(a.targets, tgt);
    if (!a.scaler_out.empty()) write_file_text(a.scaler_out, scaler.to_json());
  });
  out() << "cycles: " << cycles.size() << "\n"
        << "windows: " << scaled.size() << " of " << a.samples << "x4\n"
        << "scaler: " << (a.scaler_in.empty() ? "fitted" : "loaded") << "\n";
  for (std::size_t f : scaler.degenerate_features()) {
    std::cerr << "warning: feature " << f << " is constant and scales to 0\n";
  }
  auto j = envelope("batt-window");
  j["cycles"] = cycles.size();
  j["windows"] = scaled.size();
  j["samples"] = a.samples;
  j["degenerate_features"] = scaler.degenerate_features();
  write_report(g.report, j);
  return kOk;
}

struct BattEvalArgs {
  std::string model, windows, targets, predictions_out;
  std::optional<double> rated;
};

int cmd_batt_eval(const BattEvalArgs& a) {
  const Model m = load(a.model);
  const VectorFile windows = load_vectors(a.windows);
  const VectorFile targets = load_vectors(a.targets);
  if (windows.count > 0 && windows.length != m.graph.input_shape().element_count()) {
    throw CliExit{kBadInput, "windows have length " + std::to_string(windows.length) + ", model expects " +
                                 std::to_string(m.graph.input_shape().element_count())};
  }
  if (m.graph.output_shape().element_count() != 1) throw CliExit{kBadInput, "model must emit one value"};
  if (targets.length != 1 || targets.count != windows.count) {
    throw CliExit{kBadInput, "targets must hold one value per window"};
  }
  const auto pred = forward_batch_parallel(m.graph, m.weights, windows.values);
  const double mae = read_input([&] { return eval_capacity(pred, targets.values); });
  auto& os = out();
  os << "windows: " << windows.count << "\n"
     << "mae: " << fmt("%.6f", mae) << "\n";
  auto j = envelope("batt-eval");
  j["windows"] = windows.count;
  j["mae"] = mae;
  if (a.rated) {
    nlohmann::json soh = nlohmann::json::array();
    std::size_t flagged = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
      const StateOfHealth s = [&] {
        try {
          return compute_soh(pred[i], *a.rated);
        } catch (const Error& e) {
          throw CliExit{kUsage, e.what()};
        }
      }();
      flagged += s.replace;
      soh.push_back({{"window", i}, {"predicted_capacity", pred[i]}, {"soh", s.soh}, {"replace", s.replace}});
    }
    os << "rated_capacity: " << *a.rated << "\n"
       << "replace_flags: " << flagged << " of " << pred.size() << "\n";
    j["rated_capacity"] = *a.rated;
    j["replace_flags"] = flagged;
    j["soh"] = std::move(soh);
  }
  if (!a.predictions_out.empty()) {
    write_output([&] { write_vector_file(a.predictions_out, make_vector_file(1, pred)); });
  }
  write_report(g.report, j);
  return kOk;
}

int exit_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::kInvalidArgument: return kUsage;
    case ErrorCode::kIoError: return kInternal;
    default: return kBadInput;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tnnc: compile, validate and profile small neural networks for microcontrollers"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--seed", g.seed, "Seed for generated vectors")->capture_default_str();
  app.add_option("--report", g.report, "Write a JSON report to this path");
  app.add_flag("--quiet,-q", g.quiet, "Suppress console output");

  InspectArgs inspect;
  auto* c_inspect = app.add_subcommand("inspect", "Print topology, parameter and MACC counts");
  c_inspect->add_option("model", inspect.model, "Model manifest (.tnnf.json)")->required();

  CompileArgs compile;
  auto* c_compile = app.add_subcommand("compile", "Generate C sources and reports");
  c_compile->add_option("model", compile.model)->required();
  c_compile->add_option("-o,--out", compile.outdir, "Output directory")->required();
  c_compile->add_option("--name", compile.name, "C symbol prefix (defaults to the model name)");

  VectorsArgs vectors;
  auto* c_vectors = app.add_subcommand("vectors", "Generate seeded random input vectors");
  c_vectors->add_option("model", vectors.model)->required();
  c_vectors->add_option("-o,--out", vectors.output, "Output vector file")->required();
  c_vectors->add_option("-n,--count", vectors.count)->capture_default_str();
  c_vectors->add_option("--lo", vectors.lo)->capture_default_str();
  c_vectors->add_option("--hi", vectors.hi)->capture_default_str();

  RunArgs run;
  auto* c_run = app.add_subcommand("run", "Run the reference interpreter over a vector file");
  c_run->add_option("model", run.model)->required();
  c_run->add_option("-i,--inputs", run.inputs)->required();
  c_run->add_option("-o,--out", run.output)->required();

  ValidateArgs validate;
  auto* c_validate = app.add_subcommand("validate", "Compare C-model outputs against the interpreter");
  c_validate->add_option("model", validate.model)->required();
  c_validate->add_option("-i,--inputs", validate.inputs)->required();
  c_validate->add_option("-c,--outputs", validate.outputs, "Outputs produced by the C model")->required();
  c_validate->add_option("--atol", validate.atol)->capture_default_str();
  c_validate->add_option("--rtol", validate.rtol)->capture_default_str();

  ProfileArgs prof;
  auto* c_profile = app.add_subcommand("profile", "Per-layer complexity and target time estimates");
  c_profile->add_option("model", prof.model)->required();
  c_profile->add_option("--mcu", prof.mcus, "MCU name from the catalog (repeatable)");
  c_profile->add_option("--catalog", prof.catalog, "MCU catalog JSON (defaults to the built-in one)");
  c_profile->add_option("--cycles-per-macc", prof.cycles_per_macc)->capture_default_str();
  c_profile->add_option("--host-timing", prof.host_repeats, "Time layers on the host with N repeats");

  IdsWindowArgs idsw;
  auto* c_idsw = app.add_subcommand("ids-window", "Window a CAN message log");
  c_idsw->add_option("csv", idsw.csv)->required();
  c_idsw->add_option("--map", idsw.map, "Signal map CSV (id,signal,column)")->required();
  c_idsw->add_option("--windows", idsw.windows)->required();
  c_idsw->add_option("--labels", idsw.labels)->required();
  c_idsw->add_option("--window", idsw.window)->capture_default_str();
  c_idsw->add_option("--stride", idsw.stride)->capture_default_str();
  c_idsw->add_option("--kind", idsw.kind, "Attack kind for rows labeled 'attack' or 1");

  IdsEvalArgs idse;
  auto* c_idse = app.add_subcommand("ids-eval", "Score CAN windows and report precision/recall");
  c_idse->add_option("model", idse.model)->required();
  c_idse->add_option("--windows", idse.windows)->required();
  c_idse->add_option("--labels", idse.labels)->required();
  c_idse->add_option("--calibration", idse.calibration, "Attack-free windows for threshold selection");
  c_idse->add_option("--quantile", idse.quantile)->capture_default_str();
  c_idse->add_option("--threshold", idse.threshold, "Fixed MAE threshold");
  c_idse->add_option("--scores", idse.scores_out, "Write per-window scores");

  BattWindowArgs battw;
  auto* c_battw = app.add_subcommand("batt-window", "Window and scale battery discharge cycles");
  c_battw->add_option("csv", battw.csv)->required();
  c_battw->add_option("--windows", battw.windows)->required();
  c_battw->add_option("--targets", battw.targets)->required();
  c_battw->add_option("--samples", battw.samples)->capture_default_str();
  c_battw->add_option("--scaler", battw.scaler_in, "Apply a previously fitted scaler");
  c_battw->add_option("--scaler-out", battw.scaler_out, "Write the fitted scaler");

  BattEvalArgs batte;
  auto* c_batte = app.add_subcommand("batt-eval", "Predict capacities and report MAE and SoH");
  c_batte->add_option("model", batte.model)->required();
  c_batte->add_option("--windows", batte.windows)->required();
  c_batte->add_option("--targets", batte.targets)->required();
  c_batte->add_option("--rated", batte.rated, "Rated capacity for SoH flags");
  c_batte->add_option("--predictions", batte.predictions_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*c_inspect) return cmd_inspect(inspect);
    if (*c_compile) return cmd_compile(compile);
    if (*c_vectors) return cmd_vectors(vectors);
    if (*c_run) return cmd_run(run);
    if (*c_validate) return cmd_validate(validate);
    if (*c_profile) return cmd_profile(prof);
    if (*c_idsw) return cmd_ids_window(idsw);
    if (*c_idse) return cmd_ids_eval(idse);
    if (*c_battw) return cmd_batt_window(battw);
    if (*c_batte) return cmd_batt_eval(batte);
  } catch (const CliExit& e) {
    std::cerr << "tnnc: " << e.message << "\n";
    return e.code;
  } catch (const Error& e) {
    std::cerr << "tnnc: " << e.what() << "\n";
    return exit_for(e);
  } catch (const std::exception& e) {
    std::cerr << "tnnc: internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}
