#include "tnn/codegen.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "tnn/error.hpp"
#include "tnn/model_format.hpp"

namespace tnn {

namespace {

constexpr std::array<std::string_view, 37> kCKeywords = {
    "auto",     "break",    "case",     "char",   "const",    "continue", "default",  "do",
    "double",   "else",     "enum",     "extern", "float",    "for",      "goto",     "if",
    "inline",   "int",      "long",     "register", "restrict", "return", "short",    "signed",
    "sizeof",   "static",   "struct",   "switch", "typedef",  "union",    "unsigned", "void",
    "volatile", "while",    "_Bool",    "_Complex", "_Imaginary"};

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::string hex_float(float v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%af", static_cast<double>(v));
  return buf;
}

// Offsets into the flat weight table for every (layer, role).
std::map<WeightStore::Key, std::size_t> weight_offsets(const Graph& graph) {
  std::map<WeightStore::Key, std::size_t> out;
  std::size_t at = 0;
  for (std::size_t i = 0; i < graph.size(); ++i) {
    for (const WeightSlot& s : weight_slots(graph, i)) {
      out[{i, s.role}] = at;
      at += s.element_count();
    }
  }
  return out;
}

class SourceWriter {
 public:
  SourceWriter(const Graph& graph, const MemoryPlan& plan, std::string name)
      : graph_(graph), plan_(plan), name_(std::move(name)), offsets_(weight_offsets(graph)) {}

  std::string model_source();

 private:
  std::size_t arena_index(std::size_t buffer) const { return plan_.offset_of(buffer) / 4; }
  std::size_t w(std::size_t layer, WeightRole role) const { return offsets_.at({layer, role}); }
  std::string activate(Activation act, const std::string& expr);

  void emit_dense(std::ostream& os, std::size_t i, const DenseSpec& d);
  void emit_conv1d(std::ostream& os, std::size_t i, const Conv1DSpec& c);
  void emit_maxpool1d(std::ostream& os, std::size_t i, const MaxPool1DSpec& p);
  void emit_batchnorm(std::ostream& os, std::size_t i, const BatchNormSpec& b);
  void emit_lstm(std::ostream& os, std::size_t i, const LstmSpec& l);
  void emit_io(std::ostream& os, std::size_t i) const;

  const Graph& graph_;
  const MemoryPlan& plan_;
  std::string name_;
  std::map<WeightStore::Key, std::size_t> offsets_;
  std::set<Activation> used_;
};

std::string SourceWriter::activate(Activation act, const std::string& expr) {
  if (act == Activation::kLinear) return expr;
  used_.insert(act);
  return "act_" + std::string(to_string(act)) + "(" + expr + ")";
}

void SourceWriter::emit_io(std::ostream& os, std::size_t i) const {
  const std::size_t in_buf = i == 0 ? plan_.input_buffer : plan_.layer_output[i - 1];
  os << "    const float *x = arena.f + " << arena_index(in_buf) << ";\n"
     << "    float *y = arena.f + " << arena_index(plan_.layer_output[i]) << ";\n";
}

void SourceWriter::emit_dense(std::ostream& os, std::size_t i, const DenseSpec& d) {
  const TensorShape& in = graph_.layer_input_shape(i);
  const std::size_t steps = in.timesteps(), n_in = in.features(), units = d.units;
  os << "/* layer " << i << ": dense " << n_in << " -> " << units << " over " << steps
     << " step(s), " << to_string(d.activation) << " */\n"
     << "static void layer_" << i << "(void)\n{\n";
  emit_io(os, i);
  os << "    for (int t = 0; t < " << steps << "; ++t) {\n"
     << "        for (int o = 0; o < " << units << "; ++o) {\n"
     << "            float acc = W(" << w(i, WeightRole::kBias) << " + o);\n"
     << "            for (int i = 0; i < " << n_in << "; ++i) {\n"
     << "                acc += W(" << w(i, WeightRole::kKernel) << " + o * " << n_in
     << " + i) * x[t * " << n_in << " + i];\n"
     << "            }\n"
     << "            y[t * " << units << " + o] = " << activate(d.activation, "acc") << ";\n"
     << "        }\n"
     << "    }\n}\n\n";
}

void SourceWriter::emit_conv1d(std::ostream& os, std::size_t i, const Conv1DSpec& c) {
  const TensorShape& in = graph_.layer_input_shape(i);
  const std::size_t channels = in.features();
  const std::size_t out_steps = graph_.layer_output_shape(i)[0];
  os << "/* layer " << i << ": conv1d " << c.filters << " filters, kernel " << c.kernel
     << ", stride " << c.stride << ", " << in.to_string() << " -> "
     << graph_.layer_output_shape(i).to_string() << ", " << to_string(c.activation) << " */\n"
     << "static void layer_" << i << "(void)\n{\n";
  emit_io(os, i);
  os << "    for (int t = 0; t < " << out_steps << "; ++t) {\n"
     << "        for (int f = 0; f < " << c.filters << "; ++f) {\n"
     << "            float acc = W(" << w(i, WeightRole::kBias) << " + f);\n"
     << "            for (int k = 0; k < " << c.kernel << "; ++k) {\n"
     << "                for (int c = 0; c < " << channels << "; ++c) {\n"
     << "                    acc += W(" << w(i, WeightRole::kKernel) << " + (f * " << c.kernel
     << " + k) * " << channels << " + c) * x[(t * " << c.stride << " + k) * " << channels
     << " + c];\n"
     << "                }\n"
     << "            }\n"
     << "            y[t * " << c.filters << " + f] = " << activate(c.activation, "acc") << ";\n"
     << "        }\n"
     << "    }\n}\n\n";
}

void SourceWriter::emit_maxpool1d(std::ostream& os, std::size_t i, const MaxPool1DSpec& p) {
  const TensorShape& in = graph_.layer_input_shape(i);
  const std::size_t channels = in.features();
  const std::size_t out_steps = graph_.layer_output_shape(i)[0];
  os << "/* layer " << i << ": maxpool1d pool " << p.pool << ", stride " << p.stride << ", "
     << in.to_string() << " -> " << graph_.layer_output_shape(i).to_string()
     << ", in place */\n"
     << "static void layer_" << i << "(void)\n{\n";
  emit_io(os, i);
  os << "    for (int t = 0; t < " << out_steps << "; ++t) {\n"
     << "        for (int c = 0; c < " << channels << "; ++c) {\n"
     << "            float m = x[t * " << p.stride * channels << " + c];\n"
     << "            for (int k = 1; k < " << p.pool << "; ++k) {\n"
     << "                const float v = x[(t * " << p.stride << " + k) * " << channels
     << " + c];\n"
     << "                if (v > m) m = v;\n"
     << "            }\n"
     << "            y[t * " << channels << " + c] = m;\n"
     << "        }\n"
     << "    }\n}\n\n";
}

void SourceWriter::emit_batchnorm(std::ostream& os, std::size_t i, const BatchNormSpec& b) {
  const TensorShape& in = graph_.layer_input_shape(i);
  const std::size_t channels = in.features();
  os << "/* layer " << i << ": batchnorm over " << in.to_string() << ", in place */\n"
     << "static void layer_" << i << "(void)\n{\n";
  emit_io(os, i);
  os << "    for (int t = 0; t < " << in.timesteps() << "; ++t) {\n"
     << "        for (int c = 0; c < " << channels << "; ++c) {\n"
     << "            const int idx = t * " << channels << " + c;\n"
     << "            y[idx] = W(" << w(i, WeightRole::kGamma) << " + c) * (x[idx] - W("
     << w(i, WeightRole::kMovingMean) << " + c)) / sqrtf(W(" << w(i, WeightRole::kMovingVariance)
     << " + c) + " << hex_float(b.epsilon) << ") + W(" << w(i, WeightRole::kBeta) << " + c);\n"
     << "        }\n"
     << "    }\n}\n\n";
}

void SourceWriter::emit_lstm(std::ostream& os, std::size_t i, const LstmSpec& l) {
  const TensorShape& in = graph_.layer_input_shape(i);
  const std::size_t steps = in[0], n_in = in[1], u = l.units;
  used_.insert(Activation::kSigmoid);
  os << "/* layer " << i << ": lstm " << u << " units over " << in.to_string() << ", "
     << (l.return_sequences ? "all steps" : "last step") << " */\n"
     << "static void layer_" << i << "(void)\n{\n";
  emit_io(os, i);
  os << "    float *h = arena.f + " << arena_index(*plan_.layer_state[i]) << ";\n"
     << "    float *c = h + " << u << ";\n"
     << "    float *z = arena.f + " << arena_index(*plan_.layer_scratch[i]) << ";\n"
     << "    for (int j = 0; j < " << u << "; ++j) {\n"
     << "        h[j] = 0.0f;\n"
     << "        c[j] = 0.0f;\n"
     << "    }\n"
     << "    for (int t = 0; t < " << steps << "; ++t) {\n"
     << "        for (int r = 0; r < " << 4 * u << "; ++r) {\n"
     << "            float acc = W(" << w(i, WeightRole::kBias) << " + r);\n"
     << "            for (int i = 0; i < " << n_in << "; ++i) {\n"
     << "                acc += W(" << w(i, WeightRole::kKernel) << " + r * " << n_in
     << " + i) * x[t * " << n_in << " + i];\n"
     << "            }\n"
     << "            for (int j = 0; j < " << u << "; ++j) {\n"
     << "                acc += W(" << w(i, WeightRole::kRecurrent) << " + r * " << u
     << " + j) * h[j];\n"
     << "            }\n"
     << "            z[r] = acc;\n"
     << "        }\n"
     << "        for (int j = 0; j < " << u << "; ++j) {\n"
     << "            const float ig = act_sigmoid(z[j]);\n"
     << "            const float fg = act_sigmoid(z[" << u << " + j]);\n"
     << "            const float gg = tanhf(z[" << 2 * u << " + j]);\n"
     << "            const float og = act_sigmoid(z[" << 3 * u << " + j]);\n"
     << "            c[j] = fg * c[j] + ig * gg;\n"
     << "            h[j] = og * tanhf(c[j]);\n"
     << "        }\n";
  if (l.return_sequences) {
    os << "        for (int j = 0; j < " << u << "; ++j) {\n"
       << "            y[t * " << u << " + j] = h[j];\n"
       << "        }\n"
       << "    }\n";
  } else {
    os << "    }\n"
       << "    for (int j = 0; j < " << u << "; ++j) {\n"
       << "        y[j] = h[j];\n"
       << "    }\n";
  }
  os << "}\n\n";
}

std::string SourceWriter::model_source() {
  const std::string macro = upper(name_);
  std::ostringstream layers;
  for (std::size_t i = 0; i < graph_.size(); ++i) {
    std::visit(
        [&](const auto& spec) {
          using T = std::decay_t<decltype(spec)>;
          if constexpr (std::is_same_v<T, DenseSpec>) emit_dense(layers, i, spec);
          else if constexpr (std::is_same_v<T, Conv1DSpec>) emit_conv1d(layers, i, spec);
          else if constexpr (std::is_same_v<T, MaxPool1DSpec>) emit_maxpool1d(layers, i, spec);
          else if constexpr (std::is_same_v<T, BatchNormSpec>) emit_batchnorm(layers, i, spec);
          else emit_lstm(layers, i, spec);
        },
        graph_.layers()[i]);
  }

  std::ostringstream os;
  os << "/* " << name_ << "_model.c: generated inference code for model '" << graph_.name()
     << "'. Do not edit. */\n\n"
     << "#include \"" << name_ << "_model.h\"\n\n"
     << "#include <math.h>\n"
     << "#include <stdint.h>\n\n"
     << "typedef union {\n    uint32_t bits;\n    float value;\n} " << name_ << "_word_t;\n\n"
     << "extern const " << name_ << "_word_t " << name_ << "_weights[];\n\n"
     << "#define W(i) (" << name_ << "_weights[(i)].value)\n\n"
     << "static union {\n    float f[" << macro << "_ARENA_BYTES / 4];\n    double align;\n} arena;\n\n";
  if (used_.count(Activation::kRelu)) {
    os << "static float act_relu(float v)\n{\n    return v > 0.0f ? v : 0.0f;\n}\n\n";
  }
  if (used_.count(Activation::kTanh)) {
    os << "static float act_tanh(float v)\n{\n    return tanhf(v);\n}\n\n";
  }
  if (used_.count(Activation::kSigmoid)) {
    os << "static float act_sigmoid(float v)\n{\n    return 1.0f / (1.0f + expf(-v));\n}\n\n";
  }
  os << layers.str();

  const std::size_t in_index = arena_index(plan_.input_buffer);
  const std::size_t out_index = arena_index(plan_.layer_output.back());
  os << "int " << name_ << "_init(void)\n{\n"
     << "    for (int i = 0; i < " << macro << "_ARENA_BYTES / 4; ++i) {\n"
     << "        arena.f[i] = 0.0f;\n"
     << "    }\n"
     << "    return 0;\n}\n\n"
     << "int " << name_ << "_run(const float *input, float *output)\n{\n"
     << "    if (input == 0 || output == 0) {\n"
     << "        return -1;\n"
     << "    }\n"
     << "    for (int i = 0; i < " << macro << "_IN_SIZE; ++i) {\n"
     << "        arena.f[" << in_index << " + i] = input[i];\n"
     << "    }\n";
  for (std::size_t i = 0; i < graph_.size(); ++i) os << "    layer_" << i << "();\n";
  os << "    for (int i = 0; i < " << macro << "_OUT_SIZE; ++i) {\n"
     << "        output[i] = arena.f[" << out_index << " + i];\n"
     << "    }\n"
     << "    return 0;\n}\n";
  return os.str();
}

}  // namespace

bool is_c_identifier(std::string_view name) {
  if (name.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_')) return false;
  for (char c : name) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  }
  return std::find(kCKeywords.begin(), kCKeywords.end(), name) == kCKeywords.end();
}

std::vector<float> flatten_weights(const Graph& graph, const WeightStore& weights) {
  std::vector<float> flat;
  for (std::size_t i = 0; i < graph.size(); ++i) {
    for (const WeightSlot& s : weight_slots(graph, i)) {
      const auto& v = weights.get(i, s.role);
      flat.insert(flat.end(), v.begin(), v.end());
    }
  }
  return flat;
}

std::string emit_weights_table(std::span<const float> values, std::string_view name) {
  std::ostringstream os;
  // A zero-length array is not valid C; weightless models carry one unused word.
  const std::size_t n = std::max<std::size_t>(values.size(), 1);
  os << "const " << name << "_word_t " << name << "_weights[" << n << "] = {\n";
  if (values.empty()) os << "    {0x00000000u}\n";
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (!std::isfinite(values[k])) {
      throw Error(ErrorCode::kNonFiniteWeight, "weight " + std::to_string(k) + " is not finite");
    }
    char buf[24];
    std::snprintf(buf, sizeof buf, "{0x%08Xu}", std::bit_cast<std::uint32_t>(values[k]));
    if (k % 6 == 0) os << "    ";
    os << buf;
    if (k + 1 < values.size()) os << (k % 6 == 5 ? ",\n" : ", ");
  }
  if (!values.empty()) os << "\n";
  os << "};\n";
  return os.str();
}

GeneratedBundle generate(const Graph& graph, const WeightStore& weights, const MemoryPlan& plan,
                         const std::string& name) {
  if (!is_c_identifier(name)) {
    throw Error(ErrorCode::kInvalidIdentifier, "'" + name + "' is not a C identifier");
  }
  if (!graph.resolved()) throw Error(ErrorCode::kInvalidArgument, "graph shapes are not resolved");
  validate_weights(graph, weights);
  if (plan.layer_output.size() != graph.size()) {
    throw Error(ErrorCode::kInvalidArgument, "memory plan does not belong to this graph");
  }

  GeneratedBundle b;
  b.name = name;
  const std::string macro = upper(name);
  const std::size_t in_size = graph.input_shape().element_count();
  const std::size_t out_size = graph.output_shape().element_count();

  std::ostringstream h;
  h << "/* " << name << "_model.h: generated inference API for model '" << graph.name()
    << "'. Do not edit. */\n"
    << "#ifndef " << macro << "_MODEL_H\n#define " << macro << "_MODEL_H\n\n"
    << "#define " << macro << "_IN_SIZE " << in_size << "\n"
    << "#define " << macro << "_OUT_SIZE " << out_size << "\n"
    << "#define " << macro << "_ARENA_BYTES " << plan.arena_bytes << "\n\n"
    << "#ifdef __cplusplus\nextern \"C\" {\n#endif\n\n"
    << "int " << name << "_init(void);\n"
    << "int " << name << "_run(const float *input, float *output);\n\n"
    << "#ifdef __cplusplus\n}\n#endif\n\n"
    << "#endif\n";
  b.header = h.str();

  b.source = SourceWriter(graph, plan, name).model_source();

  const std::vector<float> flat = flatten_weights(graph, weights);
  std::ostringstream ws;
  ws << "/* " << name << "_weights.c: " << flat.size() << " binary32 weights of model '"
     << graph.name() << "' as IEEE-754 bit patterns. Do not edit. */\n\n"
     << "#include <stdint.h>\n\n"
     << "typedef union {\n    uint32_t bits;\n    float value;\n} " << name << "_word_t;\n\n"
     << "extern const " << name << "_word_t " << name << "_weights[];\n\n"
     << emit_weights_table(flat, name);
  b.weights_source = ws.str();

  nlohmann::json r;
  r["schema"] = "tnnc-compile-v1";
  r["model"] = graph.name();
  r["name"] = name;
  r["in_size"] = in_size;
  r["out_size"] = out_size;
  r["arena_bytes"] = plan.arena_bytes;
  r["flash_bytes"] = plan.flash_bytes;
  r["weight_table_bytes"] = flat.size() * 4;
  r["param_count"] = param_count(graph);
  const MaccCount macc = macc_count(graph);
  r["macc_total"] = macc.total;
  nlohmann::json layers = nlohmann::json::array();
  for (std::size_t i = 0; i < graph.size(); ++i) {
    layers.push_back({{"index", i},
                      {"kind", to_string(kind_of(graph.layers()[i]))},
                      {"output_shape", graph.layer_output_shape(i).to_string()},
                      {"params", layer_param_count(graph, i)},
                      {"stored_weights", layer_stored_count(graph, i)},
                      {"macc", macc.per_layer[i]},
                      {"output_offset", plan.offset_of(plan.layer_output[i])},
                      {"in_place", runs_in_place(graph.layers()[i])}});
  }
  r["layers"] = std::move(layers);
  nlohmann::json buffers = nlohmann::json::array();
  for (const BufferLifetime& bl : plan.buffers) {
    buffers.push_back({{"id", bl.id},
                       {"kind", to_string(bl.kind)},
                       {"bytes", bl.bytes},
                       {"offset", plan.offset_of(bl.id)},
                       {"first", bl.first},
                       {"last", bl.last},
                       {"alias_of", bl.alias_of ? nlohmann::json(*bl.alias_of) : nlohmann::json()}});
  }
  r["buffers"] = std::move(buffers);
  b.report = r.dump(2) + "\n";
  return b;
}

void write_bundle(const GeneratedBundle& bundle, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create " + dir.string() + ": " + ec.message());
  write_file_text(dir / bundle.header_file(), bundle.header);
  write_file_text(dir / bundle.source_file(), bundle.source);
  write_file_text(dir / bundle.weights_file(), bundle.weights_source);
}

}  // namespace tnn
