#include "tnn/validator.hpp"

#include <cmath>
#include <random>

#include "json.hpp"
#include "tnn/batch.hpp"
#include "tnn/error.hpp"

namespace tnn {

std::string CrossAccuracyReport::to_json() const {
  nlohmann::json j{{"schema", "tnnc-cross-accuracy-v1"},
                   {"vectors", vectors},
                   {"elements", elements},
                   {"matches", matches},
                   {"cross_accuracy", cross_accuracy},
                   {"max_abs_error", max_abs_error},
                   {"max_rel_error", max_rel_error},
                   {"atol", atol},
                   {"rtol", rtol},
                   {"reference", reference},
                   {"candidate", candidate},
                   {"passed", passed()}};
  return j.dump(2) + "\n";
}

VectorFile generate_vectors(const Graph& graph, std::uint32_t n, std::uint32_t seed,
                            InputRange range) {
  const auto length = static_cast<std::uint32_t>(graph.input_shape().element_count());
  std::mt19937 rng(seed);
  std::vector<float> values(std::size_t{n} * length);
  const double span = static_cast<double>(range.hi) - range.lo;
  for (float& v : values) {
    const double unit = static_cast<double>(rng() >> 8) * 0x1.0p-24;
    v = static_cast<float>(range.lo + span * unit);
  }
  VectorFile f;
  f.count = n;
  f.length = length;
  f.values = std::move(values);
  return f;
}

bool element_matches(float reference, float candidate, double atol, double rtol) {
  const double ref = reference;
  const double diff = std::fabs(static_cast<double>(candidate) - ref);
  return diff <= atol + rtol * std::fabs(ref);
}

CrossAccuracyReport compare_outputs(const VectorFile& reference, const VectorFile& candidate,
                                    double atol, double rtol) {
  if (reference.count != candidate.count || reference.length != candidate.length) {
    throw Error(ErrorCode::kShapeMismatch,
                "candidate holds " + std::to_string(candidate.count) + "x" +
                    std::to_string(candidate.length) + " values, reference " +
                    std::to_string(reference.count) + "x" + std::to_string(reference.length));
  }
  CrossAccuracyReport r;
  r.atol = atol;
  r.rtol = rtol;
  r.vectors = reference.count;
  r.elements = reference.values.size();

  // Per-vector partials reduced in vector order keep the report independent
  // of the thread count.
  struct Partial {
    std::uint64_t matches = 0;
    double max_abs = 0.0, max_rel = 0.0;
  };
  std::vector<Partial> partials(reference.count);
  const auto count = static_cast<std::ptrdiff_t>(reference.count);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t v = 0; v < count; ++v) {
    Partial p;
    const auto ref = reference.vector(static_cast<std::size_t>(v));
    const auto cand = candidate.vector(static_cast<std::size_t>(v));
    for (std::size_t k = 0; k < ref.size(); ++k) {
      const double diff = std::fabs(static_cast<double>(cand[k]) - ref[k]);
      const bool ok = element_matches(ref[k], cand[k], atol, rtol);
      p.matches += ok ? 1 : 0;
      // NaN candidates never match and count as infinite error.
      const double abs_err = std::isnan(diff) ? HUGE_VAL : diff;
      p.max_abs = std::max(p.max_abs, abs_err);
      if (ref[k] != 0.0f) p.max_rel = std::max(p.max_rel, abs_err / std::fabs(static_cast<double>(ref[k])));
    }
    partials[static_cast<std::size_t>(v)] = p;
  }
  for (const Partial& p : partials) {
    r.matches += p.matches;
    r.max_abs_error = std::max(r.max_abs_error, p.max_abs);
    r.max_rel_error = std::max(r.max_rel_error, p.max_rel);
  }
  r.cross_accuracy = r.elements == 0 ? 1.0 : static_cast<double>(r.matches) / r.elements;
  return r;
}

CrossAccuracyReport cross_validate(const Graph& graph, const WeightStore& weights,
                                   const VectorFile& c_outputs, const VectorFile& inputs,
                                   double atol, double rtol) {
  const std::size_t in = graph.input_shape().element_count();
  const std::size_t out = graph.output_shape().element_count();
  if (inputs.length != in && inputs.count != 0) {
    throw Error(ErrorCode::kShapeMismatch, "input vectors have length " +
                                               std::to_string(inputs.length) + ", model expects " +
                                               std::to_string(in));
  }
  if (c_outputs.count != inputs.count || (c_outputs.length != out && c_outputs.count != 0)) {
    throw Error(ErrorCode::kShapeMismatch, "output file holds " + std::to_string(c_outputs.count) +
                                               "x" + std::to_string(c_outputs.length) +
                                               " values, expected " + std::to_string(inputs.count) +
                                               "x" + std::to_string(out));
  }
  VectorFile reference;
  reference.count = inputs.count;
  reference.length = static_cast<std::uint32_t>(out);
  reference.values = forward_batch_parallel(graph, weights, inputs.values);
  VectorFile candidate = c_outputs;
  candidate.length = reference.length;
  return compare_outputs(reference, candidate, atol, rtol);
}

}  // namespace tnn
