#pragma once

#include <cstdint>
#include <string>

#include "tnn/graph.hpp"
#include "tnn/vector_file.hpp"

namespace tnn {

inline constexpr double kDefaultAtol = 1e-5;
inline constexpr double kDefaultRtol = 1e-4;

struct InputRange {
  float lo = -1.0f;
  float hi = 1.0f;
};

// Reference outputs come from the interpreter; the candidate is the generated
// C model. The match predicate is |candidate - reference| <= atol + rtol*|reference|.
struct CrossAccuracyReport {
  std::uint64_t vectors = 0;
  std::uint64_t elements = 0;
  std::uint64_t matches = 0;
  double cross_accuracy = 1.0;
  double max_abs_error = 0.0;
  double max_rel_error = 0.0;  // over elements with a non-zero reference
  double atol = kDefaultAtol;
  double rtol = kDefaultRtol;
  std::string reference = "interpreter";
  std::string candidate = "c-model";

  bool passed() const { return matches == elements; }
  std::string to_json() const;
};

// Elements uniform in [lo, hi) from MT19937 (32-bit) seeded with `seed`:
// value = lo + (hi - lo) * (draw >> 8) * 2^-24.
VectorFile generate_vectors(const Graph& graph, std::uint32_t n, std::uint32_t seed,
                            InputRange range = {});

bool element_matches(float reference, float candidate, double atol, double rtol);

// Compare precomputed reference outputs against candidate outputs.
CrossAccuracyReport compare_outputs(const VectorFile& reference, const VectorFile& candidate,
                                    double atol = kDefaultAtol, double rtol = kDefaultRtol);

// Runs the interpreter over `inputs` and compares against `c_outputs`.
// Throws ShapeMismatch when the files disagree with the graph.
CrossAccuracyReport cross_validate(const Graph& graph, const WeightStore& weights,
                                   const VectorFile& c_outputs, const VectorFile& inputs,
                                   double atol = kDefaultAtol, double rtol = kDefaultRtol);

}  // namespace tnn
