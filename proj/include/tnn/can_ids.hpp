#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tnn/window_set.hpp"

namespace tnn {

enum class AttackKind { kPlateau, kContinuousChange, kPlayback, kSuppress, kFlooding };

inline constexpr std::array<AttackKind, 5> kAttackKinds = {
    AttackKind::kPlateau, AttackKind::kContinuousChange, AttackKind::kPlayback,
    AttackKind::kSuppress, AttackKind::kFlooding};

std::string_view to_string(AttackKind kind);
std::optional<AttackKind> attack_kind_from_string(std::string_view name);

// Window label codes.
inline constexpr float kNormalLabel = 0.0f;
inline float attack_label(AttackKind kind) { return 1.0f + static_cast<float>(kind); }
std::optional<AttackKind> attack_kind_of_label(float label);

struct CanMessage {
  bool attack = false;
  std::optional<AttackKind> kind;
  double timestamp = 0.0;
  std::uint32_t id = 0;
  std::array<std::optional<float>, 4> signals;
};

// CSV with header `label,time,id,signal1,signal2,signal3,signal4`; empty
// cells are absent signals. Labels: normal|attack|0|1|<attack kind name>.
// Plain attack labels take `default_kind`.
std::vector<CanMessage> parse_can_csv(std::string_view text,
                                      std::optional<AttackKind> default_kind = std::nullopt);

inline constexpr std::size_t kCanSignalColumns = 20;

// (message id, signal index 0..3) -> snapshot column, bijective onto 0..columns-1.
class SignalMap {
 public:
  SignalMap(std::map<std::pair<std::uint32_t, std::size_t>, std::size_t> entries,
            std::size_t columns = kCanSignalColumns);

  // CSV `id,signal,column` (signal is 1-based like the CAN CSV header).
  static SignalMap parse(std::string_view text, std::size_t columns = kCanSignalColumns);

  std::size_t columns() const { return columns_; }
  bool knows_id(std::uint32_t id) const;
  std::optional<std::size_t> column(std::uint32_t id, std::size_t signal) const;

 private:
  std::map<std::pair<std::uint32_t, std::size_t>, std::size_t> entries_;
  std::size_t columns_;
};

struct CanWindows {
  WindowSet windows;
  std::size_t skipped_unmapped = 0;  // messages whose id the map does not know
  std::size_t rows = 0;              // snapshot rows produced
};

// One snapshot row per mapped message (last known value per column, starting
// at 0). Window label is the kind of its first attack message, else normal.
// Throws EmptyStream for an empty message list.
CanWindows build_can_windows(std::span<const CanMessage> messages, const SignalMap& map,
                             std::size_t window = 24, std::size_t stride = 1);

// Mean absolute error over all elements. Throws ShapeMismatch on size mismatch.
double mae_score(std::span<const float> x, std::span<const float> reconstruction);

// Nearest-rank empirical quantile: the ceil(q*N)-th smallest score.
// Throws EmptyScores, or InvalidArgument for q outside (0, 1].
double select_threshold(std::span<const double> scores_on_normal, double quantile = 0.99);

struct DetectionMetrics {
  std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
  std::optional<double> precision;  // nullopt when TP + FP == 0
  std::optional<double> recall;     // nullopt when TP + FN == 0
};

struct DetectionReport {
  DetectionMetrics overall;
  std::map<AttackKind, DetectionMetrics> per_kind;  // kinds present in labels
  std::optional<double> mean_precision;              // over kinds with a defined value
  std::optional<double> mean_recall;

  std::string to_json() const;
};

DetectionMetrics tally(const std::vector<bool>& flags, const std::vector<bool>& truth);

// `labels` are window label codes. Per-kind metrics use windows of that kind
// plus every normal window. Throws LengthMismatch.
DetectionReport eval_detection(const std::vector<bool>& flags, std::span<const float> labels);

}  // namespace tnn
