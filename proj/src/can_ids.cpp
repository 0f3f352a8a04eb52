#include "tnn/can_ids.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "json.hpp"
#include "csv.hpp"
#include "tnn/error.hpp"

namespace tnn {

std::string_view to_string(AttackKind kind) {
  switch (kind) {
    case AttackKind::kPlateau: return "plateau";
    case AttackKind::kContinuousChange: return "continuous_change";
    case AttackKind::kPlayback: return "playback";
    case AttackKind::kSuppress: return "suppress";
    case AttackKind::kFlooding: return "flooding";
  }
  return "plateau";
}

std::optional<AttackKind> attack_kind_from_string(std::string_view name) {
  for (AttackKind k : kAttackKinds) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

std::optional<AttackKind> attack_kind_of_label(float label) {
  if (label == kNormalLabel) return std::nullopt;
  for (AttackKind k : kAttackKinds) {
    if (label == attack_label(k)) return k;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown window label code " + std::to_string(label));
}

std::vector<CanMessage> parse_can_csv(std::string_view text, std::optional<AttackKind> default_kind) {
  const auto rows = detail::parse_csv(text);
  if (rows.empty()) throw Error(ErrorCode::kEmptyStream, "CAN CSV is empty");
  const std::vector<std::string> header{"label", "time", "id", "signal1", "signal2", "signal3", "signal4"};
  if (rows[0] != header) {
    throw Error(ErrorCode::kParseError, "CAN CSV header must be label,time,id,signal1..signal4");
  }
  std::vector<CanMessage> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::string where = "CAN CSV line " + std::to_string(r + 1);
    if (row.size() != header.size()) throw Error(ErrorCode::kParseError, where + ": expected 7 cells");
    CanMessage m;
    const std::string& label = row[0];
    if (label == "normal" || label == "0") {
      m.attack = false;
    } else if (label == "attack" || label == "1") {
      m.attack = true;
      m.kind = default_kind;
      if (!m.kind) throw Error(ErrorCode::kParseError, where + ": attack row needs an attack kind");
    } else if (auto k = attack_kind_from_string(label)) {
      m.attack = true;
      m.kind = k;
    } else {
      throw Error(ErrorCode::kParseError, where + ": unknown label '" + label + "'");
    }
    m.timestamp = detail::parse_double(row[1], where);
    std::string id = row[2];
    // SynCAN writes ids as "id3"; plain integers are accepted too.
    if (id.rfind("id", 0) == 0) id = id.substr(2);
    const double idv = detail::parse_double(id, where);
    if (idv < 0 || idv != std::floor(idv) || idv > 4294967295.0) {
      throw Error(ErrorCode::kParseError, where + ": bad message id");
    }
    m.id = static_cast<std::uint32_t>(idv);
    bool any = false;
    for (std::size_t s = 0; s < 4; ++s) {
      if (!row[3 + s].empty()) {
        m.signals[s] = static_cast<float>(detail::parse_double(row[3 + s], where));
        any = true;
      }
    }
    if (!any) throw Error(ErrorCode::kParseError, where + ": message carries no signal");
    if (!out.empty() && m.timestamp < out.back().timestamp) {
      throw Error(ErrorCode::kParseError, where + ": timestamps must be non-decreasing");
    }
    out.push_back(m);
  }
  return out;
}

SignalMap::SignalMap(std::map<std::pair<std::uint32_t, std::size_t>, std::size_t> entries,
                     std::size_t columns)
    : entries_(std::move(entries)), columns_(columns) {
  std::set<std::size_t> seen;
  for (const auto& [key, col] : entries_) {
    if (key.second >= 4) throw Error(ErrorCode::kInvalidArgument, "signal index must be 0..3");
    if (col >= columns_ || !seen.insert(col).second) {
      throw Error(ErrorCode::kInvalidArgument, "signal map column " + std::to_string(col) +
                                                   " is out of range or repeated");
    }
  }
  if (seen.size() != columns_) {
    throw Error(ErrorCode::kInvalidArgument, "signal map covers " + std::to_string(seen.size()) +
                                                 " of " + std::to_string(columns_) + " columns");
  }
}

SignalMap SignalMap::parse(std::string_view text, std::size_t columns) {
  const auto rows = detail::parse_csv(text);
  if (rows.empty() || rows[0] != std::vector<std::string>{"id", "signal", "column"}) {
    throw Error(ErrorCode::kParseError, "signal map header must be id,signal,column");
  }
  std::map<std::pair<std::uint32_t, std::size_t>, std::size_t> entries;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const std::string where = "signal map line " + std::to_string(r + 1);
    if (rows[r].size() != 3) throw Error(ErrorCode::kParseError, where + ": expected 3 cells");
    std::string id = rows[r][0];
    if (id.rfind("id", 0) == 0) id = id.substr(2);
    const auto idv = static_cast<std::uint32_t>(detail::parse_double(id, where));
    const double signal = detail::parse_double(rows[r][1], where);
    const double column = detail::parse_double(rows[r][2], where);
    if (signal < 1 || signal > 4 || column < 0) throw Error(ErrorCode::kParseError, where + ": out of range");
    if (!entries.emplace(std::pair{idv, static_cast<std::size_t>(signal) - 1}, static_cast<std::size_t>(column)).second) {
      throw Error(ErrorCode::kParseError, where + ": duplicate (id, signal)");
    }
  }
  return SignalMap(std::move(entries), columns);
}

bool SignalMap::knows_id(std::uint32_t id) const {
  auto it = entries_.lower_bound({id, 0});
  return it != entries_.end() && it->first.first == id;
}

std::optional<std::size_t> SignalMap::column(std::uint32_t id, std::size_t signal) const {
  auto it = entries_.find({id, signal});
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

CanWindows build_can_windows(std::span<const CanMessage> messages, const SignalMap& map,
                             std::size_t window, std::size_t stride) {
  if (messages.empty()) throw Error(ErrorCode::kEmptyStream, "no CAN messages");
  if (window < 1 || stride < 1) throw Error(ErrorCode::kInvalidArgument, "window and stride must be >= 1");
  CanWindows out;
  const std::size_t cols = map.columns();
  std::vector<float> snapshot(cols, 0.0f);
  std::vector<float> rows;
  std::vector<float> row_label;
  for (const CanMessage& m : messages) {
    if (!map.knows_id(m.id)) {
      ++out.skipped_unmapped;
      continue;
    }
    for (std::size_t s = 0; s < 4; ++s) {
      if (!m.signals[s]) continue;
      if (auto col = map.column(m.id, s)) snapshot[*col] = *m.signals[s];
    }
    rows.insert(rows.end(), snapshot.begin(), snapshot.end());
    if (m.attack && !m.kind) throw Error(ErrorCode::kInvalidArgument, "attack message without a kind");
    row_label.push_back(m.attack ? attack_label(*m.kind) : kNormalLabel);
  }
  out.rows = row_label.size();
  out.windows.timesteps = window;
  out.windows.features = cols;
  if (out.rows < window) return out;
  for (std::size_t start = 0; start + window <= out.rows; start += stride) {
    out.windows.values.insert(out.windows.values.end(),
                              rows.begin() + static_cast<std::ptrdiff_t>(start * cols),
                              rows.begin() + static_cast<std::ptrdiff_t>((start + window) * cols));
    float label = kNormalLabel;
    for (std::size_t r = start; r < start + window; ++r) {
      if (row_label[r] != kNormalLabel) {
        label = row_label[r];
        break;
      }
    }
    out.windows.labels.push_back(label);
  }
  return out;
}

double mae_score(std::span<const float> x, std::span<const float> reconstruction) {
  if (x.size() != reconstruction.size() || x.empty()) {
    throw Error(ErrorCode::kShapeMismatch, "mae_score needs two equal, non-empty windows");
  }
  double sum = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sum += std::fabs(static_cast<double>(x[i]) - static_cast<double>(reconstruction[i]));
  }
  return sum / static_cast<double>(x.size());
}

double select_threshold(std::span<const double> scores, double quantile) {
  if (scores.empty()) throw Error(ErrorCode::kEmptyScores, "no scores to threshold");
  if (!(quantile > 0.0 && quantile <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "quantile must lie in (0, 1]");
  }
  std::vector<double> sorted(scores.begin(), scores.end());
  std::sort(sorted.begin(), sorted.end());
  // The epsilon keeps q*N that lands on an integer from rounding up a rank.
  auto rank = static_cast<std::size_t>(std::ceil(quantile * static_cast<double>(sorted.size()) - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

DetectionMetrics tally(const std::vector<bool>& flags, const std::vector<bool>& truth) {
  if (flags.size() != truth.size()) {
    throw Error(ErrorCode::kLengthMismatch, "flags and labels differ in length");
  }
  DetectionMetrics m;
  for (std::size_t i = 0; i < flags.size(); ++i) {
    if (flags[i] && truth[i]) ++m.tp;
    else if (flags[i]) ++m.fp;
    else if (truth[i]) ++m.fn;
    else ++m.tn;
  }
  if (m.tp + m.fp > 0) m.precision = static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fp);
  if (m.tp + m.fn > 0) m.recall = static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fn);
  return m;
}

DetectionReport eval_detection(const std::vector<bool>& flags, std::span<const float> labels) {
  if (flags.size() != labels.size()) {
    throw Error(ErrorCode::kLengthMismatch, "flags and labels differ in length");
  }
  std::vector<std::optional<AttackKind>> kinds;
  std::vector<bool> truth;
  for (float l : labels) {
    kinds.push_back(attack_kind_of_label(l));
    truth.push_back(kinds.back().has_value());
  }
  DetectionReport r;
  r.overall = tally(flags, truth);

  double p_sum = 0, r_sum = 0;
  std::size_t p_n = 0, r_n = 0;
  for (AttackKind kind : kAttackKinds) {
    std::vector<bool> fk, tk;
    for (std::size_t i = 0; i < flags.size(); ++i) {
      if (!kinds[i] || *kinds[i] == kind) {
        fk.push_back(flags[i]);
        tk.push_back(truth[i]);
      }
    }
    if (std::find(tk.begin(), tk.end(), true) == tk.end()) continue;
    const DetectionMetrics m = tally(fk, tk);
    if (m.precision) {
      p_sum += *m.precision;
      ++p_n;
    }
    if (m.recall) {
      r_sum += *m.recall;
      ++r_n;
    }
    r.per_kind[kind] = m;
  }
  if (p_n) r.mean_precision = p_sum / static_cast<double>(p_n);
  if (r_n) r.mean_recall = r_sum / static_cast<double>(r_n);
  return r;
}

std::string DetectionReport::to_json() const {
  const auto metric = [](const DetectionMetrics& m) {
    const auto opt = [](const std::optional<double>& v) {
      return v ? nlohmann::json(*v) : nlohmann::json("undefined");
    };
    return nlohmann::json{{"tp", m.tp},           {"fp", m.fp},
                          {"fn", m.fn},           {"tn", m.tn},
                          {"precision", opt(m.precision)}, {"recall", opt(m.recall)}};
  };
  nlohmann::json j;
  j["overall"] = metric(overall);
  nlohmann::json kinds = nlohmann::json::object();
  for (const auto& [k, m] : per_kind) kinds[std::string(to_string(k))] = metric(m);
  j["per_kind"] = std::move(kinds);
  j["mean_precision"] = mean_precision ? nlohmann::json(*mean_precision) : nlohmann::json("undefined");
  j["mean_recall"] = mean_recall ? nlohmann::json(*mean_recall) : nlohmann::json("undefined");
  return j.dump(2);
}

}  // namespace tnn
