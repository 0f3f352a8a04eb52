#pragma once

// Randomized property checks for the data pipelines. Each returns a verdict
// with the first counterexample found, so the unit suite and the acceptance
// binary report the same thing.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "random.hpp"
#include "tnn/battery.hpp"
#include "tnn/can_ids.hpp"

namespace tnn::testing {

struct PropertyVerdict {
  std::string name;
  bool ok = true;
  std::string detail;
  int trials = 0;
};

// Identity map for `ids` message ids carrying `per_id` signals each.
inline SignalMap dense_signal_map(std::uint32_t ids, std::size_t per_id) {
  std::map<std::pair<std::uint32_t, std::size_t>, std::size_t> e;
  for (std::uint32_t id = 0; id < ids; ++id) {
    for (std::size_t s = 0; s < per_id; ++s) e[{id + 1, s}] = id * per_id + s;
  }
  return SignalMap(std::move(e), ids * per_id);
}

inline std::vector<CanMessage> random_stream(Rng& rng, std::size_t n, std::uint32_t ids, double attack_p) {
  std::vector<CanMessage> out;
  for (std::size_t i = 0; i < n; ++i) {
    CanMessage m;
    m.timestamp = 0.01 * static_cast<double>(i);
    m.id = static_cast<std::uint32_t>(rng.between(1, ids));
    m.attack = rng.coin(attack_p);
    if (m.attack) m.kind = kAttackKinds[rng.between(0, 4)];
    m.signals[0] = rng.uniform(0.0f, 1.0f);
    if (rng.coin()) m.signals[1] = rng.uniform(0.0f, 1.0f);
    out.push_back(m);
  }
  return out;
}

inline PropertyVerdict window_count_law(std::uint32_t seed, int trials = 300) {
  PropertyVerdict v{"window count law"};
  Rng rng(seed);
  const SignalMap map = dense_signal_map(10, 2);
  for (; v.trials < trials; ++v.trials) {
    const std::size_t n = rng.between(1, 80), window = rng.between(1, 30), stride = rng.between(1, 5);
    const auto msgs = random_stream(rng, n, 10, 0.1);
    const CanWindows w = build_can_windows(msgs, map, window, stride);
    const std::size_t expect = n < window ? 0 : (n - window) / stride + 1;
    if (w.rows != n || w.windows.size() != expect || w.windows.values.size() != expect * window * 20) {
      v.ok = false;
      v.detail = "N=" + std::to_string(n) + " window=" + std::to_string(window) + " stride=" +
                 std::to_string(stride) + " gave " + std::to_string(w.windows.size()) + ", expected " +
                 std::to_string(expect);
      return v;
    }
  }
  return v;
}

// Brute force: a window is an attack iff one of its rows came from an attack message.
inline PropertyVerdict label_soundness(std::uint32_t seed, int trials = 300) {
  PropertyVerdict v{"label propagation soundness"};
  Rng rng(seed);
  const SignalMap map = dense_signal_map(10, 2);
  for (; v.trials < trials; ++v.trials) {
    const std::size_t n = rng.between(1, 60), window = rng.between(1, 24), stride = rng.between(1, 3);
    const auto msgs = random_stream(rng, n, 10, rng.coin() ? 0.02 : 0.2);
    const CanWindows w = build_can_windows(msgs, map, window, stride);
    for (std::size_t k = 0; k < w.windows.size(); ++k) {
      bool any = false;
      for (std::size_t r = k * stride; r < k * stride + window; ++r) any = any || msgs[r].attack;
      const bool labeled = attack_kind_of_label(w.windows.labels[k]).has_value();
      if (any != labeled) {
        v.ok = false;
        v.detail = "window " + std::to_string(k) + " labeled " + (labeled ? "attack" : "normal");
        return v;
      }
    }
  }
  return v;
}

inline PropertyVerdict scaler_round_trip(std::uint32_t seed, int trials = 300) {
  PropertyVerdict v{"scaler round trip"};
  Rng rng(seed);
  for (; v.trials < trials; ++v.trials) {
    WindowSet s;
    s.timesteps = rng.between(1, 20);
    s.features = rng.between(1, 6);
    const std::size_t windows = rng.between(1, 8);
    s.values = rng.floats(windows * s.timesteps * s.features, -1.0f, 1.0f);
    s.labels.assign(windows, 0.0f);
    const MinMaxScaler sc = MinMaxScaler::fit(s);
    const WindowSet scaled = sc.apply(s);
    const WindowSet back = sc.invert(scaled);
    for (std::size_t k = 0; k < s.values.size(); ++k) {
      const std::size_t f = k % s.features;
      const bool degenerate = sc.max()[f] == sc.min()[f];
      if (scaled.values[k] < 0.0f || scaled.values[k] > 1.0f ||
          (!degenerate && std::fabs(back.values[k] - s.values[k]) > 1e-6)) {
        v.ok = false;
        v.detail = "element " + std::to_string(k) + " round-tripped to " + std::to_string(back.values[k]);
        return v;
      }
    }
  }
  return v;
}

inline PropertyVerdict mae_properties(std::uint32_t seed, int trials = 500) {
  PropertyVerdict v{"mae oracle and laws"};
  Rng rng(seed);
  for (; v.trials < trials; ++v.trials) {
    const auto x = rng.floats(rng.between(1, 480)), y = rng.floats(x.size());
    long double naive = 0;
    for (std::size_t i = 0; i < x.size(); ++i) naive += std::fabs(static_cast<long double>(x[i]) - y[i]);
    naive /= x.size();
    const double m = mae_score(x, y);
    // Scaling by a power of two is exact, so equivariance can be checked tightly.
    const float a = rng.coin() ? -4.0f : 0.5f;
    std::vector<float> ax(x), ay(y);
    for (float& e : ax) e *= a;
    for (float& e : ay) e *= a;
    if (std::fabs(m - static_cast<double>(naive)) > 1e-7 || m < 0 || mae_score(x, x) != 0.0 ||
        std::fabs(mae_score(ax, ay) - std::fabs(a) * m) > 1e-12) {
      v.ok = false;
      v.detail = "mae " + std::to_string(m) + " vs oracle " + std::to_string(static_cast<double>(naive));
      return v;
    }
  }
  return v;
}

inline PropertyVerdict detection_tally(std::uint32_t seed, int trials = 500) {
  PropertyVerdict v{"precision/recall vs brute-force tally"};
  Rng rng(seed);
  for (; v.trials < trials; ++v.trials) {
    const std::size_t n = rng.between(1, 200);
    std::vector<bool> flags;
    std::vector<float> labels;
    for (std::size_t i = 0; i < n; ++i) {
      flags.push_back(rng.coin(0.3));
      labels.push_back(rng.coin(0.7) ? kNormalLabel : attack_label(kAttackKinds[rng.between(0, 4)]));
    }
    const DetectionReport r = eval_detection(flags, labels);
    double psum = 0, rsum = 0;
    int pn = 0, rn = 0;
    for (int kind = -1; kind < 5; ++kind) {
      std::uint64_t tp = 0, fp = 0, fn = 0;
      bool present = false;
      for (std::size_t i = 0; i < n; ++i) {
        const bool attack = labels[i] != kNormalLabel;
        if (kind >= 0 && attack && labels[i] != attack_label(kAttackKinds[static_cast<std::size_t>(kind)])) continue;
        present = present || attack;
        tp += flags[i] && attack;
        fp += flags[i] && !attack;
        fn += !flags[i] && attack;
      }
      const DetectionMetrics* m = &r.overall;
      if (kind >= 0) {
        const auto it = r.per_kind.find(kAttackKinds[static_cast<std::size_t>(kind)]);
        if (!present) {
          if (it != r.per_kind.end()) return {v.name, false, "absent kind reported", v.trials};
          continue;
        }
        if (it == r.per_kind.end()) return {v.name, false, "present kind missing", v.trials};
        m = &it->second;
      }
      const bool p_ok = tp + fp == 0 ? !m->precision : m->precision && *m->precision == double(tp) / double(tp + fp);
      const bool r_ok = tp + fn == 0 ? !m->recall : m->recall && *m->recall == double(tp) / double(tp + fn);
      if (m->tp != tp || m->fp != fp || m->fn != fn || !p_ok || !r_ok) {
        v.ok = false;
        v.detail = "kind " + std::to_string(kind) + " tallies disagree";
        return v;
      }
      if (kind >= 0 && m->precision) psum += *m->precision, ++pn;
      if (kind >= 0 && m->recall) rsum += *m->recall, ++rn;
    }
    const bool mp_ok = pn == 0 ? !r.mean_precision : r.mean_precision && std::fabs(*r.mean_precision - psum / pn) < 1e-12;
    const bool mr_ok = rn == 0 ? !r.mean_recall : r.mean_recall && std::fabs(*r.mean_recall - rsum / rn) < 1e-12;
    if (!mp_ok || !mr_ok) return {v.name, false, "means disagree", v.trials};
  }
  return v;
}

inline PropertyVerdict soh_boundary() {
  PropertyVerdict v{"soh boundary"};
  struct Case {
    double cmax, rated;
    bool replace;
  };
  const Case cases[] = {{1.6, 2.0, false}, {1.5999, 2.0, true}, {1.6001, 2.0, false},
                        {2.0, 2.0, false}, {0.0, 2.0, true},    {0.8, 1.0, false}};
  for (const Case& c : cases) {
    ++v.trials;
    const StateOfHealth s = compute_soh(c.cmax, c.rated);
    if (s.replace != c.replace || s.soh != c.cmax / c.rated) {
      return {v.name, false, "cmax " + std::to_string(c.cmax) + " rated " + std::to_string(c.rated), v.trials};
    }
  }
  ++v.trials;
  try {
    compute_soh(1.0, 0.0);
    return {v.name, false, "rated 0 accepted", v.trials};
  } catch (const std::exception&) {
  }
  return v;
}

inline PropertyVerdict capacity_mae(std::uint32_t seed, int trials = 300) {
  PropertyVerdict v{"capacity mae vs scalar recomputation"};
  Rng rng(seed);
  for (; v.trials < trials; ++v.trials) {
    const auto p = rng.floats(rng.between(1, 100), 1.0f, 2.0f), t = rng.floats(p.size(), 1.0f, 2.0f);
    long double sum = 0;
    for (std::size_t i = 0; i < p.size(); ++i) sum += std::fabs(static_cast<long double>(p[i]) - t[i]);
    if (std::fabs(eval_capacity(p, t) - static_cast<double>(sum / p.size())) > 1e-9 || eval_capacity(p, p) != 0.0) {
      return {v.name, false, "trial " + std::to_string(v.trials), v.trials};
    }
  }
  return v;
}

inline std::vector<PropertyVerdict> all_pipeline_properties(std::uint32_t seed) {
  return {window_count_law(seed),    label_soundness(seed + 1), scaler_round_trip(seed + 2),
          mae_properties(seed + 3),  detection_tally(seed + 4), capacity_mae(seed + 5),
          soh_boundary()};
}

}  // namespace tnn::testing
