// Writes the bundled case-study models (seeded random weights) and small
// synthetic sample logs under the given repository root.
//
//   tnn_fixtures <repo-root>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <random>
#include <string>

#include "tnn/error.hpp"
#include "tnn/fixtures.hpp"
#include "tnn/model_format.hpp"

namespace fs = std::filesystem;

namespace {

std::string line(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Ten message ids with two signals each fill the 20 snapshot columns.
// Messages 300..339 carry a plateau on id 3 and 450..479 a playback of id 7.
void write_can_sample(const fs::path& dir) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> noise(-0.02, 0.02);
  std::string csv = "label,time,id,signal1,signal2,signal3,signal4\n";
  for (int i = 0; i < 600; ++i) {
    const int id = i % 10 + 1;
    const double t = 0.01 * i;
    double s1 = 0.5 + 0.4 * std::sin(0.05 * i + id);
    double s2 = 0.5 + 0.3 * std::cos(0.03 * i + 2 * id);
    std::string label = "normal";
    if (i >= 300 && i < 340 && id == 3) {
      s1 = 0.95;
      label = "plateau";
    } else if (i >= 450 && i < 480 && id == 7) {
      s1 = 0.5 + 0.4 * std::sin(0.05 * (i - 200) + id);
      label = "playback";
    }
    s1 = std::clamp(s1 + noise(rng), 0.0, 1.0);
    s2 = std::clamp(s2 + noise(rng), 0.0, 1.0);
    csv += line("%s,%.2f,id%d,%.4f,%.4f,,\n", label.c_str(), t, id, s1, s2);
  }
  tnn::write_file_text(dir / "can_sample.csv", csv);

  std::string map = "id,signal,column\n";
  for (int id = 1; id <= 10; ++id) {
    for (int s = 1; s <= 2; ++s) map += line("id%d,%d,%d\n", id, s, (id - 1) * 2 + s - 1);
  }
  tnn::write_file_text(dir / "can_signal_map.csv", map);
}

// Eight constant-current discharge cycles with slowly fading capacity.
void write_battery_sample(const fs::path& dir) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> noise(-0.005, 0.005);
  std::string csv = "cycle_id,time,voltage,current,temperature,capacity\n";
  for (int c = 0; c < 8; ++c) {
    const double capacity = 1.86 - 0.02 * c;
    const int n = 40 + 3 * c;
    const double duration = 3600.0 * capacity / 2.0;
    for (int k = 0; k < n; ++k) {
      const double x = static_cast<double>(k) / (n - 1);
      const double t = duration * x;
      const double v = 4.2 - 0.7 * x - 0.5 * std::pow(x, 8) + noise(rng);
      const double temp = 24.0 + 12.0 * x + noise(rng) * 10;
      csv += line("c%02d,%.1f,%.4f,%.4f,%.3f,%.4f\n", c + 1, t, v, -2.0 + noise(rng), temp, capacity);
    }
  }
  tnn::write_file_text(dir / "battery_sample.csv", csv);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: tnn_fixtures <repo-root>\n";
    return 1;
  }
  const fs::path root(argv[1]);
  try {
    fs::create_directories(root / "models");
    fs::create_directories(root / "data" / "samples");
    for (const tnn::Model& m : {tnn::make_can_autoencoder(), tnn::make_battery_cnn_lstm()}) {
      std::cout << "wrote " << tnn::save_model_files(root / "models", m.graph, m.weights).string() << "\n";
    }
    write_can_sample(root / "data" / "samples");
    write_battery_sample(root / "data" / "samples");
    std::cout << "wrote samples under " << (root / "data" / "samples").string() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "tnn_fixtures: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
