// Regenerates the bundled synthetic fixtures under data/. Deterministic:
// every artifact is a pure function of the seeds written below, so a
// rebuild reproduces the committed files byte for byte.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "hawkes/io.hpp"
#include "hawkes/prng.hpp"
#include "hawkes/serialization.hpp"
#include "hawkes/simulate.hpp"
#include "hawkes/types.hpp"
#include "hawkes/version.hpp"

namespace fs = std::filesystem;
using namespace hawkes;

namespace {

constexpr int kBars = 2452;

HawkesModel linear2_model() {
  KernelParams p;
  p.mu = {0.024, 0.044};
  p.alpha = {{0.382, 0.387}, {0.218, 0.343}};
  p.omega = 0.1;
  return HawkesModel::linear(p);
}

HawkesModel sector6_trend_model() {
  KernelParams p;
  p.mu = {-0.226, -0.200, -0.341, -0.079, -0.024, -0.095};
  p.alpha = {{1.161, 0.240, 0.253, -0.335, -0.469, -0.154},
             {0.157, 1.143, -0.238, -0.230, -0.173, -0.208},
             {-0.105, -0.298, 1.313, -0.371, -0.474, -0.425},
             {0.109, 0.093, 0.002, 0.671, 0.420, -0.067},
             {0.037, -0.191, -0.005, 0.460, 0.831, 0.078},
             {-0.366, -0.100, -0.136, 0.071, 0.033, 1.092}};
  p.omega = 0.702;
  return HawkesModel::nonlinear(p, LinkSpec::floored(0.01));
}

HawkesModel sector6_flat_model() {
  KernelParams p;
  p.mu = {0.089, 0.093, 0.058, 0.091, 0.091, 0.061};
  p.alpha = {{-0.317, -0.536, -0.323, -0.340, -0.424, -0.452},
             {-0.375, -0.437, -0.315, -0.478, -0.379, -0.600},
             {-0.564, -0.314, -0.136, -0.408, -0.574, -0.577},
             {-0.576, -0.452, -0.427, -0.265, -0.470, -0.517},
             {-0.405, -0.505, -0.396, -0.406, -0.346, -0.401},
             {-0.203, -0.535, -0.418, -0.334, -0.403, -0.338}};
  p.omega = 0.004;
  return HawkesModel::nonlinear(p, LinkSpec::floored(0.01));
}

/// Generator for the return fixtures: the linear2 dynamics with mu scaled
/// up so the planted extreme count sits safely above the 10% quantile mass
/// and the thresholds land inside the planted magnitudes.
HawkesModel planted_model() {
  KernelParams p;
  p.mu = {0.036, 0.066};
  p.alpha = {{0.382, 0.387}, {0.218, 0.343}};
  p.omega = 0.1;
  return HawkesModel::linear(p);
}

Date next_weekday(Date d) {
  static const int lengths[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  auto advance = [&](Date x) {
    ++x.day;
    const bool leap = (x.year % 4 == 0 && x.year % 100 != 0) || x.year % 400 == 0;
    const int max_day = (x.month == 2 && leap) ? 29 : lengths[x.month - 1];
    if (x.day > max_day) {
      x.day = 1;
      if (++x.month > 12) {
        x.month = 1;
        ++x.year;
      }
    }
    return x;
  };
  // Day-of-week via the count of days since an anchor Monday (2009-01-05).
  d = advance(d);
  auto day_number = [](const Date& x) {
    int y = x.year;
    int m = x.month;
    if (m < 3) {
      --y;
      m += 12;
    }
    return 365 * y + y / 4 - y / 100 + y / 400 + (153 * (m - 3) + 2) / 5 + x.day;
  };
  while (day_number(d) % 7 == 3 || day_number(d) % 7 == 4) d = advance(d);
  return d;
}

/// Daily percent returns on kBars synthetic trading days: bars carrying a
/// planted type-0 event get a large positive return, type-1 a large
/// negative one, and every other bar gets noise inside (-1.2, 1.4). The
/// gap between noise and planted magnitudes keeps the 10%/90% quantile
/// thresholds inside the planted returns.
void write_returns(const std::string& path, std::uint64_t seed) {
  const EventSequence seq = simulate_ogata(planted_model(), kBars, seed);
  std::map<int, int> bar_mark;
  for (const MarkedEvent& e : seq.events()) {
    bar_mark.emplace(static_cast<int>(e.time), e.mark);
  }

  int planted_up = 0;
  int planted_down = 0;
  Rng noise(derive_seed(seed, "returns-noise"));
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << "date,return_pct\n";
  Date d{2009, 1, 5};
  char buf[64];
  for (int bar = 0; bar < kBars; ++bar) {
    double value = 0.0;
    const auto hit = bar_mark.find(bar);
    if (hit == bar_mark.end()) {
      value = noise.uniform(-1.2, 1.4);
    } else if (hit->second == 0) {
      value = 1.6 + noise.exponential(1.25);
      ++planted_up;
    } else {
      value = -1.5 - noise.exponential(1.25);
      ++planted_down;
    }
    std::snprintf(buf, sizeof(buf), "%.4f", value);
    out << d.iso() << ',' << buf << "\n";
    d = next_weekday(d);
  }
  if (!out) throw std::runtime_error(path + ": write failed");
  std::cout << "wrote " << path << " (planted up " << planted_up << ", down " << planted_down
            << ")\n";
}

void write_model(const std::string& path, const HawkesModel& model) {
  write_text_file(path, to_json(model) + "\n");
  std::cout << "wrote " << path << "\n";
}

void write_events(const std::string& path, const HawkesModel& model, double horizon,
                  std::uint64_t seed) {
  const EventSequence seq = simulate_ogata(model, horizon, seed);
  const ArtifactMeta meta{seed, to_hex(fnv1a64("gen_fixtures")), kVersion};
  write_event_csv(path, seq, meta);
  std::cout << "wrote " << path << " (" << seq.size() << " events)\n";
}

/// The trend model is metastable: it idles at the intensity floor until a
/// burst ignites, and an ignited burst is locally supercritical, so a
/// single long-horizon simulation grows without bound. The fixture instead
/// concatenates independent short segments; the segment horizon truncates
/// every burst while preserving the within-burst dynamics.
void write_segmented_events(const std::string& path, const HawkesModel& model,
                            double segment_len, int num_segments, std::uint64_t seed) {
  std::vector<MarkedEvent> merged;
  for (int s = 0; s < num_segments; ++s) {
    const EventSequence seg =
        simulate_ogata(model, segment_len, derive_seed(seed, "segment", static_cast<std::uint64_t>(s)));
    for (const MarkedEvent& e : seg.events()) {
      merged.push_back({e.time + segment_len * s, e.mark});
    }
  }
  const EventSequence seq(merged, segment_len * num_segments, model.dim());
  const ArtifactMeta meta{seed, to_hex(fnv1a64("gen_fixtures")), kVersion};
  write_event_csv(path, seq, meta);
  std::cout << "wrote " << path << " (" << seq.size() << " events, " << num_segments
            << " segments)\n";
}

} // namespace

int main(int argc, char** argv) {
  const std::string root = argc > 1 ? argv[1] : "data";
  try {
    fs::create_directories(root + "/models");
    fs::create_directories(root + "/returns");
    fs::create_directories(root + "/events");

    write_model(root + "/models/linear2.json", linear2_model());
    write_model(root + "/models/sector6_trend.json", sector6_trend_model());
    write_model(root + "/models/sector6_flat.json", sector6_flat_model());

    write_returns(root + "/returns/composite.csv", 101);
    write_returns(root + "/returns/consumer.csv", 201);
    write_returns(root + "/returns/medical.csv", 202);
    write_returns(root + "/returns/finance.csv", 204);

    write_events(root + "/events/linear2_T20000.csv", linear2_model(), 20000.0, 42);
    write_segmented_events(root + "/events/sector6_trend_seg.csv", sector6_trend_model(), 30.0,
                           100, 707);
  } catch (const std::exception& e) {
    std::cerr << "gen_fixtures: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
