#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "hawkes/events.hpp"
#include "hawkes/prng.hpp"
#include "hawkes/types.hpp"
#include "oracles.hpp"

using namespace hawkes;

namespace {

ReturnSeries series_of(const std::vector<double>& values) {
  std::vector<Date> dates;
  dates.reserve(values.size());
  int year = 2020;
  int month = 1;
  int day = 1;
  for (std::size_t i = 0; i < values.size(); ++i) {
    dates.push_back(Date{year, month, day});
    if (++day > 28) {
      day = 1;
      if (++month > 12) {
        month = 1;
        ++year;
      }
    }
  }
  return ReturnSeries(dates, values);
}

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& contents) {
    static int counter = 0;
    path = "hawkes_test_tmp_" + std::to_string(counter++) + ".csv";
    std::ofstream out(path);
    out << contents;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("type-7 quantiles on 1..10") {
  const ReturnSeries s = series_of({1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  const ThresholdPair t = compute_thresholds(s, 0.1, 0.9);
  CHECK(t.lower == doctest::Approx(1.9).epsilon(1e-14));
  CHECK(t.upper == doctest::Approx(9.1).epsilon(1e-14));
}

TEST_CASE("quantiles match the oracle on random data") {
  Rng rng(501);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> values(10 + static_cast<int>(rng.uniform01() * 200));
    for (double& v : values) v = rng.uniform(-5.0, 5.0);
    const ReturnSeries s = series_of(values);
    for (auto [lo, hi] : std::vector<std::pair<double, double>>{{0.1, 0.9}, {0.05, 0.95}, {0.25, 0.75}}) {
      const ThresholdPair t = compute_thresholds(s, lo, hi);
      CHECK(t.lower == doctest::Approx(oracle::quantile_type7(values, lo)).epsilon(1e-12));
      CHECK(t.upper == doctest::Approx(oracle::quantile_type7(values, hi)).epsilon(1e-12));
    }
  }
}

TEST_CASE("quantile edge quantiles hit the extremes") {
  const ReturnSeries s = series_of({3, 1, 4, 1, 5, 9, 2, 6, 5, 3});
  const ThresholdPair t = compute_thresholds(s, 0.0, 1.0);
  CHECK(t.lower == 1.0);
  CHECK(t.upper == 9.0);
}

TEST_CASE("threshold computation rejects degenerate inputs") {
  CHECK_THROWS_AS(compute_thresholds(series_of({1, 2, 3}), 0.1, 0.9), std::invalid_argument);
  const ReturnSeries s = series_of({1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  CHECK_THROWS_AS(compute_thresholds(s, 0.9, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(compute_thresholds(s, -0.1, 0.9), std::invalid_argument);
  CHECK_THROWS_AS(compute_thresholds(s, 0.1, 1.1), std::invalid_argument);
  const ReturnSeries flat = series_of(std::vector<double>(12, 2.5));
  CHECK_THROWS_AS(compute_thresholds(flat, 0.1, 0.9), std::invalid_argument);
}

TEST_CASE("extraction uses strict inequalities and bar-index times") {
  const ReturnSeries s = series_of({2.0, 0.1, -3.0, 1.481, -1.285});
  const ThresholdPair t{-1.285, 1.481};
  const EventSequence seq = extract_events(s, t, 0, 1);
  CHECK(seq.horizon() == 5.0);
  CHECK(seq.num_types() == 2);
  REQUIRE(seq.size() == 2);
  CHECK(seq.events()[0].time == 0.0);
  CHECK(seq.events()[0].mark == 0);
  CHECK(seq.events()[1].time == 2.0);
  CHECK(seq.events()[1].mark == 1);
}

TEST_CASE("extraction with custom mark ids and no crossings") {
  const ReturnSeries s = series_of({0.0, 0.1, -0.1, 0.2, 0.0});
  const EventSequence seq = extract_events(s, {-5.0, 5.0}, 2, 7);
  CHECK(seq.size() == 0);
  CHECK(seq.horizon() == 5.0);
  CHECK(seq.num_types() == 8);

  const EventSequence hit = extract_events(s, {-0.05, 0.15}, 2, 7);
  REQUIRE(hit.size() == 2);
  CHECK(hit.events()[0].mark == 7); // -0.1 at bar 2
  CHECK(hit.events()[1].mark == 2); // 0.2 at bar 3
}

TEST_CASE("end-to-end extraction pipeline on a synthetic series") {
  Rng rng(77);
  std::vector<double> values(500);
  for (double& v : values) v = rng.uniform(-1.0, 1.0);
  values[50] = 8.0;
  values[51] = -8.0;
  const ReturnSeries s = series_of(values);
  const ThresholdPair t = compute_thresholds(s, 0.1, 0.9);
  const EventSequence seq = extract_events(s, t, 0, 1);
  // Roughly 10% of bars on each side, always including the planted spikes.
  CHECK(seq.count_of(0) >= 40);
  CHECK(seq.count_of(0) <= 60);
  CHECK(seq.count_of(1) >= 40);
  CHECK(seq.count_of(1) <= 60);
  bool up_spike = false;
  bool down_spike = false;
  for (const MarkedEvent& e : seq.events()) {
    if (e.time == 50.0 && e.mark == 0) up_spike = true;
    if (e.time == 51.0 && e.mark == 1) down_spike = true;
  }
  CHECK(up_spike);
  CHECK(down_spike);
}

TEST_CASE("load_returns parses a well-formed file") {
  const TempFile file("date,return_pct\n2020-01-02,0.53\n2020-01-03,-1.20\n2020-01-06,0.00\n");
  const ReturnSeries s = load_returns(file.path);
  REQUIRE(s.values().size() == 3);
  CHECK(s.dates()[0].iso() == "2020-01-02");
  CHECK(s.values()[1] == -1.20);
  CHECK(s.values()[2] == 0.0);
}

TEST_CASE("load_returns reports the offending line number") {
  SUBCASE("bad value") {
    const TempFile file("date,return_pct\n2020-01-02,0.5\n2020-01-03,oops\n");
    try {
      load_returns(file.path);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find(":3:") != std::string::npos);
    }
  }
  SUBCASE("non-increasing dates") {
    const TempFile file("date,return_pct\n2020-01-03,0.5\n2020-01-02,0.6\n");
    CHECK_THROWS_AS(load_returns(file.path), ParseError);
  }
  SUBCASE("bad header") {
    const TempFile file("day,ret\n2020-01-02,0.5\n");
    CHECK_THROWS_AS(load_returns(file.path), ParseError);
  }
  SUBCASE("header only") {
    const TempFile file("date,return_pct\n");
    CHECK_THROWS_AS(load_returns(file.path), ParseError);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_returns("definitely_not_here.csv"), ParseError);
  }
}

TEST_CASE("sector_direction layout places ups first") {
  const MergeLayout layout = MergeLayout::sector_direction(3);
  REQUIRE(layout.mark_of.size() == 3);
  CHECK(layout.mark_of[0] == std::vector<int>{0, 3});
  CHECK(layout.mark_of[1] == std::vector<int>{1, 4});
  CHECK(layout.mark_of[2] == std::vector<int>{2, 5});
}

TEST_CASE("merging three bivariate sequences into the six-type layout") {
  const EventSequence s0({{1.0, 0}, {4.0, 1}}, 10.0, 2);
  const EventSequence s1({{2.0, 1}, {4.0, 0}}, 10.0, 2);
  const EventSequence s2({{0.5, 0}}, 10.0, 2);
  const EventSequence merged =
      merge_sequences({s0, s1, s2}, MergeLayout::sector_direction(3));
  CHECK(merged.num_types() == 6);
  CHECK(merged.horizon() == 10.0);
  REQUIRE(merged.size() == 5);
  CHECK(merged.events()[0].time == 0.5);
  CHECK(merged.events()[0].mark == 2); // sector 2 up
  CHECK(merged.events()[1].mark == 0); // sector 0 up at t=1
  CHECK(merged.events()[2].mark == 4); // sector 1 down at t=2
  // The t=4 tie orders by final mark: sector 1 up (1) before sector 0 down (3).
  CHECK(merged.events()[3].mark == 1);
  CHECK(merged.events()[4].mark == 3);
}

TEST_CASE("identity merge of a single sequence is a no-op") {
  const EventSequence s({{1.0, 0}, {2.0, 1}}, 5.0, 2);
  const EventSequence merged = merge_sequences({s}, MergeLayout::identity(2));
  REQUIRE(merged.size() == 2);
  CHECK(merged.num_types() == 2);
  CHECK(merged.events()[0].mark == 0);
  CHECK(merged.events()[1].mark == 1);
}

TEST_CASE("merge rejects mismatched horizons and overlapping layouts") {
  const EventSequence a({{1.0, 0}}, 10.0, 1);
  const EventSequence b({{1.0, 0}}, 12.0, 1);
  MergeLayout two_inputs;
  two_inputs.mark_of = {{0}, {1}};
  CHECK_THROWS_AS(merge_sequences({a, b}, two_inputs), std::invalid_argument);

  const EventSequence c({{1.0, 0}}, 10.0, 1);
  MergeLayout overlapping;
  overlapping.mark_of = {{0}, {0}};
  CHECK_THROWS_AS(merge_sequences({a, c}, overlapping), std::invalid_argument);

  MergeLayout wrong_arity;
  wrong_arity.mark_of = {{0}};
  CHECK_THROWS_AS(merge_sequences({a, c}, wrong_arity), std::invalid_argument);
}

TEST_CASE("segment_periods splits 2452 bars into 150-bar windows") {
  const EventSequence seq({{0.0, 0}, {150.0, 0}, {151.5, 0}, {2451.0, 0}}, 2452.0, 1);
  const std::vector<Period> periods = segment_periods(seq, 150.0);
  REQUIRE(periods.size() == 17);
  for (int i = 0; i < 16; ++i) {
    CHECK(periods[i].seq.horizon() == 150.0);
    CHECK_FALSE(periods[i].partial);
    CHECK(periods[i].index == i);
  }
  CHECK(periods[16].partial);
  CHECK(periods[16].seq.horizon() == doctest::Approx(52.0));
  // The event exactly at t = 150 belongs to the second window at local 0.
  REQUIRE(periods[1].seq.size() == 2);
  CHECK(periods[1].seq.events()[0].time == 0.0);
  CHECK(periods[1].seq.events()[1].time == doctest::Approx(1.5));
  REQUIRE(periods[0].seq.size() == 1);
  REQUIRE(periods[16].seq.size() == 1);
  CHECK(periods[16].seq.events()[0].time == doctest::Approx(51.0));
}

TEST_CASE("segmenting preserves every event exactly once") {
  Rng rng(91);
  std::vector<MarkedEvent> events;
  for (int i = 0; i < 300; ++i) events.push_back({rng.uniform(0.0, 997.0), rng.uniform01() < 0.5 ? 0 : 1});
  EventSequence seq(events, 997.0, 2);
  const std::vector<Period> periods = segment_periods(seq, 100.0);
  std::size_t total = 0;
  double base = 0.0;
  std::vector<double> reconstructed;
  for (const Period& p : periods) {
    total += p.seq.size();
    for (const MarkedEvent& e : p.seq.events()) reconstructed.push_back(base + e.time);
    base += p.seq.horizon();
  }
  CHECK(total == seq.size());
  CHECK(base == doctest::Approx(997.0));
  REQUIRE(reconstructed.size() == seq.size());
  for (std::size_t i = 0; i < reconstructed.size(); ++i) {
    CHECK(reconstructed[i] == doctest::Approx(seq.events()[i].time).epsilon(1e-12));
  }
}

TEST_CASE("segment_periods validates and handles empties") {
  const EventSequence seq = EventSequence::empty(10.0, 1);
  CHECK_THROWS_AS(segment_periods(seq, 0.0), std::invalid_argument);
  const std::vector<Period> periods = segment_periods(seq, 4.0);
  REQUIRE(periods.size() == 3);
  CHECK(periods[2].partial);
  for (const Period& p : periods) CHECK(p.seq.size() == 0);
  const EventSequence zero = EventSequence::empty(0.0, 1);
  CHECK(segment_periods(zero, 4.0).empty());
}

TEST_CASE("train_test_split cuts at floor(fraction * horizon)") {
  const EventSequence seq({{10.0, 0}, {2083.9, 0}, {2084.0, 0}, {2400.0, 0}}, 2452.0, 1);
  const SplitResult split = train_test_split(seq, 0.85);
  CHECK(split.split_time == 2084.0);
  CHECK(split.train.horizon() == 2084.0);
  CHECK(split.train.size() == 2);
  CHECK(split.test.horizon() == 2452.0);
  REQUIRE(split.test.size() == 2);
  // Test keeps global time, so history can condition the window.
  CHECK(split.test.events()[0].time == 2084.0);
  CHECK(split.test.events()[1].time == 2400.0);
}

TEST_CASE("train_test_split near the boundary keeps one test bar") {
  const EventSequence seq({{5.0, 0}}, 100.0, 1);
  const SplitResult split = train_test_split(seq, 0.999);
  CHECK(split.split_time == 99.0);
  const SplitResult half = train_test_split(seq, 0.5);
  CHECK(half.split_time == 50.0);
  CHECK(half.train.horizon() == 50.0);
  CHECK_THROWS_AS(train_test_split(seq, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(train_test_split(seq, 1.5), std::invalid_argument);
}
