#include "hawkes/events.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <string>

namespace hawkes {

MergeLayout MergeLayout::identity(int num_types) {
  MergeLayout layout;
  layout.mark_of.emplace_back();
  for (int k = 0; k < num_types; ++k) layout.mark_of.back().push_back(k);
  return layout;
}

MergeLayout MergeLayout::sector_direction(int num_sectors) {
  MergeLayout layout;
  for (int i = 0; i < num_sectors; ++i) {
    layout.mark_of.push_back({i, num_sectors + i});
  }
  return layout;
}

namespace {

std::string_view trim_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

double parse_double(std::string_view text, const std::string& path, std::size_t line_no) {
  double out = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [p, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || p != last || !std::isfinite(out)) {
    throw ParseError(path + ":" + std::to_string(line_no) + ": cannot parse return value '" +
                     std::string(text) + "'");
  }
  return out;
}

} // namespace

ReturnSeries load_returns(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");

  std::vector<Date> dates;
  std::vector<double> values;
  std::string raw;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim_cr(raw);
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != "date,return_pct") {
        throw ParseError(path + ":" + std::to_string(line_no) +
                         ": expected header 'date,return_pct', got '" + std::string(line) + "'");
      }
      header_seen = true;
      continue;
    }
    const std::size_t comma = line.find(',');
    if (comma == std::string_view::npos) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": expected 'date,return_pct' row");
    }
    Date date;
    try {
      date = Date::parse(line.substr(0, comma));
    } catch (const ParseError& e) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
    const double value = parse_double(line.substr(comma + 1), path, line_no);
    if (!dates.empty() && !(dates.back() < date)) {
      const char* reason = dates.back() == date ? "duplicate date " : "non-increasing date ";
      throw ParseError(path + ":" + std::to_string(line_no) + ": " + reason + date.iso());
    }
    dates.push_back(date);
    values.push_back(value);
  }
  if (!header_seen) throw ParseError(path + ": missing header 'date,return_pct'");
  if (dates.empty()) throw ParseError(path + ": no data rows");
  return ReturnSeries(std::move(dates), std::move(values));
}

ThresholdPair compute_thresholds(const ReturnSeries& series, double q_low, double q_high) {
  if (series.size() < 10) {
    throw std::invalid_argument("compute_thresholds: need at least 10 observations, got " +
                                std::to_string(series.size()));
  }
  if (!(q_low >= 0.0) || !(q_high <= 1.0) || !(q_low < q_high)) {
    throw std::invalid_argument("compute_thresholds: need 0 <= q_low < q_high <= 1");
  }
  std::vector<double> sorted = series.values();
  std::sort(sorted.begin(), sorted.end());
  const auto quantile = [&sorted](double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(lo);
    if (lo + 1 >= sorted.size() || frac == 0.0) return sorted[lo];
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
  };
  const ThresholdPair out{quantile(q_low), quantile(q_high)};
  if (!(out.lower < out.upper)) {
    throw std::invalid_argument("compute_thresholds: degenerate thresholds, lower " +
                                std::to_string(out.lower) + " >= upper " +
                                std::to_string(out.upper));
  }
  return out;
}

EventSequence extract_events(const ReturnSeries& series, const ThresholdPair& thresholds,
                             int up_mark, int down_mark) {
  if (up_mark == down_mark || up_mark < 0 || down_mark < 0) {
    throw std::invalid_argument("extract_events: up and down marks must be distinct and non-negative");
  }
  if (!(thresholds.lower < thresholds.upper)) {
    throw std::invalid_argument("extract_events: thresholds must satisfy lower < upper");
  }
  std::vector<MarkedEvent> events;
  const std::vector<double>& values = series.values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] > thresholds.upper) {
      events.push_back({static_cast<double>(i), up_mark});
    } else if (values[i] < thresholds.lower) {
      events.push_back({static_cast<double>(i), down_mark});
    }
  }
  const int num_types = std::max(up_mark, down_mark) + 1;
  return EventSequence(std::move(events), static_cast<double>(series.size()), num_types);
}

EventSequence merge_sequences(const std::vector<EventSequence>& seqs, const MergeLayout& layout) {
  if (seqs.empty()) throw std::invalid_argument("merge_sequences: no input sequences");
  if (layout.mark_of.size() != seqs.size()) {
    throw std::invalid_argument("merge_sequences: layout must cover every input sequence");
  }
  const double horizon = seqs.front().horizon();
  int total_types = 0;
  for (const EventSequence& s : seqs) {
    if (s.horizon() != horizon) {
      throw std::invalid_argument("merge_sequences: horizon mismatch, " +
                                  std::to_string(s.horizon()) + " vs " + std::to_string(horizon));
    }
    total_types += s.num_types();
  }
  std::set<int> assigned;
  for (std::size_t i = 0; i < seqs.size(); ++i) {
    if (static_cast<int>(layout.mark_of[i].size()) != seqs[i].num_types()) {
      throw std::invalid_argument("merge_sequences: layout entry " + std::to_string(i) +
                                  " does not match the input's type count");
    }
    for (int target : layout.mark_of[i]) {
      if (target < 0 || target >= total_types || !assigned.insert(target).second) {
        throw std::invalid_argument("merge_sequences: overlapping or out-of-range mark " +
                                    std::to_string(target));
      }
    }
  }

  std::vector<MarkedEvent> events;
  for (std::size_t i = 0; i < seqs.size(); ++i) {
    for (const MarkedEvent& e : seqs[i].events()) {
      events.push_back({e.time, layout.mark_of[i][static_cast<std::size_t>(e.mark)]});
    }
  }
  return EventSequence(std::move(events), horizon, total_types);
}

std::vector<Period> segment_periods(const EventSequence& seq, double period_length) {
  if (!(period_length >= 1.0)) {
    throw std::invalid_argument("segment_periods: period_length must be at least 1");
  }
  const double horizon = seq.horizon();
  if (horizon == 0.0) return {};
  const int n_periods = std::max(1, static_cast<int>(std::ceil(horizon / period_length)));

  std::vector<std::vector<MarkedEvent>> buckets(static_cast<std::size_t>(n_periods));
  for (const MarkedEvent& e : seq.events()) {
    int p = static_cast<int>(e.time / period_length);
    p = std::min(p, n_periods - 1);
    buckets[static_cast<std::size_t>(p)].push_back(
        {e.time - static_cast<double>(p) * period_length, e.mark});
  }

  std::vector<Period> out;
  out.reserve(static_cast<std::size_t>(n_periods));
  for (int p = 0; p < n_periods; ++p) {
    const double start = static_cast<double>(p) * period_length;
    const double local_horizon = std::min(period_length, horizon - start);
    Period period;
    period.index = p;
    period.partial = local_horizon < period_length;
    period.seq = EventSequence(std::move(buckets[static_cast<std::size_t>(p)]), local_horizon,
                               seq.num_types());
    out.push_back(std::move(period));
  }
  return out;
}

SplitResult train_test_split(const EventSequence& seq, double fraction) {
  if (!(fraction > 0.0) || !(fraction < 1.0)) {
    throw std::invalid_argument("train_test_split: fraction must lie in (0, 1)");
  }
  double split = std::floor(fraction * seq.horizon());
  split = std::min(split, seq.horizon() - 1.0);
  split = std::max(split, 0.0);

  std::vector<MarkedEvent> train_events;
  std::vector<MarkedEvent> test_events;
  for (const MarkedEvent& e : seq.events()) {
    if (e.time < split) {
      train_events.push_back(e);
    } else {
      test_events.push_back(e);
    }
  }
  SplitResult out{EventSequence(std::move(train_events), split, seq.num_types()),
                  EventSequence(std::move(test_events), seq.horizon(), seq.num_types()), split};
  return out;
}

} // namespace hawkes
