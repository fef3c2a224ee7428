#pragma once

#include <string>
#include <vector>

#include "hawkes/types.hpp"

namespace hawkes {

/// Quantile thresholds in percent-return units.
struct ThresholdPair {
  double lower = 0.0;
  double upper = 0.0;

  friend bool operator==(const ThresholdPair&, const ThresholdPair&) = default;
};

/// Mark assignment for merging several sequences into one. Input i keeps
/// its internal marks 0..m_i-1 but emits mark_of[i][internal] in the
/// merged sequence; assignments must be disjoint across inputs.
struct MergeLayout {
  std::vector<std::vector<int>> mark_of;

  static MergeLayout identity(int num_types);
  /// Sector-major layout for s sectors of (up, down) pairs: sector i's
  /// up mark is i, down mark is s + i, so three sectors give
  /// up0,up1,up2,down0,down1,down2.
  static MergeLayout sector_direction(int num_sectors);
};

/// Reads `date,return_pct` CSV with ISO dates in strictly increasing
/// order. Rejects malformed rows with their line numbers.
ReturnSeries load_returns(const std::string& path);

/// Empirical quantiles at q_low and q_high by inclusive linear
/// interpolation between order statistics (position q*(n-1), the common
/// "type 7" rule). Requires length >= 10 and lower < upper; a constant
/// series is reported as degenerate.
ThresholdPair compute_thresholds(const ReturnSeries& series, double q_low, double q_high);

/// Bar i emits (time = i, mark = up_mark) when return > upper and
/// (time = i, mark = down_mark) when return < lower; inequalities are
/// strict, so a return exactly at a threshold is not an event. Horizon
/// equals the series length.
EventSequence extract_events(const ReturnSeries& series, const ThresholdPair& thresholds,
                             int up_mark, int down_mark);

/// Merges equal-horizon sequences into one with num_types = sum of input
/// types, remapping marks through the layout. Ties in time keep a stable
/// order by final mark id.
EventSequence merge_sequences(const std::vector<EventSequence>& seqs, const MergeLayout& layout);

struct Period {
  EventSequence seq;
  int index = 0;
  bool partial = false; // final remainder shorter than period_length
};

/// Splits [0, horizon) into consecutive windows of period_length bars,
/// re-basing event times to each window's origin. The final remainder is
/// kept and flagged partial.
std::vector<Period> segment_periods(const EventSequence& seq, double period_length);

struct SplitResult {
  EventSequence train;
  EventSequence test; // global time; history before the cut conditions it
  double split_time = 0.0;
};

/// Chronological split at floor(fraction * horizon). Test events keep
/// global time so the training history can condition the test window;
/// the test horizon stays the full horizon. A minimum test width of one
/// bar is enforced.
SplitResult train_test_split(const EventSequence& seq, double fraction);

} // namespace hawkes
