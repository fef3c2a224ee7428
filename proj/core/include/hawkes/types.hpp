#pragma once

#include <compare>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace hawkes {

using Matrix = std::vector<std::vector<double>>;

/// Raised when an optimisation or likelihood evaluation produces an
/// undefined value (NaN/inf objective, zero intensity at an event).
/// Carries the epoch index and the partial loss trace when thrown from a fit.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what, int epoch = -1,
                          std::vector<double> partial_trace = {})
      : std::runtime_error(what), epoch_(epoch), partial_trace_(std::move(partial_trace)) {}

  int epoch() const { return epoch_; }
  const std::vector<double>& partial_trace() const { return partial_trace_; }

 private:
  int epoch_;
  std::vector<double> partial_trace_;
};

/// Raised on malformed input files; the message carries file/line context.
class ParseError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One observed event: a non-negative time (trading-day index units) and a
/// type id in [0, num_types) of the owning sequence.
struct MarkedEvent {
  double time = 0.0;
  int mark = 0;

  friend bool operator==(const MarkedEvent&, const MarkedEvent&) = default;
};

/// Ordered sequence of typed events on [0, horizon].
///
/// Construction stable-sorts the input by (time, mark) and rejects anything
/// that violates the invariants: negative times, times past the horizon,
/// marks outside [0, num_types), or two events with identical (time, mark)
/// (the process is simple per mark; equal times are allowed only across
/// distinct marks).
class EventSequence {
 public:
  /// Empty sequence with horizon 0 and a single type.
  EventSequence() : horizon_(0.0), num_types_(1) {}
  EventSequence(std::vector<MarkedEvent> events, double horizon, int num_types);

  static EventSequence empty(double horizon, int num_types) {
    return EventSequence({}, horizon, num_types);
  }

  const std::vector<MarkedEvent>& events() const { return events_; }
  double horizon() const { return horizon_; }
  int num_types() const { return num_types_; }
  std::size_t size() const { return events_.size(); }

  /// Times of all events with the given mark, in order.
  std::vector<double> times_of(int mark) const;
  std::size_t count_of(int mark) const;

 private:
  std::vector<MarkedEvent> events_;
  double horizon_;
  int num_types_;
};

/// Exponential-kernel parameters. alpha[k][j] is the branching weight of
/// type-j events on type-k intensity; the kernel is
/// phi_kj(t) = alpha[k][j] * omega * exp(-omega t), so the integrated effect
/// of one event is exactly alpha[k][j]. A single decay omega is shared by
/// all type pairs.
struct KernelParams {
  std::vector<double> mu;
  Matrix alpha;
  double omega = 1.0;

  int dim() const { return static_cast<int>(mu.size()); }
};

enum class LinkVariant { Identity, FlooredIdentity, Softplus, Relu };

/// Link function g mapping raw (possibly negative) intensity to a valid rate.
struct LinkSpec {
  LinkVariant variant = LinkVariant::Identity;
  double floor = 0.01; // FlooredIdentity only

  static LinkSpec identity() { return {LinkVariant::Identity, 0.0}; }
  static LinkSpec floored(double f = 0.01) { return {LinkVariant::FlooredIdentity, f}; }
  static LinkSpec softplus() { return {LinkVariant::Softplus, 0.0}; }
  static LinkSpec relu() { return {LinkVariant::Relu, 0.0}; }

  double apply(double x) const;
  /// Derivative of apply; 0 on the flat side of a kink.
  double derivative(double x) const;

  friend bool operator==(const LinkSpec&, const LinkSpec&) = default;
};

enum class ModelMode { Linear, Nonlinear };

/// A multivariate Hawkes model: kernel parameters plus link and mode.
/// Linear mode fixes the link to identity and requires mu > 0, alpha >= 0;
/// nonlinear mode leaves mu and alpha unrestricted in sign.
struct HawkesModel {
  KernelParams params;
  LinkSpec link = LinkSpec::identity();
  ModelMode mode = ModelMode::Linear;

  int dim() const { return params.dim(); }

  /// Throws std::invalid_argument if any invariant is violated.
  void validate() const;

  static HawkesModel linear(KernelParams p);
  static HawkesModel nonlinear(KernelParams p, LinkSpec link);
};

/// Calendar date, used only for ordering and display; no calendar
/// arithmetic or timezone handling anywhere in the library.
struct Date {
  int year = 1970;
  int month = 1;
  int day = 1;

  bool ok() const;
  std::string iso() const;
  static Date parse(std::string_view text); // strict YYYY-MM-DD

  friend auto operator<=>(const Date&, const Date&) = default;
};

/// Dated daily percentage returns (1.32 means +1.32%).
/// Dates strictly increasing; same length as values.
class ReturnSeries {
 public:
  ReturnSeries() = default;
  ReturnSeries(std::vector<Date> dates, std::vector<double> values);

  const std::vector<Date>& dates() const { return dates_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }

 private:
  std::vector<Date> dates_;
  std::vector<double> values_;
};

} // namespace hawkes
