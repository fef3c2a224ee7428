#include "hawkes/types.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <charconv>

namespace hawkes {

namespace {

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

} // namespace

EventSequence::EventSequence(std::vector<MarkedEvent> events, double horizon, int num_types)
    : events_(std::move(events)), horizon_(horizon), num_types_(num_types) {
  if (num_types_ < 1) {
    throw std::invalid_argument("EventSequence: num_types must be at least 1");
  }
  if (!(horizon_ >= 0.0) || !std::isfinite(horizon_)) {
    throw std::invalid_argument("EventSequence: horizon must be finite and non-negative");
  }
  std::stable_sort(events_.begin(), events_.end(), [](const MarkedEvent& a, const MarkedEvent& b) {
    if (a.time != b.time) return a.time < b.time;
    return a.mark < b.mark;
  });
  for (const MarkedEvent& e : events_) {
    if (!std::isfinite(e.time) || e.time < 0.0) {
      throw std::invalid_argument("EventSequence: event time " + std::to_string(e.time) +
                                  " is negative or not finite");
    }
    if (e.time > horizon_) {
      throw std::invalid_argument("EventSequence: event time " + std::to_string(e.time) +
                                  " exceeds horizon " + std::to_string(horizon_));
    }
    if (e.mark < 0 || e.mark >= num_types_) {
      throw std::invalid_argument("EventSequence: mark " + std::to_string(e.mark) +
                                  " outside [0, " + std::to_string(num_types_) + ")");
    }
  }
  auto dup = std::adjacent_find(events_.begin(), events_.end());
  if (dup != events_.end()) {
    throw std::invalid_argument("EventSequence: duplicate event (t=" +
                                std::to_string(dup->time) + ", mark=" +
                                std::to_string(dup->mark) + ")");
  }
}

std::vector<double> EventSequence::times_of(int mark) const {
  std::vector<double> out;
  for (const MarkedEvent& e : events_) {
    if (e.mark == mark) out.push_back(e.time);
  }
  return out;
}

std::size_t EventSequence::count_of(int mark) const {
  return static_cast<std::size_t>(
      std::count_if(events_.begin(), events_.end(),
                    [mark](const MarkedEvent& e) { return e.mark == mark; }));
}

double LinkSpec::apply(double x) const {
  switch (variant) {
    case LinkVariant::Identity:
      return x;
    case LinkVariant::FlooredIdentity:
      return std::max(x, floor);
    case LinkVariant::Softplus:
      if (x > 30.0) return x;
      if (x < -30.0) return std::exp(x);
      return std::log1p(std::exp(x));
    case LinkVariant::Relu:
      return std::max(x, 0.0);
  }
  return x;
}

double LinkSpec::derivative(double x) const {
  switch (variant) {
    case LinkVariant::Identity:
      return 1.0;
    case LinkVariant::FlooredIdentity:
      return x > floor ? 1.0 : 0.0;
    case LinkVariant::Softplus:
      if (x > 30.0) return 1.0;
      if (x < -30.0) return std::exp(x);
      return 1.0 / (1.0 + std::exp(-x));
    case LinkVariant::Relu:
      return x > 0.0 ? 1.0 : 0.0;
  }
  return 1.0;
}

void HawkesModel::validate() const {
  const int m = params.dim();
  if (m < 1) throw std::invalid_argument("HawkesModel: dimension must be at least 1");
  if (static_cast<int>(params.alpha.size()) != m) {
    throw std::invalid_argument("HawkesModel: alpha must have one row per type");
  }
  for (const auto& row : params.alpha) {
    if (static_cast<int>(row.size()) != m) {
      throw std::invalid_argument("HawkesModel: alpha must be square");
    }
    if (!all_finite(row)) throw std::invalid_argument("HawkesModel: alpha has non-finite entries");
  }
  if (!all_finite(params.mu)) throw std::invalid_argument("HawkesModel: mu has non-finite entries");
  if (!(params.omega > 0.0) || !std::isfinite(params.omega)) {
    throw std::invalid_argument("HawkesModel: omega must be finite and positive");
  }
  if (mode == ModelMode::Linear) {
    if (link.variant != LinkVariant::Identity) {
      throw std::invalid_argument("HawkesModel: linear mode requires the identity link");
    }
    for (double m_k : params.mu) {
      if (!(m_k > 0.0)) throw std::invalid_argument("HawkesModel: linear mode requires mu > 0");
    }
    for (const auto& row : params.alpha) {
      for (double a : row) {
        if (a < 0.0) throw std::invalid_argument("HawkesModel: linear mode requires alpha >= 0");
      }
    }
  } else if (link.variant == LinkVariant::FlooredIdentity && !(link.floor > 0.0)) {
    throw std::invalid_argument("HawkesModel: floored link requires a positive floor");
  }
}

HawkesModel HawkesModel::linear(KernelParams p) {
  HawkesModel m{std::move(p), LinkSpec::identity(), ModelMode::Linear};
  m.validate();
  return m;
}

HawkesModel HawkesModel::nonlinear(KernelParams p, LinkSpec link) {
  HawkesModel m{std::move(p), link, ModelMode::Nonlinear};
  m.validate();
  return m;
}

bool Date::ok() const {
  if (year < 1 || month < 1 || month > 12 || day < 1) return false;
  static const int lengths[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  int max_day = lengths[month - 1];
  bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
  if (month == 2 && leap) max_day = 29;
  return day <= max_day;
}

std::string Date::iso() const {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
  return buf;
}

Date Date::parse(std::string_view text) {
  auto fail = [&]() -> Date {
    throw ParseError("invalid date '" + std::string(text) + "', expected YYYY-MM-DD");
  };
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return fail();
  auto digits = [&](int from, int to, int& out) {
    auto [p, ec] = std::from_chars(text.data() + from, text.data() + to, out);
    return ec == std::errc() && p == text.data() + to;
  };
  Date d;
  if (!digits(0, 4, d.year) || !digits(5, 7, d.month) || !digits(8, 10, d.day)) return fail();
  if (!d.ok()) return fail();
  return d;
}

ReturnSeries::ReturnSeries(std::vector<Date> dates, std::vector<double> values)
    : dates_(std::move(dates)), values_(std::move(values)) {
  if (dates_.size() != values_.size()) {
    throw std::invalid_argument("ReturnSeries: dates and values differ in length");
  }
  for (std::size_t i = 0; i + 1 < dates_.size(); ++i) {
    if (!(dates_[i] < dates_[i + 1])) {
      throw std::invalid_argument("ReturnSeries: dates not strictly increasing at " +
                                  dates_[i + 1].iso());
    }
  }
  if (!all_finite(values_)) {
    throw std::invalid_argument("ReturnSeries: returns must be finite");
  }
}

} // namespace hawkes
