#include "hawkes/gof.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "hawkes/estimate.hpp"
#include "hawkes/intensity.hpp"

namespace hawkes {

RescaledSequence rescale_times(const HawkesModel& model, const EventSequence& seq, int k) {
  const std::vector<double> times = seq.times_of(k);
  if (times.size() < 2) {
    throw std::invalid_argument("rescale_times: need at least 2 type-" + std::to_string(k) +
                                " events, got " + std::to_string(times.size()));
  }
  const std::vector<double> lambda = compensator_at_times(model, seq, k, times);
  RescaledSequence out;
  out.taus.reserve(times.size());
  double previous = 0.0;
  for (double value : lambda) {
    double tau = value - previous;
    if (tau < 0.0) {
      if (tau < -1e-9) {
        throw NumericalError("rescale_times: compensator decreased by " + std::to_string(-tau));
      }
      tau = 0.0;
    }
    out.taus.push_back(tau);
    previous = value;
  }
  return out;
}

std::vector<std::pair<double, double>> exp_qq_points(const std::vector<double>& taus) {
  if (taus.size() < 2) throw std::invalid_argument("exp_qq_points: need at least 2 values");
  std::vector<double> sorted = taus;
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  std::vector<std::pair<double, double>> out;
  out.reserve(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double p = (static_cast<double>(i) + 0.5) / n;
    out.emplace_back(-std::log1p(-p), sorted[i]);
  }
  return out;
}

namespace {

/// Kolmogorov tail Q(lambda) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 lambda^2).
double kolmogorov_p(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 100000; ++j) {
    const double term = std::exp(-2.0 * static_cast<double>(j) * static_cast<double>(j) *
                                 lambda * lambda);
    sum += sign * term;
    if (term < 1e-14) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

} // namespace

KsResult ks_statistic_exponential(const std::vector<double>& taus) {
  if (taus.size() < 5) {
    throw std::invalid_argument("ks_statistic_exponential: need at least 5 values");
  }
  std::vector<double> sorted = taus;
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double cdf = -std::expm1(-sorted[i]);
    const double upper = static_cast<double>(i + 1) / n - cdf;
    const double lower = cdf - static_cast<double>(i) / n;
    d = std::max({d, upper, lower});
  }
  return {d, kolmogorov_p(std::sqrt(n) * d)};
}

namespace {

std::vector<double> average_ranks(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&values](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

} // namespace

IndependenceResult independence_scatter(const std::vector<double>& taus) {
  if (taus.size() < 2) throw std::invalid_argument("independence_scatter: need at least 2 values");
  IndependenceResult out;
  out.pairs.reserve(taus.size() - 1);
  for (std::size_t i = 0; i + 1 < taus.size(); ++i) {
    out.pairs.emplace_back(taus[i], taus[i + 1]);
  }
  if (out.pairs.size() >= 2) {
    std::vector<double> x(taus.begin(), taus.end() - 1);
    std::vector<double> y(taus.begin() + 1, taus.end());
    out.lag1_rank_correlation = pearson(average_ranks(x), average_ranks(y));
  }
  return out;
}

BaselineComparison compare_baseline(const EventSequence& seq, const HawkesModel& hawkes) {
  BaselineComparison out;
  const std::vector<std::optional<double>> rates = poisson_moment_estimate(seq);
  const int m = seq.num_types();

  bool all_rates = true;
  KernelParams poisson_params;
  poisson_params.mu.assign(static_cast<std::size_t>(m), 1.0);
  poisson_params.alpha.assign(static_cast<std::size_t>(m),
                              std::vector<double>(static_cast<std::size_t>(m), 0.0));
  poisson_params.omega = 1.0;
  for (int k = 0; k < m; ++k) {
    if (rates[static_cast<std::size_t>(k)]) {
      poisson_params.mu[static_cast<std::size_t>(k)] = *rates[static_cast<std::size_t>(k)];
    } else {
      all_rates = false;
    }
  }
  const HawkesModel poisson = HawkesModel::linear(poisson_params);

  for (int k = 0; k < m; ++k) {
    BaselineComparison::PerType row;
    row.type = k;
    row.poisson_rate = rates[static_cast<std::size_t>(k)];
    if (seq.count_of(k) >= 5) {
      try {
        row.hawkes_ks = ks_statistic_exponential(rescale_times(hawkes, seq, k).taus);
      } catch (const NumericalError&) {
      }
      if (row.poisson_rate) {
        row.poisson_ks = ks_statistic_exponential(rescale_times(poisson, seq, k).taus);
      }
    }
    out.per_type.push_back(std::move(row));
  }

  if (seq.size() > 0) {
    const CompensatorMethod method = hawkes.mode == ModelMode::Linear
                                         ? CompensatorMethod::ClosedForm
                                         : CompensatorMethod::Quadrature;
    try {
      out.hawkes_loglik = log_likelihood(hawkes, seq, method);
    } catch (const NumericalError&) {
    }
    if (all_rates) {
      out.poisson_loglik = log_likelihood(poisson, seq, CompensatorMethod::ClosedForm);
    }
  }
  return out;
}

} // namespace hawkes
