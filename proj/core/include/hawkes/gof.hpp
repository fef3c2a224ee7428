#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "hawkes/types.hpp"

namespace hawkes {

/// Compensator-transformed inter-arrivals for one event type. Under the
/// true model these are i.i.d. Exponential(1) by the random time change
/// theorem.
struct RescaledSequence {
  std::vector<double> taus;
};

/// taus_i = Lambda_k(t_{i+1}) - Lambda_k(t_i) over type-k event times,
/// including the leading interval Lambda_k(t_1) - Lambda_k(0). Requires
/// at least 2 type-k events. Linear models integrate in closed form;
/// nonlinear models use adaptive quadrature.
RescaledSequence rescale_times(const HawkesModel& model, const EventSequence& seq, int k);

/// Sorted taus paired with Exponential(1) quantiles at plotting
/// positions (i - 0.5)/n.
std::vector<std::pair<double, double>> exp_qq_points(const std::vector<double>& taus);

struct KsResult {
  double statistic = 0.0;
  double p_value = 0.0;
};

/// One-sample Kolmogorov-Smirnov test against Exponential(1); asymptotic
/// p-value by the Kolmogorov series. Requires >= 5 values.
KsResult ks_statistic_exponential(const std::vector<double>& taus);

struct IndependenceResult {
  std::vector<std::pair<double, double>> pairs; // (tau_i, tau_{i+1})
  double lag1_rank_correlation = 0.0;
};

/// Consecutive-pair scatter data with a lag-1 Spearman rank correlation
/// summary. Requires >= 2 values.
IndependenceResult independence_scatter(const std::vector<double>& taus);

struct BaselineComparison {
  struct PerType {
    int type = 0;
    std::optional<double> poisson_rate;
    std::optional<KsResult> hawkes_ks;
    std::optional<KsResult> poisson_ks;
  };
  std::vector<PerType> per_type;
  std::optional<double> hawkes_loglik;
  std::optional<double> poisson_loglik;
};

/// Fits a homogeneous Poisson baseline by per-type moment estimates and
/// reports KS statistics and log-likelihoods for both models on the same
/// data. Types with too few events carry absent statistics.
BaselineComparison compare_baseline(const EventSequence& seq, const HawkesModel& hawkes);

} // namespace hawkes
