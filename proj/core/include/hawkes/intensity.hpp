#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hawkes/types.hpp"

namespace hawkes {

/// Decayed excitation state shared by every exponential-kernel computation.
///
/// With a single decay omega, the per-type sums
///   E_j(t) = sum_{events (u, j), u recorded} exp(-omega (t - u))
///   G_j(t) = sum (t - u) exp(-omega (t - u))      (dE_j/domega = -G_j)
///   N_j(t) = count of recorded type-j events
/// fully determine raw intensity and closed-form compensator:
///   raw_k(t)    = mu_k + omega * sum_j alpha_kj E_j(t)
///   Lambda_k(t) = mu_k t + sum_j alpha_kj (N_j - E_j(t))      (linear mode)
///
/// Usage contract per timestamp: advance_to(t), query, then add the events
/// at t. Events added at the current time do not contribute to queries made
/// before the add, which implements the strict t_i < t summation bound.
class ExcitationState {
 public:
  ExcitationState(int num_types, double omega);

  void advance_to(double t); // t >= time()
  void add_event(int mark);

  double time() const { return time_; }
  double exp_sum(int j) const { return exp_sum_[j]; }
  double age_sum(int j) const { return age_sum_[j]; }
  long count(int j) const { return counts_[j]; }

  /// mu_k + omega * sum_j alpha_kj E_j at the current time.
  double raw_intensity(const KernelParams& p, int k) const;
  /// d(raw_k)/domega = sum_j alpha_kj (E_j - omega G_j).
  double raw_intensity_domega(const KernelParams& p, int k) const;
  /// Closed-form compensator at the current time (linear kernels).
  double compensator(const KernelParams& p, int k) const;

 private:
  double omega_;
  double time_ = 0.0;
  std::vector<double> exp_sum_;
  std::vector<double> age_sum_;
  std::vector<long> counts_;
};

struct IntensityPath {
  std::vector<double> grid;
  Matrix values; // values[k][i] = lambda_k(grid[i])
};

enum class CompensatorMethod { ClosedForm, MonteCarlo, Quadrature };

struct CompensatorEstimate {
  double value = 0.0;
  double std_error = 0.0; // 0 for exact methods
  CompensatorMethod method = CompensatorMethod::ClosedForm;
};

struct McConfig {
  int n_samples = 500;
  std::uint64_t seed = 0;
};

/// Conditional intensity of type k at time t given the events strictly
/// before t. Left limit at event times: an event's own jump is excluded.
double intensity_at(const HawkesModel& model, const EventSequence& seq, int k, double t);

/// intensity_at evaluated over a grid (grid within [0, horizon], non-empty).
IntensityPath intensity_path(const HawkesModel& model, const EventSequence& seq,
                             const std::vector<double>& grid);

/// Exact compensator Lambda_k(T) by term-wise integration; linear mode only.
CompensatorEstimate compensator_closed_form(const HawkesModel& model, const EventSequence& seq,
                                            int k, double T);

/// Adaptive-Simpson compensator with panels split at event times (and at
/// link kinks), to absolute tolerance tol. Works in both modes.
CompensatorEstimate compensator_quadrature(const HawkesModel& model, const EventSequence& seq,
                                           int k, double T, double tol = 1e-8);

/// Monte-Carlo compensator: T * mean of lambda_k at n_samples uniform draws
/// on (0, T); std_error = T * sample std / sqrt(n). Deterministic per seed.
CompensatorEstimate compensator_monte_carlo(const HawkesModel& model, const EventSequence& seq,
                                            int k, double T, int n_samples, std::uint64_t seed);

/// Lambda_k evaluated at a non-decreasing list of times in one sweep;
/// closed form in linear mode, adaptive quadrature otherwise.
std::vector<double> compensator_at_times(const HawkesModel& model, const EventSequence& seq,
                                         int k, const std::vector<double>& times,
                                         double tol = 1e-8);

/// Log-likelihood sum_i log lambda_{d_i}(t_i) - sum_k Lambda_k(horizon).
/// ClosedForm requires linear mode; MonteCarlo partitions per-type seeds as
/// mc.seed + k. Throws NumericalError naming the event if an intensity is
/// zero or negative at an event time.
double log_likelihood(const HawkesModel& model, const EventSequence& seq,
                      CompensatorMethod method,
                      const std::optional<McConfig>& mc = std::nullopt);

/// Same restricted to the window [t0, t1]: events with t0 <= t_i <= t1 and
/// compensator Lambda(t1) - Lambda(t0), with the full pre-window history
/// conditioning the intensity.
double log_likelihood_window(const HawkesModel& model, const EventSequence& seq,
                             double t0, double t1, CompensatorMethod method,
                             const std::optional<McConfig>& mc = std::nullopt);

} // namespace hawkes
