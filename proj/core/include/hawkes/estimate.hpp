#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hawkes/types.hpp"

namespace hawkes {

struct OmegaMode {
  enum class Kind { Fixed, Trained };
  Kind kind = Kind::Fixed;
  double value = 1.0; // Fixed only

  static OmegaMode fixed(double omega) { return {Kind::Fixed, omega}; }
  static OmegaMode trained() { return {Kind::Trained, 0.0}; }

  friend bool operator==(const OmegaMode&, const OmegaMode&) = default;
};

/// Initial parameters; empty mu/alpha selects the data-driven defaults
/// (mu_k = n_k / T; alpha = 0.1 on the diagonal in linear mode, 0 in
/// nonlinear mode; omega = reciprocal mean inter-event gap when trained).
struct InitSpec {
  std::optional<KernelParams> explicit_init;

  friend bool operator==(const InitSpec&, const InitSpec&) = default;
};

/// Plain follows the gradient at a constant rate. Adam rescales each
/// coordinate by running moment estimates (beta1 = 0.9, beta2 = 0.999),
/// which copes with the scale disparity between mu and alpha gradients
/// on long horizons.
enum class Optimizer { Plain, Adam };

struct FitConfig {
  double learning_rate = 0.01;
  int epochs = 500;
  int mc_samples = 500; // Monte-Carlo batch size per type per epoch
  std::uint64_t seed = 0;
  OmegaMode omega_mode = OmegaMode::fixed(1.0);
  ModelMode mode = ModelMode::Linear;
  LinkSpec link = LinkSpec::identity();
  InitSpec init;
  Optimizer optimizer = Optimizer::Plain;
};

struct FitReport {
  HawkesModel model;
  std::vector<double> nll_trace; // stochastic NLL per epoch, pre-step
  double spectral_radius = 0.0;
  bool stable = false;
  FitConfig config;
  std::string prng_name;
  // Diagnostics
  bool insufficient_data = false; // events < 10 m^2
  bool projection_active = false; // linear-mode clamp hit in the final epoch
  double floor_fraction = 0.0;    // share of event-time raw intensities at/below the floor
};

/// Gradient of the stochastic objective with respect to (mu, alpha, omega).
struct ParamGradient {
  std::vector<double> mu;
  Matrix alpha;
  double omega = 0.0;
};

/// One epoch's Monte-Carlo NLL estimate with the sample times held fixed,
/// so the objective is a deterministic, differentiable function of the
/// parameters. Exposed so gradient checks can run finite differences
/// against value() on the exact objective fit_sgd steps on.
class StochasticNll {
 public:
  StochasticNll(const EventSequence& seq, std::vector<std::vector<double>> sample_times,
                ModelMode mode, LinkSpec link);

  double value(const KernelParams& p) const;
  std::pair<double, ParamGradient> value_and_gradient(const KernelParams& p) const;

  /// Per-type uniform sample times on (0, horizon), type k seeded with
  /// seed + k so parallel evaluation partitions streams deterministically.
  static std::vector<std::vector<double>> draw_samples(int num_types, double horizon,
                                                       int n_samples, std::uint64_t seed);

 private:
  const EventSequence& seq_;
  std::vector<std::vector<double>> samples_; // per type, sorted
  ModelMode mode_;
  LinkSpec link_;
};

/// Monte-Carlo stochastic-gradient maximum likelihood: per epoch, draw
/// fresh per-type uniform samples, estimate each compensator by Monte
/// Carlo, and take one exact-gradient step on the resulting stochastic
/// NLL. Linear mode projects onto mu >= 1e-6, alpha >= 0 after each step;
/// a trained omega moves in log space to stay positive.
FitReport fit_sgd(const EventSequence& seq, const FitConfig& config);

struct OmegaSearchResult {
  double best_omega = 0.0;
  std::vector<std::pair<double, double>> scores; // (omega, validation NLL)
  bool validation_empty = false;
};

/// Fits one model per grid value on the chronological training prefix and
/// scores NLL on the validation suffix (full history conditions the test
/// window). validation_fraction is the tail share held out, e.g. 0.15.
/// Ties break toward the smallest omega.
OmegaSearchResult grid_search_omega(const EventSequence& seq, const std::vector<double>& omega_grid,
                                    const FitConfig& config, double validation_fraction);

/// Per-type homogeneous-Poisson moment estimate
/// (n_k - 1) / (last_k - first_k); absent for types with fewer than two
/// events or zero time span.
std::vector<std::optional<double>> poisson_moment_estimate(const EventSequence& seq);

/// Largest eigenvalue modulus of a square matrix.
double spectral_radius(const Matrix& alpha);

struct StabilityReport {
  bool stable = false;
  double radius = 0.0;
  bool advisory = false; // nonlinear mode: radius of |alpha| is only indicative
};

StabilityReport check_stability(const HawkesModel& model);

} // namespace hawkes
