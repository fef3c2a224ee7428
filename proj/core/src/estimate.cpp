#include "hawkes/estimate.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "hawkes/events.hpp"
#include "hawkes/intensity.hpp"
#include "hawkes/prng.hpp"

namespace hawkes {

namespace {

constexpr double kMuFloor = 1e-6;

ParamGradient zero_gradient(int m) {
  ParamGradient g;
  g.mu.assign(static_cast<std::size_t>(m), 0.0);
  g.alpha.assign(static_cast<std::size_t>(m), std::vector<double>(static_cast<std::size_t>(m), 0.0));
  g.omega = 0.0;
  return g;
}

double link_of(ModelMode mode, const LinkSpec& link, double raw) {
  return mode == ModelMode::Linear ? raw : link.apply(raw);
}

double link_slope(ModelMode mode, const LinkSpec& link, double raw) {
  return mode == ModelMode::Linear ? 1.0 : link.derivative(raw);
}

} // namespace

StochasticNll::StochasticNll(const EventSequence& seq,
                             std::vector<std::vector<double>> sample_times, ModelMode mode,
                             LinkSpec link)
    : seq_(seq), samples_(std::move(sample_times)), mode_(mode), link_(link) {
  if (static_cast<int>(samples_.size()) != seq_.num_types()) {
    throw std::invalid_argument("StochasticNll: one sample vector per type required");
  }
  for (auto& s : samples_) std::sort(s.begin(), s.end());
}

std::vector<std::vector<double>> StochasticNll::draw_samples(int num_types, double horizon,
                                                             int n_samples, std::uint64_t seed) {
  if (num_types < 1 || n_samples < 1 || !(horizon > 0.0)) {
    throw std::invalid_argument("draw_samples: need num_types >= 1, n_samples >= 1, horizon > 0");
  }
  std::vector<std::vector<double>> out(static_cast<std::size_t>(num_types));
  for (int k = 0; k < num_types; ++k) {
    Rng rng(seed + static_cast<std::uint64_t>(k));
    auto& s = out[static_cast<std::size_t>(k)];
    s.resize(static_cast<std::size_t>(n_samples));
    for (double& x : s) x = rng.uniform(0.0, horizon);
    std::sort(s.begin(), s.end());
  }
  return out;
}

double StochasticNll::value(const KernelParams& p) const {
  return value_and_gradient(p).first;
}

std::pair<double, ParamGradient> StochasticNll::value_and_gradient(const KernelParams& p) const {
  const int m = seq_.num_types();
  if (p.dim() != m) throw std::invalid_argument("StochasticNll: parameter dimension mismatch");
  const double T = seq_.horizon();
  const auto& evs = seq_.events();
  ParamGradient grad = zero_gradient(m);
  double nll = 0.0;

  // Event log terms: -log g(a_{d_i}(t_i)) with a_k = mu_k + omega sum_j alpha_kj E_j.
  {
    ExcitationState state(m, p.omega);
    std::size_t i = 0;
    while (i < evs.size()) {
      const double t = evs[i].time;
      state.advance_to(t);
      std::size_t group_end = i;
      while (group_end < evs.size() && evs[group_end].time == t) ++group_end;
      for (std::size_t g = i; g < group_end; ++g) {
        const int k = evs[g].mark;
        const double raw = state.raw_intensity(p, k);
        const double lam = link_of(mode_, link_, raw);
        if (!(lam > 0.0) || !std::isfinite(lam)) {
          return {std::numeric_limits<double>::infinity(), zero_gradient(m)};
        }
        nll -= std::log(lam);
        const double w = link_slope(mode_, link_, raw) / lam;
        grad.mu[static_cast<std::size_t>(k)] -= w;
        for (int j = 0; j < m; ++j) {
          grad.alpha[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] -=
              w * p.omega * state.exp_sum(j);
        }
        grad.omega -= w * state.raw_intensity_domega(p, k);
      }
      for (; i < group_end; ++i) state.add_event(evs[i].mark);
    }
  }

  // Monte-Carlo compensators: Lambda_hat_k = (T/n) sum_s g(a_k(s)).
  for (int k = 0; k < m; ++k) {
    const auto& s_times = samples_[static_cast<std::size_t>(k)];
    if (s_times.empty()) continue;
    const double scale = T / static_cast<double>(s_times.size());
    ExcitationState state(m, p.omega);
    std::size_t i = 0;
    for (double s : s_times) {
      while (i < evs.size() && evs[i].time < s) {
        state.advance_to(evs[i].time);
        state.add_event(evs[i].mark);
        ++i;
      }
      state.advance_to(s);
      const double raw = state.raw_intensity(p, k);
      nll += scale * link_of(mode_, link_, raw);
      const double w = scale * link_slope(mode_, link_, raw);
      grad.mu[static_cast<std::size_t>(k)] += w;
      for (int j = 0; j < m; ++j) {
        grad.alpha[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] +=
            w * p.omega * state.exp_sum(j);
      }
      grad.omega += w * state.raw_intensity_domega(p, k);
    }
  }

  if (!std::isfinite(nll)) return {std::numeric_limits<double>::infinity(), zero_gradient(m)};
  return {nll, std::move(grad)};
}

namespace {

KernelParams initial_params(const EventSequence& seq, const FitConfig& config) {
  if (config.init.explicit_init) {
    KernelParams p = *config.init.explicit_init;
    if (p.dim() != seq.num_types()) {
      throw std::invalid_argument("fit_sgd: init dimension does not match the sequence");
    }
    if (config.omega_mode.kind == OmegaMode::Kind::Fixed) p.omega = config.omega_mode.value;
    return p;
  }
  const int m = seq.num_types();
  KernelParams p;
  p.mu.resize(static_cast<std::size_t>(m));
  const double T = seq.horizon();
  for (int k = 0; k < m; ++k) {
    const double rate = static_cast<double>(seq.count_of(k)) / T;
    p.mu[static_cast<std::size_t>(k)] = std::max(rate, kMuFloor);
  }
  const double diag = config.mode == ModelMode::Linear ? 0.1 : 0.0;
  p.alpha.assign(static_cast<std::size_t>(m), std::vector<double>(static_cast<std::size_t>(m), 0.0));
  for (int k = 0; k < m; ++k) p.alpha[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)] = diag;

  if (config.omega_mode.kind == OmegaMode::Kind::Fixed) {
    p.omega = config.omega_mode.value;
  } else if (seq.size() >= 2) {
    const double span = seq.events().back().time - seq.events().front().time;
    const double mean_gap = span / static_cast<double>(seq.size() - 1);
    p.omega = mean_gap > 0.0 ? 1.0 / mean_gap : 1.0;
  } else {
    p.omega = 1.0;
  }
  return p;
}

void validate_fit_config(const FitConfig& config) {
  if (!(config.learning_rate > 0.0)) throw std::invalid_argument("fit_sgd: learning_rate must be positive");
  if (config.epochs < 1) throw std::invalid_argument("fit_sgd: epochs must be positive");
  if (config.mc_samples < 1) throw std::invalid_argument("fit_sgd: mc_samples must be at least 1");
  if (config.omega_mode.kind == OmegaMode::Kind::Fixed && !(config.omega_mode.value > 0.0)) {
    throw std::invalid_argument("fit_sgd: fixed omega must be positive");
  }
  if (config.mode == ModelMode::Linear && config.link.variant != LinkVariant::Identity) {
    throw std::invalid_argument("fit_sgd: linear mode requires the identity link");
  }
}

double floor_fraction_at_events(const HawkesModel& model, const EventSequence& seq) {
  if (seq.size() == 0 || model.mode != ModelMode::Nonlinear) return 0.0;
  double level = 0.0;
  if (model.link.variant == LinkVariant::FlooredIdentity) {
    level = model.link.floor;
  } else if (model.link.variant == LinkVariant::Relu) {
    level = 0.0;
  } else {
    return 0.0;
  }
  const KernelParams& p = model.params;
  ExcitationState state(model.dim(), p.omega);
  const auto& evs = seq.events();
  std::size_t at_floor = 0;
  std::size_t i = 0;
  while (i < evs.size()) {
    const double t = evs[i].time;
    state.advance_to(t);
    std::size_t group_end = i;
    while (group_end < evs.size() && evs[group_end].time == t) ++group_end;
    for (std::size_t g = i; g < group_end; ++g) {
      if (state.raw_intensity(p, evs[g].mark) <= level) ++at_floor;
    }
    for (; i < group_end; ++i) state.add_event(evs[i].mark);
  }
  return static_cast<double>(at_floor) / static_cast<double>(evs.size());
}

} // namespace

FitReport fit_sgd(const EventSequence& seq, const FitConfig& config) {
  validate_fit_config(config);
  if (seq.size() == 0) throw std::invalid_argument("fit_sgd: empty sequence");
  if (!(seq.horizon() > 0.0)) throw std::invalid_argument("fit_sgd: horizon must be positive");

  const int m = seq.num_types();
  const bool train_omega = config.omega_mode.kind == OmegaMode::Kind::Trained;
  KernelParams p = initial_params(seq, config);

  FitReport report;
  report.config = config;
  report.prng_name = kPrngName;
  report.insufficient_data = seq.size() < static_cast<std::size_t>(10 * m * m);
  report.nll_trace.reserve(static_cast<std::size_t>(config.epochs));

  const double lr = config.learning_rate;
  const bool adam = config.optimizer == Optimizer::Adam;
  constexpr double kBeta1 = 0.9;
  constexpr double kBeta2 = 0.999;
  constexpr double kAdamEps = 1e-8;
  const std::size_t n_params = static_cast<std::size_t>(m) * static_cast<std::size_t>(m + 1) + 1;
  std::vector<double> moment1(adam ? n_params : 0, 0.0);
  std::vector<double> moment2(adam ? n_params : 0, 0.0);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const std::uint64_t epoch_seed =
        derive_seed(config.seed, "epoch", static_cast<std::uint64_t>(epoch));
    StochasticNll objective(
        seq, StochasticNll::draw_samples(m, seq.horizon(), config.mc_samples, epoch_seed),
        config.mode, config.link);
    auto [value, grad] = objective.value_and_gradient(p);
    report.nll_trace.push_back(value);
    if (!std::isfinite(value)) {
      throw NumericalError("fit_sgd: non-finite objective at epoch " + std::to_string(epoch),
                           epoch, report.nll_trace);
    }

    // Flat parameter order: mu (m), alpha row-major (m*m), log omega.
    auto step_of = [&](std::size_t slot, double g) {
      if (!adam) return lr * g;
      auto& m1 = moment1[slot];
      auto& m2 = moment2[slot];
      m1 = kBeta1 * m1 + (1.0 - kBeta1) * g;
      m2 = kBeta2 * m2 + (1.0 - kBeta2) * g * g;
      const double t = static_cast<double>(epoch + 1);
      const double hat1 = m1 / (1.0 - std::pow(kBeta1, t));
      const double hat2 = m2 / (1.0 - std::pow(kBeta2, t));
      return lr * hat1 / (std::sqrt(hat2) + kAdamEps);
    };

    std::size_t slot = 0;
    for (int k = 0; k < m; ++k) {
      p.mu[static_cast<std::size_t>(k)] -= step_of(slot++, grad.mu[static_cast<std::size_t>(k)]);
    }
    for (int k = 0; k < m; ++k) {
      for (int j = 0; j < m; ++j) {
        p.alpha[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] -= step_of(
            slot++, grad.alpha[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)]);
      }
    }
    if (train_omega) {
      // d/d(log omega) = omega * d/d(omega); the exp step keeps omega > 0.
      p.omega = std::exp(std::log(p.omega) - step_of(slot, p.omega * grad.omega));
    }

    if (config.mode == ModelMode::Linear) {
      bool clamped = false;
      for (int k = 0; k < m; ++k) {
        auto& mu_k = p.mu[static_cast<std::size_t>(k)];
        if (mu_k < kMuFloor) {
          mu_k = kMuFloor;
          clamped = true;
        }
        for (int j = 0; j < m; ++j) {
          auto& a = p.alpha[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
          if (a < 0.0) {
            a = 0.0;
            clamped = true;
          }
        }
      }
      if (epoch == config.epochs - 1) report.projection_active = clamped;
    }
    if (!std::isfinite(p.omega) || !(p.omega > 0.0)) {
      throw NumericalError("fit_sgd: omega left the positive axis at epoch " +
                               std::to_string(epoch),
                           epoch, report.nll_trace);
    }
  }

  report.model = config.mode == ModelMode::Linear
                     ? HawkesModel::linear(std::move(p))
                     : HawkesModel::nonlinear(std::move(p), config.link);
  const StabilityReport stability = check_stability(report.model);
  report.spectral_radius = stability.radius;
  report.stable = stability.stable;
  report.floor_fraction = floor_fraction_at_events(report.model, seq);
  return report;
}

OmegaSearchResult grid_search_omega(const EventSequence& seq, const std::vector<double>& omega_grid,
                                    const FitConfig& config, double validation_fraction) {
  if (omega_grid.empty()) throw std::invalid_argument("grid_search_omega: empty grid");
  if (!(validation_fraction > 0.0) || !(validation_fraction < 1.0)) {
    throw std::invalid_argument("grid_search_omega: validation_fraction must lie in (0, 1)");
  }
  for (double w : omega_grid) {
    if (!(w > 0.0)) throw std::invalid_argument("grid_search_omega: omega values must be positive");
  }

  const SplitResult split = train_test_split(seq, 1.0 - validation_fraction);
  const double t0 = split.split_time;
  const double t1 = seq.horizon();
  const bool validation_has_events =
      std::any_of(seq.events().begin(), seq.events().end(),
                  [t0](const MarkedEvent& e) { return e.time >= t0; });

  OmegaSearchResult result;
  result.validation_empty = !validation_has_events;
  result.scores.reserve(omega_grid.size());
  const CompensatorMethod method = config.mode == ModelMode::Linear
                                       ? CompensatorMethod::ClosedForm
                                       : CompensatorMethod::Quadrature;

  double best_value = std::numeric_limits<double>::infinity();
  double best_omega = omega_grid.front();
  for (double w : omega_grid) {
    FitConfig arm = config;
    arm.omega_mode = OmegaMode::fixed(w);
    const FitReport fit = fit_sgd(split.train, arm);
    const double nll = -log_likelihood_window(fit.model, seq, t0, t1, method);
    result.scores.emplace_back(w, nll);
    if (nll < best_value || (nll == best_value && w < best_omega)) {
      best_value = nll;
      best_omega = w;
    }
  }
  result.best_omega = best_omega;
  return result;
}

std::vector<std::optional<double>> poisson_moment_estimate(const EventSequence& seq) {
  std::vector<std::optional<double>> out(static_cast<std::size_t>(seq.num_types()));
  for (int k = 0; k < seq.num_types(); ++k) {
    const std::vector<double> times = seq.times_of(k);
    if (times.size() < 2) continue;
    const double span = times.back() - times.front();
    if (!(span > 0.0)) continue;
    out[static_cast<std::size_t>(k)] = static_cast<double>(times.size() - 1) / span;
  }
  return out;
}

double spectral_radius(const Matrix& alpha) {
  const std::size_t m = alpha.size();
  if (m == 0) throw std::invalid_argument("spectral_radius: empty matrix");
  Eigen::MatrixXd a(m, m);
  for (std::size_t k = 0; k < m; ++k) {
    if (alpha[k].size() != m) throw std::invalid_argument("spectral_radius: matrix must be square");
    for (std::size_t j = 0; j < m; ++j) {
      if (!std::isfinite(alpha[k][j])) {
        throw std::invalid_argument("spectral_radius: non-finite entry");
      }
      a(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = alpha[k][j];
    }
  }
  const Eigen::EigenSolver<Eigen::MatrixXd> solver(a, false);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

StabilityReport check_stability(const HawkesModel& model) {
  StabilityReport report;
  if (model.mode == ModelMode::Nonlinear) {
    Matrix magnitude = model.params.alpha;
    for (auto& row : magnitude) {
      for (double& x : row) x = std::abs(x);
    }
    report.radius = spectral_radius(magnitude);
    report.advisory = true;
  } else {
    report.radius = spectral_radius(model.params.alpha);
  }
  report.stable = report.radius < 1.0;
  return report;
}

} // namespace hawkes
