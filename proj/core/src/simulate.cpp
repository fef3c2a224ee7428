#include "hawkes/simulate.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>
#include <string>

#include "hawkes/estimate.hpp"
#include "hawkes/intensity.hpp"
#include "hawkes/prng.hpp"

namespace hawkes {

namespace {

double positive_part_bound(const HawkesModel& model, const ExcitationState& state, int k) {
  const KernelParams& p = model.params;
  double acc = 0.0;
  for (int j = 0; j < model.dim(); ++j) {
    acc += std::max(p.alpha[k][j], 0.0) * state.exp_sum(j);
  }
  return model.link.apply(p.mu[k] + p.omega * acc);
}

double dominating_rate(const HawkesModel& model, const ExcitationState& state) {
  double total = 0.0;
  for (int k = 0; k < model.dim(); ++k) {
    if (model.mode == ModelMode::Linear) {
      total += state.raw_intensity(model.params, k);
    } else {
      total += positive_part_bound(model, state, k);
    }
  }
  return total;
}

} // namespace

EventSequence simulate_ogata(const HawkesModel& model, double horizon, std::uint64_t seed) {
  model.validate();
  if (!(horizon >= 0.0) || !std::isfinite(horizon)) {
    throw std::invalid_argument("simulate_ogata: horizon must be finite and non-negative");
  }
  if (model.mode == ModelMode::Linear) {
    const double radius = spectral_radius(model.params.alpha);
    if (radius >= 1.0) {
      throw std::invalid_argument("simulate_ogata: unstable model, spectral radius " +
                                  std::to_string(radius) + " >= 1");
    }
  }

  const int m = model.dim();
  const KernelParams& p = model.params;
  Rng rng(seed);
  ExcitationState state(m, p.omega);
  std::vector<MarkedEvent> events;
  std::vector<double> lambdas(static_cast<std::size_t>(m), 0.0);

  while (true) {
    const double bound = dominating_rate(model, state);
    if (!(bound > 0.0)) break;
    const double candidate = state.time() + rng.exponential(bound);
    if (candidate > horizon) break;
    state.advance_to(candidate);

    double total = 0.0;
    for (int k = 0; k < m; ++k) {
      const double raw = state.raw_intensity(p, k);
      const double lam = model.mode == ModelMode::Linear ? raw : model.link.apply(raw);
      lambdas[static_cast<std::size_t>(k)] = lam;
      total += lam;
    }
    assert(total <= bound * (1.0 + 1e-9));

    if (rng.uniform01() * bound < total) {
      double pick = rng.uniform01() * total;
      int mark = m - 1;
      for (int k = 0; k < m; ++k) {
        pick -= lambdas[static_cast<std::size_t>(k)];
        if (pick < 0.0) {
          mark = k;
          break;
        }
      }
      events.push_back({candidate, mark});
      state.add_event(mark);
    }
  }
  return EventSequence(std::move(events), horizon, m);
}

EventSequence simulate_poisson(const std::vector<double>& rates, double horizon,
                               std::uint64_t seed) {
  if (rates.empty()) throw std::invalid_argument("simulate_poisson: need at least one rate");
  if (!(horizon >= 0.0) || !std::isfinite(horizon)) {
    throw std::invalid_argument("simulate_poisson: horizon must be finite and non-negative");
  }
  for (double r : rates) {
    if (!(r > 0.0) || !std::isfinite(r)) {
      throw std::invalid_argument("simulate_poisson: rates must be finite and positive");
    }
  }

  std::vector<MarkedEvent> events;
  for (std::size_t k = 0; k < rates.size(); ++k) {
    Rng rng(derive_seed(seed, "poisson", k));
    double t = rng.exponential(rates[k]);
    while (t <= horizon) {
      events.push_back({t, static_cast<int>(k)});
      t += rng.exponential(rates[k]);
    }
  }
  return EventSequence(std::move(events), horizon, static_cast<int>(rates.size()));
}

} // namespace hawkes
