#include "hawkes/intensity.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "hawkes/prng.hpp"

namespace hawkes {

ExcitationState::ExcitationState(int num_types, double omega)
    : omega_(omega), exp_sum_(num_types, 0.0), age_sum_(num_types, 0.0), counts_(num_types, 0) {
  assert(num_types >= 1);
  assert(omega > 0.0);
}

void ExcitationState::advance_to(double t) {
  assert(t >= time_);
  const double dt = t - time_;
  if (dt == 0.0) return;
  const double f = std::exp(-omega_ * dt);
  for (std::size_t j = 0; j < exp_sum_.size(); ++j) {
    age_sum_[j] = f * (age_sum_[j] + dt * exp_sum_[j]);
    exp_sum_[j] *= f;
  }
  time_ = t;
}

void ExcitationState::add_event(int mark) {
  assert(mark >= 0 && mark < static_cast<int>(exp_sum_.size()));
  exp_sum_[mark] += 1.0;
  counts_[mark] += 1;
}

double ExcitationState::raw_intensity(const KernelParams& p, int k) const {
  double acc = 0.0;
  for (std::size_t j = 0; j < exp_sum_.size(); ++j) acc += p.alpha[k][j] * exp_sum_[j];
  return p.mu[k] + p.omega * acc;
}

double ExcitationState::raw_intensity_domega(const KernelParams& p, int k) const {
  double acc = 0.0;
  for (std::size_t j = 0; j < exp_sum_.size(); ++j) {
    acc += p.alpha[k][j] * (exp_sum_[j] - omega_ * age_sum_[j]);
  }
  return acc;
}

double ExcitationState::compensator(const KernelParams& p, int k) const {
  double acc = 0.0;
  for (std::size_t j = 0; j < exp_sum_.size(); ++j) {
    acc += p.alpha[k][j] * (static_cast<double>(counts_[j]) - exp_sum_[j]);
  }
  return p.mu[k] * time_ + acc;
}

namespace {

void check_type(const HawkesModel& model, int k) {
  if (k < 0 || k >= model.dim()) {
    throw std::out_of_range("type id " + std::to_string(k) + " outside [0, " +
                            std::to_string(model.dim()) + ")");
  }
}

double link_value(const HawkesModel& model, double raw) {
  return model.mode == ModelMode::Linear ? raw : model.link.apply(raw);
}

/// Replays events with time strictly below t into a fresh state advanced to t.
ExcitationState state_before(const HawkesModel& model, const EventSequence& seq, double t) {
  ExcitationState state(model.dim(), model.params.omega);
  for (const MarkedEvent& e : seq.events()) {
    if (e.time >= t) break;
    state.advance_to(e.time);
    state.add_event(e.mark);
  }
  state.advance_to(t);
  return state;
}

double simpson_estimate(const std::function<double(double)>& f, double a, double fa, double b,
                        double fb, double& fm) {
  const double m = 0.5 * (a + b);
  fm = f(m);
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double fa, double b,
                            double fb, double fm, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  double flm = 0.0;
  double frm = 0.0;
  const double left = simpson_estimate(f, a, fa, m, fm, flm);
  const double right = simpson_estimate(f, m, fm, b, fb, frm);
  const double err = left + right - whole;
  if (depth <= 0 || std::abs(err) <= 15.0 * tol) {
    return left + right + err / 15.0;
  }
  return adaptive_simpson_rec(f, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson_rec(f, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
  if (b <= a) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  double fm = 0.0;
  const double whole = simpson_estimate(f, a, fa, b, fb, fm);
  return adaptive_simpson_rec(f, a, fa, b, fb, fm, whole, tol, 48);
}

/// Integrates g(mu_k + C e^{-omega tau}) over tau in [0, len], splitting at
/// the link kink when one lies inside the panel.
double integrate_panel(const HawkesModel& model, double mu_k, double c, double len, double tol) {
  if (len <= 0.0) return 0.0;
  const double omega = model.params.omega;
  auto f = [&](double tau) { return link_value(model, mu_k + c * std::exp(-omega * tau)); };

  std::vector<double> cuts{0.0, len};
  double kink_level = 0.0;
  bool has_kink = false;
  if (model.mode == ModelMode::Nonlinear) {
    if (model.link.variant == LinkVariant::FlooredIdentity) {
      kink_level = model.link.floor;
      has_kink = true;
    } else if (model.link.variant == LinkVariant::Relu) {
      kink_level = 0.0;
      has_kink = true;
    }
  }
  if (has_kink && c != 0.0) {
    const double r = (kink_level - mu_k) / c;
    if (r > 0.0 && r < 1.0) {
      const double tau_star = -std::log(r) / omega;
      if (tau_star > 0.0 && tau_star < len) cuts.insert(cuts.end() - 1, tau_star);
    }
  }

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    total += adaptive_simpson(f, cuts[i], cuts[i + 1], tol / static_cast<double>(cuts.size()));
  }
  return total;
}

CompensatorEstimate quadrature_window(const HawkesModel& model, const EventSequence& seq, int k,
                                      double t0, double t1, double tol) {
  const KernelParams& p = model.params;
  ExcitationState state(model.dim(), p.omega);
  const auto& evs = seq.events();
  std::size_t i = 0;
  for (; i < evs.size() && evs[i].time <= t0; ++i) {
    state.advance_to(evs[i].time);
    state.add_event(evs[i].mark);
  }
  state.advance_to(t0);

  const double span = std::max(t1 - t0, 1e-300);
  double total = 0.0;
  double cursor = t0;
  while (cursor < t1) {
    double next = t1;
    while (i < evs.size() && evs[i].time <= cursor) {
      state.add_event(evs[i].mark);
      ++i;
    }
    if (i < evs.size() && evs[i].time < t1) next = evs[i].time;
    double c = 0.0;
    for (int j = 0; j < model.dim(); ++j) c += p.alpha[k][j] * state.exp_sum(j);
    c *= p.omega;
    const double len = next - cursor;
    total += integrate_panel(model, p.mu[k], c, len, tol * len / span);
    state.advance_to(next);
    cursor = next;
  }
  return {total, 0.0, CompensatorMethod::Quadrature};
}

CompensatorEstimate monte_carlo_window(const HawkesModel& model, const EventSequence& seq, int k,
                                       double t0, double t1, int n_samples, std::uint64_t seed) {
  if (!(t1 > t0)) throw std::invalid_argument("Monte-Carlo compensator needs a positive window");
  if (n_samples < 1) throw std::invalid_argument("Monte-Carlo compensator needs n_samples >= 1");
  const KernelParams& p = model.params;

  Rng rng(seed);
  std::vector<double> samples(static_cast<std::size_t>(n_samples));
  for (double& s : samples) s = rng.uniform(t0, t1);
  std::sort(samples.begin(), samples.end());

  ExcitationState state(model.dim(), p.omega);
  const auto& evs = seq.events();
  std::size_t i = 0;
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t n_seen = 0;
  for (double s : samples) {
    while (i < evs.size() && evs[i].time < s) {
      state.advance_to(evs[i].time);
      state.add_event(evs[i].mark);
      ++i;
    }
    state.advance_to(s);
    const double lam = link_value(model, state.raw_intensity(p, k));
    ++n_seen;
    const double delta = lam - mean;
    mean += delta / static_cast<double>(n_seen);
    m2 += delta * (lam - mean);
  }
  const double span = t1 - t0;
  const double value = span * mean;
  double std_error = 0.0;
  if (n_samples > 1) {
    const double sample_var = m2 / static_cast<double>(n_samples - 1);
    std_error = span * std::sqrt(sample_var / static_cast<double>(n_samples));
  }
  return {value, std_error, CompensatorMethod::MonteCarlo};
}

} // namespace

double intensity_at(const HawkesModel& model, const EventSequence& seq, int k, double t) {
  check_type(model, k);
  if (!(t >= 0.0) || t > seq.horizon()) {
    throw std::out_of_range("time " + std::to_string(t) + " outside [0, " +
                            std::to_string(seq.horizon()) + "]");
  }
  ExcitationState state = state_before(model, seq, t);
  return link_value(model, state.raw_intensity(model.params, k));
}

IntensityPath intensity_path(const HawkesModel& model, const EventSequence& seq,
                             const std::vector<double>& grid) {
  if (grid.empty()) throw std::invalid_argument("intensity_path: empty grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0) || grid[i] > seq.horizon()) {
      throw std::out_of_range("grid point " + std::to_string(grid[i]) + " outside [0, " +
                              std::to_string(seq.horizon()) + "]");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw std::invalid_argument("intensity_path: grid must be strictly increasing");
    }
  }

  const int m = model.dim();
  IntensityPath out;
  out.grid = grid;
  out.values.assign(static_cast<std::size_t>(m), std::vector<double>(grid.size(), 0.0));

  ExcitationState state(m, model.params.omega);
  const auto& evs = seq.events();
  std::size_t i = 0;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const double t = grid[g];
    while (i < evs.size() && evs[i].time < t) {
      state.advance_to(evs[i].time);
      state.add_event(evs[i].mark);
      ++i;
    }
    state.advance_to(t);
    for (int k = 0; k < m; ++k) {
      out.values[static_cast<std::size_t>(k)][g] =
          link_value(model, state.raw_intensity(model.params, k));
    }
  }
  return out;
}

CompensatorEstimate compensator_closed_form(const HawkesModel& model, const EventSequence& seq,
                                            int k, double T) {
  check_type(model, k);
  if (model.mode != ModelMode::Linear) {
    throw std::invalid_argument("closed-form compensator requires a linear model");
  }
  ExcitationState state = state_before(model, seq, T);
  return {state.compensator(model.params, k), 0.0, CompensatorMethod::ClosedForm};
}

CompensatorEstimate compensator_quadrature(const HawkesModel& model, const EventSequence& seq,
                                           int k, double T, double tol) {
  check_type(model, k);
  if (T <= 0.0) return {0.0, 0.0, CompensatorMethod::Quadrature};
  return quadrature_window(model, seq, k, 0.0, T, tol);
}

CompensatorEstimate compensator_monte_carlo(const HawkesModel& model, const EventSequence& seq,
                                            int k, double T, int n_samples, std::uint64_t seed) {
  check_type(model, k);
  return monte_carlo_window(model, seq, k, 0.0, T, n_samples, seed);
}

std::vector<double> compensator_at_times(const HawkesModel& model, const EventSequence& seq, int k,
                                         const std::vector<double>& times, double tol) {
  check_type(model, k);
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0) || times[i] > seq.horizon()) {
      throw std::out_of_range("time " + std::to_string(times[i]) + " outside [0, " +
                              std::to_string(seq.horizon()) + "]");
    }
    if (i > 0 && times[i] < times[i - 1]) {
      throw std::invalid_argument("compensator_at_times: times must be non-decreasing");
    }
  }
  std::vector<double> out(times.size(), 0.0);
  const KernelParams& p = model.params;
  const auto& evs = seq.events();

  if (model.mode == ModelMode::Linear) {
    ExcitationState state(model.dim(), p.omega);
    std::size_t i = 0;
    for (std::size_t q = 0; q < times.size(); ++q) {
      const double t = times[q];
      while (i < evs.size() && evs[i].time < t) {
        state.advance_to(evs[i].time);
        state.add_event(evs[i].mark);
        ++i;
      }
      state.advance_to(t);
      out[q] = state.compensator(p, k);
    }
    return out;
  }

  const double span = std::max(seq.horizon(), 1e-300);
  ExcitationState state(model.dim(), p.omega);
  std::size_t i = 0;
  double cumulative = 0.0;
  double cursor = 0.0;
  for (std::size_t q = 0; q < times.size(); ++q) {
    const double t = times[q];
    while (cursor < t) {
      while (i < evs.size() && evs[i].time <= cursor) {
        state.add_event(evs[i].mark);
        ++i;
      }
      double next = t;
      if (i < evs.size() && evs[i].time < t) next = evs[i].time;
      double c = 0.0;
      for (int j = 0; j < model.dim(); ++j) c += p.alpha[k][j] * state.exp_sum(j);
      c *= p.omega;
      const double len = next - cursor;
      cumulative += integrate_panel(model, p.mu[k], c, len, tol * len / span);
      state.advance_to(next);
      cursor = next;
    }
    out[q] = cumulative;
  }
  return out;
}

namespace {

double window_loglik(const HawkesModel& model, const EventSequence& seq, double t0, double t1,
                     CompensatorMethod method, const std::optional<McConfig>& mc) {
  const KernelParams& p = model.params;
  const int m = model.dim();
  if (method == CompensatorMethod::ClosedForm && model.mode != ModelMode::Linear) {
    throw std::invalid_argument("closed-form log-likelihood requires a linear model");
  }

  double sum_log = 0.0;
  ExcitationState state(m, p.omega);
  std::vector<double> comp_at_t0(static_cast<std::size_t>(m), 0.0);
  bool t0_recorded = (t0 <= 0.0);
  const auto& evs = seq.events();
  std::size_t i = 0;
  while (i < evs.size() && evs[i].time <= t1) {
    const double t = evs[i].time;
    if (!t0_recorded && t > t0) {
      state.advance_to(t0);
      for (int k = 0; k < m; ++k) {
        comp_at_t0[static_cast<std::size_t>(k)] = state.compensator(p, k);
      }
      t0_recorded = true;
    }
    state.advance_to(t);
    std::size_t group_end = i;
    while (group_end < evs.size() && evs[group_end].time == t) ++group_end;
    for (std::size_t g = i; g < group_end; ++g) {
      if (t < t0) continue;
      const double lam = link_value(model, state.raw_intensity(p, evs[g].mark));
      if (!(lam > 0.0) || !std::isfinite(lam)) {
        throw NumericalError("non-positive intensity at event (t=" + std::to_string(t) +
                             ", mark=" + std::to_string(evs[g].mark) + ")");
      }
      sum_log += std::log(lam);
    }
    for (; i < group_end; ++i) state.add_event(evs[i].mark);
  }
  if (!t0_recorded) {
    state.advance_to(t0);
    for (int k = 0; k < m; ++k) comp_at_t0[static_cast<std::size_t>(k)] = state.compensator(p, k);
  }

  double total_comp = 0.0;
  switch (method) {
    case CompensatorMethod::ClosedForm: {
      state.advance_to(t1);
      for (int k = 0; k < m; ++k) {
        total_comp += state.compensator(p, k) - comp_at_t0[static_cast<std::size_t>(k)];
      }
      break;
    }
    case CompensatorMethod::Quadrature: {
      for (int k = 0; k < m; ++k) total_comp += quadrature_window(model, seq, k, t0, t1, 1e-8).value;
      break;
    }
    case CompensatorMethod::MonteCarlo: {
      const McConfig cfg = mc.value_or(McConfig{});
      for (int k = 0; k < m; ++k) {
        total_comp += monte_carlo_window(model, seq, k, t0, t1, cfg.n_samples,
                                         cfg.seed + static_cast<std::uint64_t>(k))
                          .value;
      }
      break;
    }
  }
  return sum_log - total_comp;
}

} // namespace

double log_likelihood(const HawkesModel& model, const EventSequence& seq, CompensatorMethod method,
                      const std::optional<McConfig>& mc) {
  return window_loglik(model, seq, 0.0, seq.horizon(), method, mc);
}

double log_likelihood_window(const HawkesModel& model, const EventSequence& seq, double t0,
                             double t1, CompensatorMethod method,
                             const std::optional<McConfig>& mc) {
  if (!(t0 >= 0.0) || !(t1 <= seq.horizon()) || !(t0 <= t1)) {
    throw std::invalid_argument("log_likelihood_window: need 0 <= t0 <= t1 <= horizon");
  }
  return window_loglik(model, seq, t0, t1, method, mc);
}

} // namespace hawkes
