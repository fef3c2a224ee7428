#pragma once

#include <cstdint>
#include <vector>

#include "hawkes/types.hpp"

namespace hawkes {

/// Ogata thinning simulation on [0, horizon]. Deterministic per seed.
///
/// Linear mode requires spectral radius of alpha below 1 (rejected up
/// front otherwise). The dominating rate is re-derived after every
/// proposal: sum_k raw_k at the interval start in linear mode (intensity
/// only decays there), and sum_k g(mu_k + positive-part contributions) in
/// nonlinear mode, which bounds the rate even when negative weights let
/// the raw intensity rise between events. Marks are drawn proportionally
/// to the per-type intensities at the accepted time.
EventSequence simulate_ogata(const HawkesModel& model, double horizon, std::uint64_t seed);

/// Independent homogeneous Poisson streams per type, merged and sorted.
/// horizon == 0 yields an empty sequence.
EventSequence simulate_poisson(const std::vector<double>& rates, double horizon,
                               std::uint64_t seed);

} // namespace hawkes
