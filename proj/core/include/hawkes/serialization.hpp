#pragma once

#include <string>

#include "hawkes/estimate.hpp"
#include "hawkes/types.hpp"

namespace hawkes {

/// Model JSON schema (field names fixed, alpha row-major, row = affected
/// type): {"mode", "mu": [...], "alpha": [[...]], "omega",
/// "link": {"variant", "floor"?}}. Numbers round-trip bit-exactly.
/// Readers ignore unknown fields, so a FitReport document is accepted
/// wherever a model is expected.
std::string to_json(const HawkesModel& model, int indent = 2);
HawkesModel model_from_json(const std::string& text);

/// FitReport JSON extends the model schema with "nll_trace",
/// "spectral_radius", "stable", "config", "prng_name" plus the
/// diagnostic flags.
std::string to_json(const FitReport& report, int indent = 2);
FitReport fit_report_from_json(const std::string& text);

} // namespace hawkes
