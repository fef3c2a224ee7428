#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hawkes/intensity.hpp"
#include "hawkes/types.hpp"

namespace hawkes {

/// Provenance stamp embedded in every artifact: JSON documents carry it
/// as a "meta" object, CSVs as leading `# key=value` comment lines.
struct ArtifactMeta {
  std::uint64_t seed = 0;
  std::string config_hash;
  std::string version;
};

std::string to_hex(std::uint64_t value);

/// Event CSV: optional `# key=value` comment lines (horizon, num_types,
/// plus the meta stamp), then header `t,mark` and one event per row.
void write_event_csv(const std::string& path, const EventSequence& seq,
                     const std::optional<ArtifactMeta>& meta = std::nullopt);

/// Reads an event CSV. Horizon and type count come from the comment
/// metadata when present; otherwise they are inferred as max(t) + 1 and
/// max(mark) + 1. Explicit overrides win over both.
EventSequence read_event_csv(const std::string& path,
                             std::optional<double> horizon_override = std::nullopt,
                             std::optional<int> num_types_override = std::nullopt);

/// Intensity path CSV: header `t,lambda_0,...,lambda_{m-1}`.
void write_intensity_csv(const std::string& path, const IntensityPath& path_data,
                         const std::optional<ArtifactMeta>& meta = std::nullopt);

/// Two-column CSV for Q-Q (`theoretical,empirical`) and scatter
/// (`tau_i,tau_next`) outputs.
void write_pairs_csv(const std::string& path, const std::string& header,
                     const std::vector<std::pair<double, double>>& rows,
                     const std::optional<ArtifactMeta>& meta = std::nullopt);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

} // namespace hawkes
