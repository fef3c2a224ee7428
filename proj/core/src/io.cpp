#include "hawkes/io.hpp"

#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace hawkes {

namespace {

std::string format_double(double value) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, p);
}

std::string_view trim_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

void write_meta(std::ostream& out, const std::optional<ArtifactMeta>& meta) {
  if (!meta) return;
  out << "# seed=" << meta->seed << "\n";
  out << "# config_hash=" << meta->config_hash << "\n";
  out << "# version=" << meta->version << "\n";
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  return out;
}

double parse_csv_double(std::string_view text, const std::string& path, std::size_t line_no) {
  double out = 0.0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (ec != std::errc() || p != text.data() + text.size()) {
    throw ParseError(path + ":" + std::to_string(line_no) + ": cannot parse number '" +
                     std::string(text) + "'");
  }
  return out;
}

long parse_csv_long(std::string_view text, const std::string& path, std::size_t line_no) {
  long out = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (ec != std::errc() || p != text.data() + text.size()) {
    throw ParseError(path + ":" + std::to_string(line_no) + ": cannot parse integer '" +
                     std::string(text) + "'");
  }
  return out;
}

} // namespace

std::string to_hex(std::uint64_t value) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, value);
  return buf;
}

void write_event_csv(const std::string& path, const EventSequence& seq,
                     const std::optional<ArtifactMeta>& meta) {
  std::ofstream out = open_out(path);
  out << "# horizon=" << format_double(seq.horizon()) << "\n";
  out << "# num_types=" << seq.num_types() << "\n";
  write_meta(out, meta);
  out << "t,mark\n";
  for (const MarkedEvent& e : seq.events()) {
    out << format_double(e.time) << ',' << e.mark << "\n";
  }
  if (!out) throw std::runtime_error(path + ": write failed");
}

EventSequence read_event_csv(const std::string& path, std::optional<double> horizon_override,
                             std::optional<int> num_types_override) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");

  std::optional<double> meta_horizon;
  std::optional<int> meta_num_types;
  std::vector<MarkedEvent> events;
  std::string raw;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim_cr(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      const std::string_view body = line.substr(1);
      const std::size_t eq = body.find('=');
      if (eq != std::string_view::npos) {
        std::string_view key = body.substr(0, eq);
        while (!key.empty() && key.front() == ' ') key.remove_prefix(1);
        while (!key.empty() && key.back() == ' ') key.remove_suffix(1);
        if (key == "horizon") meta_horizon = parse_csv_double(body.substr(eq + 1), path, line_no);
        if (key == "num_types") {
          meta_num_types = static_cast<int>(parse_csv_long(body.substr(eq + 1), path, line_no));
        }
      }
      continue;
    }
    if (!header_seen) {
      if (line != "t,mark") {
        throw ParseError(path + ":" + std::to_string(line_no) +
                         ": expected header 't,mark', got '" + std::string(line) + "'");
      }
      header_seen = true;
      continue;
    }
    const std::size_t comma = line.find(',');
    if (comma == std::string_view::npos) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": expected 't,mark' row");
    }
    const double t = parse_csv_double(line.substr(0, comma), path, line_no);
    const long mark = parse_csv_long(line.substr(comma + 1), path, line_no);
    events.push_back({t, static_cast<int>(mark)});
  }
  if (!header_seen) throw ParseError(path + ": missing header 't,mark'");

  double horizon = 0.0;
  if (horizon_override) {
    horizon = *horizon_override;
  } else if (meta_horizon) {
    horizon = *meta_horizon;
  } else {
    for (const MarkedEvent& e : events) horizon = std::max(horizon, e.time + 1.0);
  }
  int num_types = 1;
  if (num_types_override) {
    num_types = *num_types_override;
  } else if (meta_num_types) {
    num_types = *meta_num_types;
  } else {
    for (const MarkedEvent& e : events) num_types = std::max(num_types, e.mark + 1);
  }
  try {
    return EventSequence(std::move(events), horizon, num_types);
  } catch (const std::invalid_argument& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void write_intensity_csv(const std::string& path, const IntensityPath& path_data,
                         const std::optional<ArtifactMeta>& meta) {
  std::ofstream out = open_out(path);
  write_meta(out, meta);
  out << 't';
  for (std::size_t k = 0; k < path_data.values.size(); ++k) out << ",lambda_" << k;
  out << "\n";
  for (std::size_t i = 0; i < path_data.grid.size(); ++i) {
    out << format_double(path_data.grid[i]);
    for (const auto& row : path_data.values) out << ',' << format_double(row[i]);
    out << "\n";
  }
  if (!out) throw std::runtime_error(path + ": write failed");
}

void write_pairs_csv(const std::string& path, const std::string& header,
                     const std::vector<std::pair<double, double>>& rows,
                     const std::optional<ArtifactMeta>& meta) {
  std::ofstream out = open_out(path);
  write_meta(out, meta);
  out << header << "\n";
  for (const auto& [a, b] : rows) {
    out << format_double(a) << ',' << format_double(b) << "\n";
  }
  if (!out) throw std::runtime_error(path + ": write failed");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << content;
  if (!out) throw std::runtime_error(path + ": write failed");
}

} // namespace hawkes
