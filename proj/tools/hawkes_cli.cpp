#include <algorithm>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hawkes/estimate.hpp"
#include "hawkes/events.hpp"
#include "hawkes/gof.hpp"
#include "hawkes/intensity.hpp"
#include "hawkes/io.hpp"
#include "hawkes/prng.hpp"
#include "hawkes/serialization.hpp"
#include "hawkes/simulate.hpp"
#include "hawkes/types.hpp"
#include "hawkes/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt(double value) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, p);
}

void require_input(const std::string& path) {
  if (!fs::exists(path)) throw hawkes::ParseError(path + ": no such file");
}

void prepare_output(const std::string& path) {
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
}

hawkes::ArtifactMeta make_meta(std::uint64_t seed, const std::string& config_string) {
  return {seed, hawkes::to_hex(hawkes::fnv1a64(config_string)), hawkes::kVersion};
}

json meta_json(const hawkes::ArtifactMeta& meta) {
  return json{{"seed", meta.seed}, {"config_hash", meta.config_hash}, {"version", meta.version}};
}

void write_json_file(const std::string& path, const json& doc) {
  prepare_output(path);
  hawkes::write_text_file(path, doc.dump(2) + "\n");
}

void warn(const std::string& message) {
  std::cerr << json{{"kind", "warning"}, {"message", message}}.dump() << "\n";
}

hawkes::ModelMode parse_mode(const std::string& token) {
  if (token == "linear") return hawkes::ModelMode::Linear;
  if (token == "nonlinear") return hawkes::ModelMode::Nonlinear;
  throw CLI::ValidationError("--mode", "expected 'linear' or 'nonlinear'");
}

hawkes::LinkSpec parse_link(const std::string& token, double floor) {
  if (token == "identity") return hawkes::LinkSpec::identity();
  if (token == "floored") return hawkes::LinkSpec::floored(floor);
  if (token == "softplus") return hawkes::LinkSpec::softplus();
  if (token == "relu") return hawkes::LinkSpec::relu();
  throw CLI::ValidationError("--link", "expected identity|floored|softplus|relu");
}

// ---------------------------------------------------------------- extract

struct ExtractOptions {
  std::vector<std::string> returns_paths;
  double q_low = 0.1;
  double q_high = 0.9;
  std::string out_events;
  std::string out_thresholds;
  std::uint64_t seed = 0;
};

void run_extract(const ExtractOptions& opt) {
  for (const auto& p : opt.returns_paths) require_input(p);
  prepare_output(opt.out_events);
  prepare_output(opt.out_thresholds);

  std::ostringstream cfg;
  cfg << "extract q_low=" << fmt(opt.q_low) << " q_high=" << fmt(opt.q_high) << " inputs=";
  for (const auto& p : opt.returns_paths) cfg << p << ';';
  const hawkes::ArtifactMeta meta = make_meta(opt.seed, cfg.str());

  std::vector<hawkes::ReturnSeries> series;
  for (const auto& p : opt.returns_paths) series.push_back(hawkes::load_returns(p));

  if (series.size() > 1) {
    for (std::size_t i = 1; i < series.size(); ++i) {
      if (series[i].size() != series[0].size() || series[i].dates() != series[0].dates()) {
        hawkes::Date first = series[0].dates().front();
        hawkes::Date last = series[0].dates().back();
        for (const auto& s : series) {
          if (s.size() == 0) continue;
          first = std::max(first, s.dates().front());
          last = std::min(last, s.dates().back());
        }
        throw hawkes::ParseError("input date ranges differ; overlap window is " + first.iso() +
                                 ".." + last.iso() + " but inputs must cover identical dates");
      }
    }
  }

  json thresholds_doc;
  thresholds_doc["meta"] = meta_json(meta);
  thresholds_doc["quantiles"] = json{{"low", opt.q_low}, {"high", opt.q_high}};
  thresholds_doc["inputs"] = json::array();

  std::vector<hawkes::EventSequence> per_input;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const hawkes::ThresholdPair th = hawkes::compute_thresholds(series[i], opt.q_low, opt.q_high);
    hawkes::EventSequence seq = hawkes::extract_events(series[i], th, 0, 1);
    thresholds_doc["inputs"].push_back(json{{"path", opt.returns_paths[i]},
                                            {"lower", th.lower},
                                            {"upper", th.upper},
                                            {"num_bars", series[i].size()},
                                            {"events_up", seq.count_of(0)},
                                            {"events_down", seq.count_of(1)}});
    per_input.push_back(std::move(seq));
  }

  hawkes::EventSequence merged =
      per_input.size() == 1
          ? std::move(per_input.front())
          : hawkes::merge_sequences(per_input, hawkes::MergeLayout::sector_direction(
                                                   static_cast<int>(per_input.size())));

  hawkes::write_event_csv(opt.out_events, merged, meta);
  write_json_file(opt.out_thresholds, thresholds_doc);
  std::cout << "wrote " << opt.out_events << " (" << merged.size() << " events, "
            << merged.num_types() << " types, horizon " << fmt(merged.horizon()) << ")\n";
}

// -------------------------------------------------------------------- fit

struct FitOptions {
  std::string events_path;
  std::string out_path;
  std::string mode = "linear";
  std::string link = "auto";
  double floor = 0.01;
  std::optional<double> omega_fixed;
  bool train_omega = false;
  std::vector<double> omega_grid;
  double validation_fraction = 0.15;
  double learning_rate = 0.01;
  int epochs = 500;
  int mc_samples = 500;
  std::uint64_t seed = 0;
  std::optional<double> horizon_override;
  std::optional<int> num_types_override;
  std::string init_path;
  std::string optimizer = "plain";
};

void run_fit(const FitOptions& opt) {
  require_input(opt.events_path);
  if (!opt.init_path.empty()) require_input(opt.init_path);
  prepare_output(opt.out_path);

  hawkes::FitConfig config;
  config.mode = parse_mode(opt.mode);
  const std::string link_token =
      opt.link != "auto" ? opt.link
                         : (config.mode == hawkes::ModelMode::Linear ? "identity" : "floored");
  config.link = parse_link(link_token, opt.floor);
  config.learning_rate = opt.learning_rate;
  config.epochs = opt.epochs;
  config.mc_samples = opt.mc_samples;
  config.seed = opt.seed;
  if (opt.optimizer == "adam") {
    config.optimizer = hawkes::Optimizer::Adam;
  } else if (opt.optimizer != "plain") {
    throw std::invalid_argument("fit: unknown optimizer '" + opt.optimizer + "'");
  }
  if (opt.train_omega) {
    config.omega_mode = hawkes::OmegaMode::trained();
  } else if (opt.omega_fixed) {
    config.omega_mode = hawkes::OmegaMode::fixed(*opt.omega_fixed);
  }
  if (!opt.init_path.empty()) {
    config.init.explicit_init =
        hawkes::model_from_json(hawkes::read_text_file(opt.init_path)).params;
  }

  std::ostringstream cfg;
  cfg << "fit events=" << opt.events_path << " mode=" << opt.mode << " link=" << link_token
      << " floor=" << fmt(opt.floor) << " lr=" << fmt(opt.learning_rate)
      << " epochs=" << opt.epochs << " mc_samples=" << opt.mc_samples
      << " optimizer=" << opt.optimizer;
  if (opt.train_omega) {
    cfg << " omega=trained";
  } else if (opt.omega_fixed) {
    cfg << " omega=" << fmt(*opt.omega_fixed);
  } else {
    cfg << " omega_grid=";
    for (double w : opt.omega_grid) cfg << fmt(w) << ';';
    cfg << " validation_fraction=" << fmt(opt.validation_fraction);
  }
  if (!opt.init_path.empty()) cfg << " init=" << opt.init_path;
  const hawkes::ArtifactMeta meta = make_meta(opt.seed, cfg.str());

  const hawkes::EventSequence seq =
      hawkes::read_event_csv(opt.events_path, opt.horizon_override, opt.num_types_override);

  std::optional<hawkes::OmegaSearchResult> search;
  if (!opt.omega_grid.empty()) {
    search = hawkes::grid_search_omega(seq, opt.omega_grid, config, opt.validation_fraction);
    config.omega_mode = hawkes::OmegaMode::fixed(search->best_omega);
  }

  const hawkes::FitReport report = hawkes::fit_sgd(seq, config);

  json doc = json::parse(hawkes::to_json(report));
  doc["meta"] = meta_json(meta);
  if (search) {
    json scores = json::array();
    for (const auto& [w, nll] : search->scores) scores.push_back(json{{"omega", w}, {"nll", nll}});
    doc["omega_search"] = json{{"best_omega", search->best_omega},
                               {"scores", scores},
                               {"validation_empty", search->validation_empty}};
  }
  write_json_file(opt.out_path, doc);

  if (report.insufficient_data) {
    warn("fewer than 10*m^2 events; estimates are unreliable");
  }
  if (report.floor_fraction > 0.5) {
    warn("more than half of the event-time intensities sit at the link floor; "
         "parameters may be weakly identified");
  }
  std::cout << "wrote " << opt.out_path << " (spectral radius " << fmt(report.spectral_radius)
            << ", " << (report.stable ? "stable" : "not stable") << ")\n";
}

// --------------------------------------------------------------- simulate

struct SimulateOptions {
  std::string model_path;
  double horizon = 0.0;
  std::uint64_t seed = 0;
  std::string out_path;
};

void run_simulate(const SimulateOptions& opt) {
  require_input(opt.model_path);
  prepare_output(opt.out_path);
  const hawkes::HawkesModel model =
      hawkes::model_from_json(hawkes::read_text_file(opt.model_path));

  std::ostringstream cfg;
  cfg << "simulate model=" << opt.model_path << " horizon=" << fmt(opt.horizon);
  const hawkes::ArtifactMeta meta = make_meta(opt.seed, cfg.str());

  const hawkes::EventSequence seq = hawkes::simulate_ogata(model, opt.horizon, opt.seed);
  hawkes::write_event_csv(opt.out_path, seq, meta);
  std::cout << "wrote " << opt.out_path << " (" << seq.size() << " events)\n";
}

// -------------------------------------------------------------------- gof

struct GofOptions {
  std::string model_path;
  std::string events_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  std::optional<double> horizon_override;
  std::optional<int> num_types_override;
};

void run_gof(const GofOptions& opt) {
  require_input(opt.model_path);
  require_input(opt.events_path);
  fs::create_directories(opt.out_dir);

  std::ostringstream cfg;
  cfg << "gof model=" << opt.model_path << " events=" << opt.events_path;
  const hawkes::ArtifactMeta meta = make_meta(opt.seed, cfg.str());

  const hawkes::HawkesModel model =
      hawkes::model_from_json(hawkes::read_text_file(opt.model_path));
  const hawkes::EventSequence seq =
      hawkes::read_event_csv(opt.events_path, opt.horizon_override, opt.num_types_override);
  if (model.dim() != seq.num_types()) {
    throw std::invalid_argument("model has " + std::to_string(model.dim()) +
                                " types but the sequence has " +
                                std::to_string(seq.num_types()));
  }

  json ks_doc;
  ks_doc["meta"] = meta_json(meta);
  ks_doc["per_type"] = json::array();
  for (int k = 0; k < seq.num_types(); ++k) {
    json row{{"type", k}, {"events", seq.count_of(k)}};
    if (seq.count_of(k) >= 2) {
      const hawkes::RescaledSequence rescaled = hawkes::rescale_times(model, seq, k);
      row["mean_tau"] =
          std::accumulate(rescaled.taus.begin(), rescaled.taus.end(), 0.0) /
          static_cast<double>(rescaled.taus.size());
      const auto qq = hawkes::exp_qq_points(rescaled.taus);
      const std::string qq_path = (fs::path(opt.out_dir) / ("qq_type" + std::to_string(k) + ".csv")).string();
      hawkes::write_pairs_csv(qq_path, "theoretical,empirical", qq, meta);

      const hawkes::IndependenceResult indep = hawkes::independence_scatter(rescaled.taus);
      const std::string sc_path =
          (fs::path(opt.out_dir) / ("scatter_type" + std::to_string(k) + ".csv")).string();
      hawkes::write_pairs_csv(sc_path, "tau_i,tau_next", indep.pairs, meta);
      row["lag1_rank_correlation"] = indep.lag1_rank_correlation;

      if (rescaled.taus.size() >= 5) {
        const hawkes::KsResult ks = hawkes::ks_statistic_exponential(rescaled.taus);
        row["ks_statistic"] = ks.statistic;
        row["p_value"] = ks.p_value;
      }
    }
    ks_doc["per_type"].push_back(std::move(row));
  }
  write_json_file((fs::path(opt.out_dir) / "ks.json").string(), ks_doc);

  const hawkes::BaselineComparison cmp = hawkes::compare_baseline(seq, model);
  json baseline_doc;
  baseline_doc["meta"] = meta_json(meta);
  baseline_doc["per_type"] = json::array();
  for (const auto& row : cmp.per_type) {
    json r{{"type", row.type}};
    if (row.poisson_rate) r["poisson_rate"] = *row.poisson_rate;
    if (row.hawkes_ks) {
      r["hawkes_ks"] = json{{"statistic", row.hawkes_ks->statistic},
                            {"p_value", row.hawkes_ks->p_value}};
    }
    if (row.poisson_ks) {
      r["poisson_ks"] = json{{"statistic", row.poisson_ks->statistic},
                             {"p_value", row.poisson_ks->p_value}};
    }
    baseline_doc["per_type"].push_back(std::move(r));
  }
  if (cmp.hawkes_loglik) baseline_doc["hawkes_loglik"] = *cmp.hawkes_loglik;
  if (cmp.poisson_loglik) baseline_doc["poisson_loglik"] = *cmp.poisson_loglik;
  write_json_file((fs::path(opt.out_dir) / "baseline.json").string(), baseline_doc);
  std::cout << "wrote GOF artifacts to " << opt.out_dir << "\n";
}

// -------------------------------------------------------------- intensity

struct IntensityOptions {
  std::string model_path;
  std::string events_path;
  std::string out_path;
  double start = 0.0;
  std::optional<double> end;
  double step = 1.0;
  std::uint64_t seed = 0;
  std::optional<double> horizon_override;
  std::optional<int> num_types_override;
};

void run_intensity(const IntensityOptions& opt) {
  require_input(opt.model_path);
  require_input(opt.events_path);
  prepare_output(opt.out_path);
  if (!(opt.step > 0.0)) throw std::invalid_argument("--step must be positive");

  const hawkes::HawkesModel model =
      hawkes::model_from_json(hawkes::read_text_file(opt.model_path));
  const hawkes::EventSequence seq =
      hawkes::read_event_csv(opt.events_path, opt.horizon_override, opt.num_types_override);

  const double end = opt.end.value_or(seq.horizon());
  std::ostringstream cfg;
  cfg << "intensity model=" << opt.model_path << " events=" << opt.events_path
      << " start=" << fmt(opt.start) << " end=" << fmt(end) << " step=" << fmt(opt.step);
  const hawkes::ArtifactMeta meta = make_meta(opt.seed, cfg.str());

  std::vector<double> grid;
  for (double t = opt.start; t <= end + 1e-12; t += opt.step) grid.push_back(std::min(t, end));
  const hawkes::IntensityPath path = hawkes::intensity_path(model, seq, grid);
  hawkes::write_intensity_csv(opt.out_path, path, meta);
  std::cout << "wrote " << opt.out_path << " (" << grid.size() << " grid points)\n";
}

// ----------------------------------------------------------------- report

struct ReportOptions {
  std::vector<std::string> fit_paths;
  std::string out_path;
  std::uint64_t seed = 0;
};

struct BlockStats {
  double mean = 0.0;
  double diag_mean = 0.0;
  double offdiag_mean = 0.0;
};

BlockStats block_stats(const hawkes::Matrix& alpha, int row0, int col0, int size) {
  BlockStats out;
  double sum = 0.0;
  double diag = 0.0;
  int diag_n = 0;
  for (int r = 0; r < size; ++r) {
    for (int c = 0; c < size; ++c) {
      const double v = alpha[static_cast<std::size_t>(row0 + r)][static_cast<std::size_t>(col0 + c)];
      sum += v;
      if (r == c) {
        diag += v;
        ++diag_n;
      }
    }
  }
  out.mean = sum / static_cast<double>(size * size);
  out.diag_mean = diag / static_cast<double>(diag_n);
  out.offdiag_mean = (sum - diag) / static_cast<double>(size * size - diag_n);
  return out;
}

void run_report(const ReportOptions& opt) {
  for (const auto& p : opt.fit_paths) require_input(p);
  prepare_output(opt.out_path);

  std::ostringstream cfg;
  cfg << "report fits=";
  for (const auto& p : opt.fit_paths) cfg << p << ';';
  const hawkes::ArtifactMeta meta = make_meta(opt.seed, cfg.str());

  json doc;
  doc["meta"] = meta_json(meta);
  doc["reports"] = json::array();
  json contrasts = json::array();
  for (const auto& path : opt.fit_paths) {
    const hawkes::FitReport report = hawkes::fit_report_from_json(hawkes::read_text_file(path));
    const int m = report.model.dim();
    if (m != 6) {
      throw std::invalid_argument(path + ": block analysis needs a 6-type fit, got " +
                                  std::to_string(m) + " types");
    }
    const hawkes::Matrix& alpha = report.model.params.alpha;
    const BlockStats a = block_stats(alpha, 0, 0, 3);
    const BlockStats b = block_stats(alpha, 0, 3, 3);
    const BlockStats c = block_stats(alpha, 3, 0, 3);
    const BlockStats d = block_stats(alpha, 3, 3, 3);

    double diag = 0.0;
    double total = 0.0;
    for (int i = 0; i < m; ++i) {
      diag += alpha[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
      for (int j = 0; j < m; ++j) total += alpha[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    const double diag_mean = diag / 6.0;
    const double offdiag_mean = (total - diag) / 30.0;

    auto block_json = [](const BlockStats& s) {
      return json{{"mean", s.mean},
                  {"diag_mean", s.diag_mean},
                  {"offdiag_mean", s.offdiag_mean},
                  {"contrast", s.diag_mean - s.offdiag_mean}};
    };
    doc["reports"].push_back(json{{"path", path},
                                  {"omega", report.model.params.omega},
                                  {"spectral_radius", report.spectral_radius},
                                  {"stable", report.stable},
                                  {"blocks",
                                   json{{"A", block_json(a)},
                                        {"B", block_json(b)},
                                        {"C", block_json(c)},
                                        {"D", block_json(d)}}},
                                  {"diag_mean", diag_mean},
                                  {"offdiag_mean", offdiag_mean},
                                  {"contrast", diag_mean - offdiag_mean}});
    contrasts.push_back(json{{"path", path}, {"block_a_contrast", a.diag_mean - a.offdiag_mean}});
  }
  doc["comparison"] = json{{"block_a_contrasts", contrasts}};
  write_json_file(opt.out_path, doc);
  std::cout << "wrote " << opt.out_path << " (" << opt.fit_paths.size() << " fits)\n";
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multivariate Hawkes process toolkit: extraction, fitting, simulation, "
               "diagnostics"};
  app.set_version_flag("--version", hawkes::kVersion);
  app.set_config("--config", "", "Key-value config file; section per subcommand; flags override");
  app.require_subcommand(1);

  ExtractOptions extract_opt;
  CLI::App* extract = app.add_subcommand(
      "extract", "Extract extreme-event sequences from daily return CSVs by quantile thresholds");
  extract->add_option("--returns", extract_opt.returns_paths,
                      "Input return CSVs (date,return_pct); several inputs merge into one "
                      "multi-type sequence (up marks first, then down marks)")
      ->required()
      ->expected(1, 64);
  extract->add_option("--q-low", extract_opt.q_low, "Lower quantile level")
      ->capture_default_str();
  extract->add_option("--q-high", extract_opt.q_high, "Upper quantile level")
      ->capture_default_str();
  extract->add_option("--out-events", extract_opt.out_events, "Output event CSV")->required();
  extract->add_option("--out-thresholds", extract_opt.out_thresholds, "Output thresholds JSON")
      ->required();
  extract->add_option("--seed", extract_opt.seed, "Seed recorded in outputs")
      ->capture_default_str();
  extract->callback([&extract_opt] { run_extract(extract_opt); });

  FitOptions fit_opt;
  CLI::App* fit = app.add_subcommand("fit", "Fit model parameters by Monte-Carlo SGD");
  fit->add_option("--events", fit_opt.events_path, "Input event CSV")->required();
  fit->add_option("--out", fit_opt.out_path, "Output fit report JSON")->required();
  fit->add_option("--mode", fit_opt.mode, "linear | nonlinear")->capture_default_str();
  fit->add_option("--link", fit_opt.link,
                  "identity | floored | softplus | relu (default: identity for linear, "
                  "floored for nonlinear)");
  fit->add_option("--floor", fit_opt.floor, "Floor for the floored link")->capture_default_str();
  CLI::Option* omega_opt = fit->add_option("--omega", fit_opt.omega_fixed, "Fix omega to a value");
  CLI::Option* train_opt = fit->add_flag("--train-omega", fit_opt.train_omega,
                                         "Learn omega jointly (log-parameterized)");
  CLI::Option* grid_opt = fit->add_option("--omega-grid", fit_opt.omega_grid,
                                          "Grid-search omega over these values, then fit with "
                                          "the winner")
                              ->delimiter(',');
  omega_opt->excludes(train_opt)->excludes(grid_opt);
  train_opt->excludes(grid_opt);
  fit->add_option("--validation-fraction", fit_opt.validation_fraction,
                  "Held-out tail fraction for --omega-grid scoring")
      ->capture_default_str();
  fit->add_option("--lr", fit_opt.learning_rate, "SGD learning rate")->capture_default_str();
  fit->add_option("--optimizer", fit_opt.optimizer, "plain | adam")
      ->check(CLI::IsMember({"plain", "adam"}))
      ->capture_default_str();
  fit->add_option("--epochs", fit_opt.epochs, "SGD epochs")->capture_default_str();
  fit->add_option("--mc-samples", fit_opt.mc_samples,
                  "Monte-Carlo samples per type per epoch")
      ->capture_default_str();
  fit->add_option("--seed", fit_opt.seed,
                  "Master seed; epoch seeds derive from it, type k adds k")
      ->capture_default_str();
  fit->add_option("--horizon", fit_opt.horizon_override, "Override the event CSV horizon");
  fit->add_option("--num-types", fit_opt.num_types_override,
                  "Override the event CSV type count");
  fit->add_option("--init", fit_opt.init_path, "Model JSON providing initial parameters");
  fit->callback([&fit_opt, omega_opt, train_opt, grid_opt] {
    if (!*omega_opt && !*train_opt && !*grid_opt) {
      throw CLI::RequiredError("fit requires one of --omega, --train-omega, --omega-grid");
    }
    run_fit(fit_opt);
  });

  SimulateOptions sim_opt;
  CLI::App* sim = app.add_subcommand("simulate", "Simulate a model by Ogata thinning");
  sim->add_option("--model", sim_opt.model_path, "Model JSON (a fit report also works)")
      ->required();
  sim->add_option("--horizon", sim_opt.horizon, "Simulation horizon")->required();
  sim->add_option("--seed", sim_opt.seed, "Simulation seed")->capture_default_str();
  sim->add_option("--out", sim_opt.out_path, "Output event CSV")->required();
  sim->callback([&sim_opt] { run_simulate(sim_opt); });

  GofOptions gof_opt;
  CLI::App* gof = app.add_subcommand(
      "gof", "Goodness-of-fit diagnostics via the random time change theorem");
  gof->add_option("--model", gof_opt.model_path, "Model JSON (a fit report also works)")
      ->required();
  gof->add_option("--events", gof_opt.events_path, "Input event CSV")->required();
  gof->add_option("--out-dir", gof_opt.out_dir, "Directory for Q-Q/scatter CSVs and JSON reports")
      ->required();
  gof->add_option("--seed", gof_opt.seed, "Seed recorded in outputs")->capture_default_str();
  gof->add_option("--horizon", gof_opt.horizon_override, "Override the event CSV horizon");
  gof->add_option("--num-types", gof_opt.num_types_override,
                  "Override the event CSV type count");
  gof->callback([&gof_opt] { run_gof(gof_opt); });

  IntensityOptions int_opt;
  CLI::App* intensity = app.add_subcommand("intensity", "Evaluate the intensity path on a grid");
  intensity->add_option("--model", int_opt.model_path, "Model JSON (a fit report also works)")
      ->required();
  intensity->add_option("--events", int_opt.events_path, "Input event CSV")->required();
  intensity->add_option("--out", int_opt.out_path, "Output intensity CSV")->required();
  intensity->add_option("--start", int_opt.start, "Grid start")->capture_default_str();
  intensity->add_option("--end", int_opt.end, "Grid end (default: horizon)");
  intensity->add_option("--step", int_opt.step, "Grid step")->capture_default_str();
  intensity->add_option("--seed", int_opt.seed, "Seed recorded in outputs")
      ->capture_default_str();
  intensity->add_option("--horizon", int_opt.horizon_override, "Override the event CSV horizon");
  intensity->add_option("--num-types", int_opt.num_types_override,
                        "Override the event CSV type count");
  intensity->callback([&int_opt] { run_intensity(int_opt); });

  ReportOptions rep_opt;
  CLI::App* report = app.add_subcommand(
      "report", "Block analysis of 6-type fits: 3x3 block means and diagonal contrast");
  report->add_option("--fits", rep_opt.fit_paths, "Fit report JSONs (6-type)")
      ->required()
      ->expected(1, 64);
  report->add_option("--out", rep_opt.out_path, "Output summary JSON")->required();
  report->add_option("--seed", rep_opt.seed, "Seed recorded in outputs")->capture_default_str();
  report->callback([&rep_opt] { run_report(rep_opt); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << json{{"kind", "input"}, {"message", e.what()}}.dump() << "\n";
    return 2;
  } catch (const hawkes::NumericalError& e) {
    json err{{"kind", "numerical"}, {"message", e.what()}};
    if (e.epoch() >= 0) {
      err["epoch"] = e.epoch();
      err["partial_trace"] = e.partial_trace();
    }
    std::cerr << err.dump() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << json{{"kind", "input"}, {"message", e.what()}}.dump() << "\n";
    return 2;
  }
  return 0;
}
