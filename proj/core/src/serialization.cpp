#include "hawkes/serialization.hpp"

#include <stdexcept>

#include <json.hpp>

namespace hawkes {

namespace {

using nlohmann::json;

std::string mode_token(ModelMode mode) {
  return mode == ModelMode::Linear ? "LINEAR" : "NONLINEAR";
}

ModelMode mode_from_token(const std::string& token) {
  if (token == "LINEAR") return ModelMode::Linear;
  if (token == "NONLINEAR") return ModelMode::Nonlinear;
  throw ParseError("unknown mode '" + token + "'");
}

std::string variant_token(LinkVariant variant) {
  switch (variant) {
    case LinkVariant::Identity: return "IDENTITY";
    case LinkVariant::FlooredIdentity: return "FLOORED_IDENTITY";
    case LinkVariant::Softplus: return "SOFTPLUS";
    case LinkVariant::Relu: return "RELU";
  }
  return "IDENTITY";
}

LinkVariant variant_from_token(const std::string& token) {
  if (token == "IDENTITY") return LinkVariant::Identity;
  if (token == "FLOORED_IDENTITY") return LinkVariant::FlooredIdentity;
  if (token == "SOFTPLUS") return LinkVariant::Softplus;
  if (token == "RELU") return LinkVariant::Relu;
  throw ParseError("unknown link variant '" + token + "'");
}

json link_to_json(const LinkSpec& link) {
  json j{{"variant", variant_token(link.variant)}};
  if (link.variant == LinkVariant::FlooredIdentity) j["floor"] = link.floor;
  return j;
}

LinkSpec link_from(const json& j) {
  LinkSpec link;
  link.variant = variant_from_token(j.at("variant").get<std::string>());
  if (link.variant == LinkVariant::FlooredIdentity) {
    link.floor = j.value("floor", 0.01);
  } else {
    link.floor = 0.0;
  }
  return link;
}

json model_to_json_obj(const HawkesModel& model) {
  return json{{"mode", mode_token(model.mode)},
              {"mu", model.params.mu},
              {"alpha", model.params.alpha},
              {"omega", model.params.omega},
              {"link", link_to_json(model.link)}};
}

HawkesModel model_from(const json& j) {
  HawkesModel model;
  model.mode = mode_from_token(j.at("mode").get<std::string>());
  model.params.mu = j.at("mu").get<std::vector<double>>();
  model.params.alpha = j.at("alpha").get<Matrix>();
  model.params.omega = j.at("omega").get<double>();
  model.link = link_from(j.at("link"));
  model.validate();
  return model;
}

json omega_mode_to_json(const OmegaMode& mode) {
  if (mode.kind == OmegaMode::Kind::Fixed) {
    return json{{"kind", "FIXED"}, {"value", mode.value}};
  }
  return json{{"kind", "TRAINED"}};
}

OmegaMode omega_mode_from(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "FIXED") return OmegaMode::fixed(j.at("value").get<double>());
  if (kind == "TRAINED") return OmegaMode::trained();
  throw ParseError("unknown omega mode '" + kind + "'");
}

json config_to_json(const FitConfig& config) {
  json j{{"learning_rate", config.learning_rate},
         {"epochs", config.epochs},
         {"mc_samples", config.mc_samples},
         {"seed", config.seed},
         {"omega_mode", omega_mode_to_json(config.omega_mode)},
         {"mode", mode_token(config.mode)},
         {"link", link_to_json(config.link)},
         {"optimizer", config.optimizer == Optimizer::Adam ? "ADAM" : "PLAIN"}};
  if (config.init.explicit_init) {
    const KernelParams& p = *config.init.explicit_init;
    j["init"] = json{{"mu", p.mu}, {"alpha", p.alpha}, {"omega", p.omega}};
  }
  return j;
}

FitConfig config_from(const json& j) {
  FitConfig config;
  config.learning_rate = j.at("learning_rate").get<double>();
  config.epochs = j.at("epochs").get<int>();
  config.mc_samples = j.at("mc_samples").get<int>();
  config.seed = j.at("seed").get<std::uint64_t>();
  config.omega_mode = omega_mode_from(j.at("omega_mode"));
  config.mode = mode_from_token(j.at("mode").get<std::string>());
  config.link = link_from(j.at("link"));
  const std::string optimizer = j.value("optimizer", "PLAIN");
  if (optimizer == "ADAM") {
    config.optimizer = Optimizer::Adam;
  } else if (optimizer == "PLAIN") {
    config.optimizer = Optimizer::Plain;
  } else {
    throw ParseError("unknown optimizer '" + optimizer + "'");
  }
  if (j.contains("init")) {
    KernelParams p;
    p.mu = j.at("init").at("mu").get<std::vector<double>>();
    p.alpha = j.at("init").at("alpha").get<Matrix>();
    p.omega = j.at("init").at("omega").get<double>();
    config.init.explicit_init = std::move(p);
  }
  return config;
}

json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

} // namespace

std::string to_json(const HawkesModel& model, int indent) {
  return model_to_json_obj(model).dump(indent);
}

HawkesModel model_from_json(const std::string& text) {
  try {
    return model_from(parse_document(text));
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid model JSON: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("invalid model JSON: ") + e.what());
  }
}

std::string to_json(const FitReport& report, int indent) {
  json j = model_to_json_obj(report.model);
  j["nll_trace"] = report.nll_trace;
  j["spectral_radius"] = report.spectral_radius;
  j["stable"] = report.stable;
  j["config"] = config_to_json(report.config);
  j["prng_name"] = report.prng_name;
  j["insufficient_data"] = report.insufficient_data;
  j["projection_active"] = report.projection_active;
  j["floor_fraction"] = report.floor_fraction;
  return j.dump(indent);
}

FitReport fit_report_from_json(const std::string& text) {
  const json j = parse_document(text);
  try {
    FitReport report;
    report.model = model_from(j);
    report.nll_trace = j.at("nll_trace").get<std::vector<double>>();
    report.spectral_radius = j.at("spectral_radius").get<double>();
    report.stable = j.at("stable").get<bool>();
    report.config = config_from(j.at("config"));
    report.prng_name = j.at("prng_name").get<std::string>();
    report.insufficient_data = j.value("insufficient_data", false);
    report.projection_active = j.value("projection_active", false);
    report.floor_fraction = j.value("floor_fraction", 0.0);
    return report;
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid fit report JSON: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("invalid fit report JSON: ") + e.what());
  }
}

} // namespace hawkes
