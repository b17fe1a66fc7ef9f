#include "npcspec_tools/config.hpp"

#include <set>

#include "npcspec/error.hpp"
#include "npcspec_tools/errors.hpp"

namespace npcspec::tools {

using nlohmann::json;

namespace {

const std::set<std::string> kTop{"data", "method", "order", "p_max", "alpha", "preprocess", "prior", "mcmc", "output"};
const std::set<std::string> kPreprocess{"center", "difference"};
const std::set<std::string> kPrior{"M",        "g0_a", "g0_b",        "theta_k",    "k_max",
                                   "alpha_tau", "beta_tau", "L", "alpha_sigma", "beta_sigma"};
const std::set<std::string> kMcmc{"iterations",   "burn_in",        "thin",           "seed",
                                  "eta_proposal_sd", "adapt_target", "adapt_batch",   "adapt_step_cap",
                                  "initial_rho_sd", "enumerate_k",   "omit_endpoints"};
const std::set<std::string> kOutput{"summary", "samples", "timing"};

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <class T>
void read(const json& j, const char* key, T& target) {
  if (!j.contains(key)) return;
  try {
    target = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("bad value for '") + key + "'");
  }
}

}  // namespace

json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(origin + ": " + e.what());
  }
}

void FitConfig::validate() const {
  if (method != "ar" && method != "np" && method != "npc") throw ConfigError("method must be ar, np or npc");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
}

FitConfig fit_config_from_json(const json& j) {
  check_keys(j, kTop, "config");
  FitConfig cfg;
  read(j, "data", cfg.data);
  read(j, "method", cfg.method);
  read(j, "p_max", cfg.p_max);
  read(j, "alpha", cfg.alpha);
  if (j.contains("order")) {
    const auto& o = j["order"];
    if (o.is_string() && o.get<std::string>() == "dic") {
      cfg.order.reset();
    } else if (o.is_number_unsigned()) {
      cfg.order = o.get<std::size_t>();
    } else {
      throw ConfigError("order must be a nonnegative integer or \"dic\"");
    }
  }
  if (j.contains("preprocess")) {
    check_keys(j["preprocess"], kPreprocess, "preprocess");
    read(j["preprocess"], "center", cfg.center);
    read(j["preprocess"], "difference", cfg.difference);
  }
  if (j.contains("prior")) {
    check_keys(j["prior"], kPrior, "prior");
    cfg.prior = j["prior"];
  }
  if (j.contains("mcmc")) {
    check_keys(j["mcmc"], kMcmc, "mcmc");
    cfg.mcmc = j["mcmc"];
  }
  if (j.contains("output")) {
    check_keys(j["output"], kOutput, "output");
    read(j["output"], "summary", cfg.summary_path);
    read(j["output"], "samples", cfg.samples_path);
    read(j["output"], "timing", cfg.timing);
  }
  cfg.validate();
  return cfg;
}

BernsteinDirichletConfig resolve_prior(const FitConfig& cfg, std::size_t n) {
  auto p = BernsteinDirichletConfig::for_length(n);
  const auto& j = cfg.prior;
  read(j, "M", p.M);
  read(j, "g0_a", p.g0_a);
  read(j, "g0_b", p.g0_b);
  read(j, "theta_k", p.theta_k);
  read(j, "k_max", p.k_max);
  read(j, "alpha_tau", p.alpha_tau);
  read(j, "beta_tau", p.beta_tau);
  read(j, "L", p.L);
  try {
    p.validate();
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
  return p;
}

ArPriorConfig resolve_ar_prior(const FitConfig& cfg) {
  ArPriorConfig p;
  read(cfg.prior, "alpha_sigma", p.alpha_sigma);
  read(cfg.prior, "beta_sigma", p.beta_sigma);
  if (!(p.alpha_sigma > 0.0 && p.beta_sigma > 0.0)) throw ConfigError("sigma2 hyperparameters must be positive");
  return p;
}

McmcConfig resolve_mcmc(const FitConfig& cfg) {
  McmcConfig m = cfg.method == "ar" ? McmcConfig::ar_defaults() : McmcConfig::npc_defaults();
  const auto& j = cfg.mcmc;
  read(j, "iterations", m.iterations);
  read(j, "burn_in", m.burn_in);
  read(j, "thin", m.thin);
  read(j, "seed", m.seed);
  read(j, "eta_proposal_sd", m.eta_proposal_sd);
  read(j, "adapt_target", m.adapt_target);
  read(j, "adapt_batch", m.adapt_batch);
  read(j, "adapt_step_cap", m.adapt_step_cap);
  read(j, "initial_rho_sd", m.initial_rho_sd);
  read(j, "enumerate_k", m.enumerate_k);
  read(j, "omit_endpoints", m.omit_endpoints);
  try {
    m.validate();
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
  return m;
}

}  // namespace npcspec::tools
