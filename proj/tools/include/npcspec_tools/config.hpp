#pragma once

#include <optional>
#include <string>

#include "json.hpp"
#include "npcspec/bernstein.hpp"
#include "npcspec/mcmc.hpp"

namespace npcspec::tools {

/// Settings of the fit command. Every field may come from a JSON config
/// file; command-line flags override it.
struct FitConfig {
  std::string data;
  std::string method = "npc";        // ar | np | npc
  std::optional<std::size_t> order;  // empty: select by DIC
  std::size_t p_max = 10;
  double alpha = 0.1;
  bool center = false;
  bool difference = false;
  nlohmann::json prior = nlohmann::json::object();
  nlohmann::json mcmc = nlohmann::json::object();
  std::string summary_path;
  std::string samples_path;
  bool timing = false;

  void validate() const;
};

/// Rejects unknown keys at every level before anything is read.
FitConfig fit_config_from_json(const nlohmann::json& j);

BernsteinDirichletConfig resolve_prior(const FitConfig& cfg, std::size_t n);
ArPriorConfig resolve_ar_prior(const FitConfig& cfg);
/// Method defaults (npc_defaults / ar_defaults) with the overrides applied.
McmcConfig resolve_mcmc(const FitConfig& cfg);

nlohmann::json parse_json_text(const std::string& text, const std::string& origin);

}  // namespace npcspec::tools
