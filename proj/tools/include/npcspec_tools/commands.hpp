#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "npcspec/mcmc.hpp"
#include "npcspec/modelselect.hpp"
#include "npcspec_tools/config.hpp"

namespace npcspec::tools {

/// Parses arguments (program name first) and dispatches to a subcommand.
/// Returns the process exit code; diagnostics go to standard error.
int run_cli(const std::vector<std::string>& args);

/// Result document of the fit command.
nlohmann::json fit_summary(const ChainOutput& chain, const TimeSeries& ts, const FitConfig& cfg,
                           const OrderScan* scan, bool timing);

std::string order_scan_csv(const OrderScan& scan);
std::string order_scan_svg(const OrderScan& scan);

/// Log periodogram, posterior median log-PSD and an optional band from a
/// fit summary. `sample_rate` > 0 puts the x axis in Hz.
std::string spectrum_svg(const TimeSeries& ts, const nlohmann::json& summary, const std::string& bands,
                         double sample_rate);

/// Applies centering, then differencing.
TimeSeries preprocess(const TimeSeries& ts, bool center, bool difference);

}  // namespace npcspec::tools
