#include "npcspec_tools/commands.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>

#include "CLI11.hpp"
#include "npcspec/error.hpp"
#include "npcspec/postprocess.hpp"
#include "npcspec/rng.hpp"
#include "npcspec_tools/errors.hpp"
#include "npcspec_tools/format.hpp"
#include "npcspec_tools/harness.hpp"
#include "npcspec_tools/svg.hpp"

namespace npcspec::tools {

using nlohmann::json;

TimeSeries preprocess(const TimeSeries& ts, bool center, bool difference) {
  TimeSeries out = ts;
  if (center) out = out.centered();
  if (difference) out = out.differenced();
  return out;
}

namespace {

json band_json(const CredibleBand& b) {
  json j{{"alpha", b.alpha}, {"lower", b.lower}, {"upper", b.upper}};
  if (b.kind == BandKind::uniform) {
    j["c_star"] = b.c_star;
    j["excluded"] = b.excluded;
  }
  return j;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

json scan_json(const OrderScan& s) {
  return {{"orders", s.orders},   {"neg_loglik", s.neg_loglik}, {"dic", s.dic},
          {"dic_rank", s.dic_rank}, {"bic", s.bic},             {"selected_dic", s.selected_dic}};
}

}  // namespace

json fit_summary(const ChainOutput& chain, const TimeSeries& ts, const FitConfig& cfg, const OrderScan* scan,
                 bool timing) {
  const std::size_t n = ts.size();
  const auto& grid = chain.psd.grid();
  json j;
  j["method"] = chain.method;
  j["order"] = chain.order;
  j["n"] = n;
  j["preprocess"] = {{"center", cfg.center}, {"difference", cfg.difference}};
  j["mcmc"] = {{"iterations", chain.config.iterations}, {"burn_in", chain.config.burn_in},
               {"thin", chain.config.thin},             {"seed", chain.config.seed},
               {"retained", chain.traces.size()},       {"omit_endpoints", chain.config.omit_endpoints}};
  if (chain.method == "ar") {
    const auto p = resolve_ar_prior(cfg);
    j["prior"] = {{"alpha_sigma", p.alpha_sigma}, {"beta_sigma", p.beta_sigma}};
  } else {
    const auto p = resolve_prior(cfg, n);
    j["prior"] = {{"M", p.M},         {"g0_a", p.g0_a},           {"g0_b", p.g0_b},
                  {"theta_k", p.theta_k}, {"k_max", p.k_max},     {"alpha_tau", p.alpha_tau},
                  {"beta_tau", p.beta_tau}, {"L", p.L}};
  }
  j["frequencies"] = grid.freqs;
  j["periodogram"] = periodogram_from_coeffs(real_fourier_transform(ts)).ordinates;
  j["median_psd"] = posterior_median_psd(chain.psd);

  const auto interior = interior_columns(chain.psd);
  j["band_frequencies"] = interior.grid().freqs;
  j["uniform_band"] = band_json(uniform_credible_band(interior, cfg.alpha));
  j["pointwise_band"] = band_json(pointwise_credible_band(interior, cfg.alpha));

  std::vector<double> eta, k, tau, sigma2;
  const std::size_t p = chain.order;
  std::vector<double> rho_mean(p, 0.0);
  for (const auto& t : chain.traces) {
    eta.push_back(t.eta);
    k.push_back(static_cast<double>(t.k));
    tau.push_back(t.tau);
    sigma2.push_back(t.sigma2);
    for (std::size_t l = 0; l < p; ++l) rho_mean[l] += t.rho[l];
  }
  for (auto& r : rho_mean) r /= std::max<double>(1.0, static_cast<double>(chain.traces.size()));
  j["rho"] = {{"mean", rho_mean},
              {"acceptance", chain.rho_acceptance},
              {"proposal_sd", chain.traces.empty() ? std::vector<double>{} : chain.traces.back().rho_sd}};
  if (chain.method == "ar") {
    j["sigma2"] = {{"mean", mean_of(sigma2)}, {"median", median(sigma2)}};
  } else {
    const auto at = [&](double v) {
      return static_cast<double>(std::count(eta.begin(), eta.end(), v)) / static_cast<double>(eta.size());
    };
    j["eta"] = {{"mean", chain.mean_eta()}, {"median", median(eta)}, {"fraction_at_0", at(0.0)},
                {"fraction_at_1", at(1.0)}};
    j["k"] = {{"mean", mean_of(k)},
              {"median", median(k)},
              {"min", *std::min_element(k.begin(), k.end())},
              {"max", *std::max_element(k.begin(), k.end())}};
    j["tau"] = {{"median", median(tau)}};
    j["acceptance"] = {{"v", chain.v_acceptance}, {"w", chain.w_acceptance}, {"eta", chain.eta_acceptance}};
  }
  if (scan) j["order_scan"] = scan_json(*scan);
  if (timing) j["wall_seconds"] = chain.wall_seconds;
  return j;
}

std::string order_scan_csv(const OrderScan& s) {
  const auto ratios = elbow_ratios(s.neg_loglik);
  std::string out = csv_row({"order", "neg_loglik", "dic", "dic_rank", "bic", "elbow_ratio"});
  for (std::size_t i = 0; i < s.orders.size(); ++i) {
    const std::size_t p = s.orders[i];
    const std::string ratio = (p >= 1 && p - 1 < ratios.size()) ? format_double(ratios[p - 1]) : "";
    out += csv_row({std::to_string(p), format_double(s.neg_loglik[i]), format_double(s.dic[i]),
                    std::to_string(s.dic_rank[i]), format_double(s.bic[i]), ratio});
  }
  return out;
}

std::string order_scan_svg(const OrderScan& s) {
  std::vector<double> x(s.orders.begin(), s.orders.end());
  const auto [lo, hi] = std::minmax_element(s.neg_loglik.begin(), s.neg_loglik.end());
  const double pad = 0.05 * std::max(*hi - *lo, 1e-9);
  SvgPlot plot;
  plot.set_range(-0.5, x.empty() ? 1.0 : x.back() + 0.5, *lo - pad, *hi + pad);
  plot.set_labels("Negative log-likelihood at the Yule-Walker fit", "AR order p", "negative log-likelihood");
  plot.add_line(x, s.neg_loglik, "#1f4e79", 2.0);
  plot.add_points(x, s.neg_loglik, "#1f4e79");
  const auto it = std::find(s.orders.begin(), s.orders.end(), s.selected_dic);
  if (it != s.orders.end()) {
    const auto i = static_cast<std::size_t>(it - s.orders.begin());
    plot.add_marker(x[i], s.neg_loglik[i], "DIC minimum p=" + std::to_string(s.selected_dic));
  }
  return plot.render();
}

std::string spectrum_svg(const TimeSeries& ts, const json& summary, const std::string& bands, double sample_rate) {
  const auto freqs = summary.at("frequencies").get<std::vector<double>>();
  const auto med = summary.at("median_psd").get<std::vector<double>>();
  if (med.size() != freqs.size()) throw ConfigError("summary frequencies and median_psd differ in length");
  const auto pg = periodogram_from_coeffs(real_fourier_transform(ts)).ordinates;
  if (pg.size() != freqs.size()) throw ConfigError("data length does not match the fit summary");
  const double scale = sample_rate > 0.0 ? sample_rate / (2.0 * std::numbers::pi) : 1.0;
  auto to_x = [&](std::vector<double> f) {
    for (auto& v : f) v *= scale;
    return f;
  };
  auto to_log = [](std::vector<double> v) {
    for (auto& y : v) y = y > 0.0 ? std::log(y) : -INFINITY;
    return v;
  };
  const auto x = to_x(freqs);
  const auto log_pg = to_log(pg);
  const auto log_med = to_log(med);

  std::vector<double> band_x, band_lo, band_hi;
  if (bands == "uniform" || bands == "pointwise") {
    const auto& b = summary.at(bands == "uniform" ? "uniform_band" : "pointwise_band");
    band_x = to_x(summary.at("band_frequencies").get<std::vector<double>>());
    band_lo = to_log(b.at("lower").get<std::vector<double>>());
    band_hi = to_log(b.at("upper").get<std::vector<double>>());
  } else if (bands != "none") {
    throw ConfigError("bands must be uniform, pointwise or none");
  }

  double y_lo = INFINITY, y_hi = -INFINITY;
  for (const std::vector<double>* v : std::initializer_list<const std::vector<double>*>{&log_pg, &log_med, &band_lo, &band_hi}) {
    for (double y : *v) {
      if (!std::isfinite(y)) continue;
      y_lo = std::min(y_lo, y);
      y_hi = std::max(y_hi, y);
    }
  }
  if (!std::isfinite(y_lo)) {
    y_lo = -1.0;
    y_hi = 1.0;
  }
  const double pad = 0.05 * std::max(y_hi - y_lo, 1e-9);
  SvgPlot plot;
  plot.set_range(0.0, x.back(), y_lo - pad, y_hi + pad);
  plot.set_labels("Spectral density (" + summary.value("method", std::string("?")) + ", p=" +
                      std::to_string(summary.value("order", 0)) + ")",
                  sample_rate > 0.0 ? "frequency (Hz)" : "frequency (radians)", "log spectral density");
  if (!band_x.empty()) {
    plot.add_band(band_x, band_lo, band_hi, "#6baed6", 0.35);
    plot.add_legend(bands + " band", "#6baed6");
  }
  plot.add_line(x, log_pg, "#999999", 1.0);
  plot.add_legend("log periodogram", "#999999");
  plot.add_line(x, log_med, "#08306b", 2.0);
  plot.add_legend("posterior median", "#08306b");
  return plot.render();
}

namespace {

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_text_file(path, text);
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

int cmd_simulate(const std::vector<double>& ar, const std::vector<double>& ma, std::size_t n, std::uint64_t seed,
                 const std::string& out) {
  if (n < 4) throw ConfigError("n must be at least 4");
  const ArmaSpec spec{ar, ma};
  TimeSeries ts;
  try {
    ts = simulate_arma(spec, n, seed);
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
  emit(out, series_csv(ts.values()));
  if (!out.empty() && out != "-") {
    json side{{"ar", ar}, {"ma", ma}, {"n", n}, {"seed", seed}, {"innovations", "standard normal"}};
    write_text_file(out + ".json", dump(side));
  }
  return exit_ok;
}

struct FitFlags {
  std::string config;
  std::string data, method, order, summary, samples;
  std::optional<std::size_t> p_max, iterations, burn_in, thin, k_max;
  std::optional<std::uint64_t> seed;
  std::optional<double> alpha;
  bool center = false, difference = false, timing = false, include_endpoints = false;
};

FitConfig build_fit_config(const FitFlags& f) {
  FitConfig cfg;
  if (!f.config.empty()) cfg = fit_config_from_json(parse_json_text(read_text_file(f.config), f.config));
  if (!f.data.empty()) cfg.data = f.data;
  if (!f.method.empty()) cfg.method = f.method;
  if (!f.order.empty()) {
    if (f.order == "dic") {
      cfg.order.reset();
    } else {
      try {
        std::size_t pos = 0;
        const long long v = std::stoll(f.order, &pos);
        if (pos != f.order.size() || v < 0) throw std::invalid_argument("order");
        cfg.order = static_cast<std::size_t>(v);
      } catch (const std::exception&) {
        throw ConfigError("order must be a nonnegative integer or dic");
      }
    }
  }
  if (f.p_max) cfg.p_max = *f.p_max;
  if (f.alpha) cfg.alpha = *f.alpha;
  if (f.iterations) cfg.mcmc["iterations"] = *f.iterations;
  if (f.burn_in) cfg.mcmc["burn_in"] = *f.burn_in;
  if (f.thin) cfg.mcmc["thin"] = *f.thin;
  if (f.seed) cfg.mcmc["seed"] = *f.seed;
  if (f.k_max) cfg.prior["k_max"] = *f.k_max;
  if (f.include_endpoints) cfg.mcmc["omit_endpoints"] = false;
  cfg.center = cfg.center || f.center;
  cfg.difference = cfg.difference || f.difference;
  if (!f.summary.empty()) cfg.summary_path = f.summary;
  if (!f.samples.empty()) cfg.samples_path = f.samples;
  cfg.timing = cfg.timing || f.timing;
  cfg.validate();
  if (cfg.data.empty()) throw ConfigError("no data file given");
  return cfg;
}

std::string samples_csv(const PosteriorSpectra& ps) {
  std::vector<std::string> header{"draw"};
  for (std::size_t j = 0; j < ps.cols(); ++j) header.push_back("j" + std::to_string(j));
  std::string out = csv_row(header);
  for (std::size_t i = 0; i < ps.rows(); ++i) {
    std::vector<std::string> row{std::to_string(i)};
    for (double v : ps.row(i)) row.push_back(format_double(v));
    out += csv_row(row);
  }
  return out;
}

McmcConfig scan_mcmc(const FitConfig& cfg) {
  FitConfig ar = cfg;
  ar.method = "ar";
  McmcConfig m = McmcConfig::ar_defaults();
  m.seed = resolve_mcmc(ar).seed;
  return m;
}

int cmd_fit(const FitFlags& flags) {
  const FitConfig cfg = build_fit_config(flags);
  const TimeSeries ts = preprocess(read_series_csv(cfg.data), cfg.center, cfg.difference);
  const McmcConfig mcmc = resolve_mcmc(cfg);

  std::optional<OrderScan> scan;
  std::size_t p = 0;
  if (cfg.method != "np") {
    if (cfg.order) {
      p = *cfg.order;
    } else {
      if (cfg.p_max >= ts.size()) throw ConfigError("p_max must be smaller than n");
      scan = select_order(ts, cfg.p_max, scan_mcmc(cfg), resolve_ar_prior(cfg));
      p = scan->selected_dic;
    }
  }
  if (p >= ts.size()) throw ConfigError("order must be smaller than n");
  const ChainOutput chain = cfg.method == "ar" ? run_ar(ts, p, resolve_ar_prior(cfg), mcmc)
                                               : run_npc(ts, p, resolve_prior(cfg, ts.size()), mcmc);
  emit(cfg.summary_path, dump(fit_summary(chain, ts, cfg, scan ? &*scan : nullptr, cfg.timing)));
  if (!cfg.samples_path.empty()) write_text_file(cfg.samples_path, samples_csv(chain.psd));
  return exit_ok;
}

int cmd_order_scan(const std::string& data, bool center, bool difference, std::size_t p_max,
                   std::optional<std::size_t> iterations, std::optional<std::size_t> burn_in, std::uint64_t seed,
                   const std::string& out, const std::string& svg) {
  const TimeSeries ts = preprocess(read_series_csv(data), center, difference);
  if (p_max >= ts.size()) throw ConfigError("p_max must be smaller than n");
  McmcConfig m = McmcConfig::ar_defaults();
  if (iterations) m.iterations = *iterations;
  if (burn_in) m.burn_in = *burn_in;
  m.seed = seed;
  try {
    m.validate();
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
  const auto scan = select_order(ts, p_max, m);
  emit(out, order_scan_csv(scan));
  if (!svg.empty()) write_text_file(svg, order_scan_svg(scan));
  return exit_ok;
}

struct BenchFlags {
  std::string spec_file, preset = "comparison", out_dir = "benchmark-out";
  std::optional<std::size_t> replicates, p_max, k_max;
  std::optional<std::uint64_t> seed;
  std::size_t workers = 0;
  bool full_scale = false, timing = false, quiet = false;
};

int cmd_benchmark(const BenchFlags& f) {
  BenchmarkSpec spec;
  if (!f.spec_file.empty()) {
    spec = spec_from_json(parse_json_text(read_text_file(f.spec_file), f.spec_file));
  } else if (f.preset == "comparison") {
    spec = BenchmarkSpec::comparison();
  } else if (f.preset == "white-noise") {
    spec = BenchmarkSpec::white_noise();
  } else {
    throw ConfigError("unknown preset " + f.preset);
  }
  if (f.full_scale) {
    spec.full_scale = true;
    spec.replicates = 1024;
  }
  if (f.replicates) spec.replicates = *f.replicates;
  if (f.p_max) spec.p_max = *f.p_max;
  if (f.k_max) spec.k_max = *f.k_max;
  if (f.seed) spec.master_seed = *f.seed;
  spec.validate();

  ProgressFn progress;
  if (!f.quiet) {
    progress = [&](const ReplicateResult& r, std::size_t done, std::size_t total) {
      std::cerr << "[" << done << "/" << total << "] " << spec.scenarios[r.scenario].name << " #" << r.replicate
                << (r.failed ? " FAILED: " + r.error : std::string()) << "\n";
    };
  }
  const auto result = run_benchmark(spec, f.workers, progress);
  const std::filesystem::path dir(f.out_dir);
  write_text_file(dir / "summary.csv", summary_csv(result));
  write_text_file(dir / "replicates.csv", replicates_csv(result));
  write_text_file(dir / "provenance.json", dump(provenance_json(result, f.timing)));
  if (!f.quiet) std::cerr << summary_csv(result);
  const double failed_fraction = static_cast<double>(result.failed) / static_cast<double>(result.replicates.size());
  return failed_fraction > 0.01 ? exit_partial : exit_ok;
}

int cmd_plot(const std::string& data, const std::string& summary_path, const std::string& bands, double sample_rate,
             const std::string& out) {
  const json summary = parse_json_text(read_text_file(summary_path), summary_path);
  bool center = false, difference = false;
  if (summary.contains("preprocess")) {
    center = summary["preprocess"].value("center", false);
    difference = summary["preprocess"].value("difference", false);
  }
  const TimeSeries ts = preprocess(read_series_csv(data), center, difference);
  emit(out, spectrum_svg(ts, summary, bands, sample_rate));
  return exit_ok;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Bayesian spectral density estimation with a nonparametrically corrected AR likelihood", "npcspec"};
  app.require_subcommand(1);

  std::vector<double> sim_ar, sim_ma;
  std::size_t sim_n = 0;
  std::uint64_t sim_seed = 1;
  std::string sim_out;
  auto* sim = app.add_subcommand("simulate", "Simulate an ARMA series with standard normal innovations");
  sim->add_option("--ar", sim_ar, "AR coefficients a_1..a_p")->delimiter(',');
  sim->add_option("--ma", sim_ma, "MA coefficients b_1..b_q")->delimiter(',');
  sim->add_option("--n", sim_n, "Series length")->required();
  sim->add_option("--seed", sim_seed, "Seed");
  sim->add_option("--out", sim_out, "Output CSV (stdout if omitted; a .json sidecar is written next to files)");

  FitFlags ff;
  auto* fit = app.add_subcommand("fit", "Fit the AR, NP or NPC model to a series");
  fit->add_option("--config", ff.config, "JSON config file; flags override it");
  fit->add_option("--data", ff.data, "Input CSV with a 'value' column");
  fit->add_option("--method", ff.method, "ar, np or npc")->check(CLI::IsMember({"ar", "np", "npc"}));
  fit->add_option("--order", ff.order, "Working-model order or 'dic'");
  fit->add_option("--p-max", ff.p_max, "Largest order in the DIC scan");
  fit->add_option("--alpha", ff.alpha, "Band miscoverage (0.1 gives 90% bands)");
  fit->add_option("--iterations", ff.iterations, "Total sweeps including burn-in");
  fit->add_option("--burn-in", ff.burn_in, "Burn-in sweeps");
  fit->add_option("--thin", ff.thin, "Thinning");
  fit->add_option("--seed", ff.seed, "Seed");
  fit->add_option("--k-max", ff.k_max, "Largest Bernstein polynomial degree");
  fit->add_flag("--center", ff.center, "Subtract the sample mean");
  fit->add_flag("--difference", ff.difference, "Take first differences");
  fit->add_flag("--include-endpoints", ff.include_endpoints, "Use the frequencies 0 and pi in the likelihood");
  fit->add_option("--out", ff.summary, "Summary JSON (stdout if omitted)");
  fit->add_option("--samples", ff.samples, "CSV of posterior PSD draws");
  fit->add_flag("--timing", ff.timing, "Record wall time in the summary");

  std::string scan_data, scan_out, scan_svg;
  bool scan_center = false, scan_diff = false;
  std::size_t scan_pmax = 10;
  std::optional<std::size_t> scan_iter, scan_burn;
  std::uint64_t scan_seed = 1;
  auto* scan = app.add_subcommand("order-scan", "AR fits for p = 0..p_max with DIC and the likelihood curve");
  scan->add_option("--data", scan_data, "Input CSV")->required();
  scan->add_option("--p-max", scan_pmax, "Largest order");
  scan->add_option("--iterations", scan_iter, "Sweeps per AR chain");
  scan->add_option("--burn-in", scan_burn, "Burn-in per AR chain");
  scan->add_option("--seed", scan_seed, "Seed");
  scan->add_flag("--center", scan_center, "Subtract the sample mean");
  scan->add_flag("--difference", scan_diff, "Take first differences");
  scan->add_option("--out", scan_out, "Scan CSV (stdout if omitted)");
  scan->add_option("--svg", scan_svg, "Plot of the curve");

  BenchFlags bf;
  auto* bench = app.add_subcommand("benchmark", "Simulation study over seeded replicates");
  bench->add_option("--spec", bf.spec_file, "Scenario spec JSON");
  bench->add_option("--preset", bf.preset, "comparison or white-noise (ignored with --spec)");
  bench->add_option("--replicates", bf.replicates, "Replicates per scenario");
  bench->add_option("--p-max", bf.p_max, "Largest order in the DIC scans");
  bench->add_option("--k-max", bf.k_max, "Largest Bernstein polynomial degree");
  bench->add_option("--seed", bf.seed, "Master seed");
  bench->add_option("--workers", bf.workers, "Worker threads (0: all cores)");
  bench->add_option("--out-dir", bf.out_dir, "Output directory");
  bench->add_flag("--full-scale", bf.full_scale, "Full chain lengths and 1024 replicates");
  bench->add_flag("--timing", bf.timing, "Record wall time in provenance.json");
  bench->add_flag("--quiet", bf.quiet, "No progress output");

  std::string plot_data, plot_summary, plot_out, plot_bands = "uniform";
  double plot_rate = 0.0;
  auto* plot = app.add_subcommand("plot", "SVG of the periodogram and posterior spectral density");
  plot->add_option("--data", plot_data, "Input CSV used for the fit")->required();
  plot->add_option("--summary", plot_summary, "Summary JSON from fit")->required();
  plot->add_option("--bands", plot_bands, "uniform, pointwise or none");
  plot->add_option("--sample-rate", plot_rate, "Sampling rate; puts the axis in Hz");
  plot->add_option("--out", plot_out, "Output SVG (stdout if omitted)");

  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }

  try {
    if (*sim) return cmd_simulate(sim_ar, sim_ma, sim_n, sim_seed, sim_out);
    if (*fit) return cmd_fit(ff);
    if (*scan) return cmd_order_scan(scan_data, scan_center, scan_diff, scan_pmax, scan_iter, scan_burn, scan_seed,
                                     scan_out, scan_svg);
    if (*bench) return cmd_benchmark(bf);
    if (*plot) return cmd_plot(plot_data, plot_summary, plot_bands, plot_rate, plot_out);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_config;
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_config;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_config;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_io;
  } catch (const NumericFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return exit_numeric;
  }
  return exit_config;
}

}  // namespace npcspec::tools
