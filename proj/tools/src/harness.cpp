#include "npcspec_tools/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <mutex>
#include <set>
#include <thread>

#include "npcspec/error.hpp"
#include "npcspec/modelselect.hpp"
#include "npcspec/postprocess.hpp"
#include "npcspec/rng.hpp"
#include "npcspec_tools/errors.hpp"
#include "npcspec_tools/format.hpp"

namespace npcspec::tools {

using nlohmann::json;

McmcConfig BenchmarkSpec::npc_mcmc() const {
  McmcConfig c = McmcConfig::npc_defaults();
  if (!full_scale) {
    c.iterations /= 4;
    c.burn_in /= 4;
  }
  return c;
}

McmcConfig BenchmarkSpec::ar_mcmc() const {
  McmcConfig c = McmcConfig::ar_defaults();
  if (!full_scale) {
    c.iterations /= 4;
    c.burn_in /= 4;
  }
  return c;
}

void BenchmarkSpec::validate() const {
  if (replicates < 1) throw ConfigError("replicates must be at least 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  if (k_max < 1) throw ConfigError("k_max must be at least 1");
  if (scenarios.empty()) throw ConfigError("no scenarios");
  std::set<std::string> names;
  for (const auto& s : scenarios) {
    if (s.name.empty()) throw ConfigError("scenario without a name");
    if (!names.insert(s.name).second) throw ConfigError("duplicate scenario name " + s.name);
    if (s.n < 4) throw ConfigError("scenario " + s.name + ": n must be at least 4");
    if (s.methods.empty()) throw ConfigError("scenario " + s.name + ": no methods");
    for (const auto& m : s.methods) {
      if (m != "ar" && m != "np" && m != "npc") throw ConfigError("scenario " + s.name + ": unknown method " + m);
    }
    const std::size_t p = s.order.value_or(p_max);
    if (p >= s.n / 2) throw ConfigError("scenario " + s.name + ": order too large for n");
  }
}

BenchmarkSpec BenchmarkSpec::comparison() {
  BenchmarkSpec spec;
  spec.scenarios = {
      {"ar1", ArmaSpec{{0.95}, {}}, 128, {"ar", "np", "npc"}, std::nullopt},
      {"ma1", ArmaSpec{{}, {0.8}}, 128, {"ar", "np", "npc"}, std::nullopt},
      {"arma11_p1", ArmaSpec{{0.75}, {0.8}}, 128, {"ar", "npc"}, 1},
  };
  return spec;
}

BenchmarkSpec BenchmarkSpec::white_noise() {
  BenchmarkSpec spec;
  spec.scenarios = {{"white_noise", ArmaSpec{}, 128, {"np"}, std::nullopt}};
  return spec;
}

namespace {

const std::set<std::string> kSpecKeys{"master_seed", "replicates", "full_scale", "p_max", "alpha", "k_max", "scenarios"};
const std::set<std::string> kScenarioKeys{"name", "ar", "ma", "n", "methods", "order"};

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

}  // namespace

BenchmarkSpec spec_from_json(const json& j) {
  reject_unknown(j, kSpecKeys, "benchmark spec");
  BenchmarkSpec spec;
  spec.master_seed = get_or<std::uint64_t>(j, "master_seed", spec.master_seed);
  spec.replicates = get_or<std::size_t>(j, "replicates", spec.replicates);
  spec.full_scale = get_or<bool>(j, "full_scale", spec.full_scale);
  spec.p_max = get_or<std::size_t>(j, "p_max", spec.p_max);
  spec.alpha = get_or<double>(j, "alpha", spec.alpha);
  spec.k_max = get_or<std::size_t>(j, "k_max", spec.k_max);
  if (!j.contains("scenarios") || !j["scenarios"].is_array()) throw ConfigError("benchmark spec needs a scenarios array");
  for (const auto& s : j["scenarios"]) {
    reject_unknown(s, kScenarioKeys, "scenario");
    Scenario sc;
    sc.name = get_or<std::string>(s, "name", "");
    sc.model.ar = get_or<std::vector<double>>(s, "ar", {});
    sc.model.ma = get_or<std::vector<double>>(s, "ma", {});
    sc.n = get_or<std::size_t>(s, "n", sc.n);
    sc.methods = get_or<std::vector<std::string>>(s, "methods", sc.methods);
    if (s.contains("order")) {
      const auto& o = s["order"];
      if (o.is_string() && o.get<std::string>() == "dic") {
        sc.order.reset();
      } else if (o.is_number_unsigned()) {
        sc.order = o.get<std::size_t>();
      } else {
        throw ConfigError("scenario order must be a nonnegative integer or \"dic\"");
      }
    }
    spec.scenarios.push_back(std::move(sc));
  }
  spec.validate();
  return spec;
}

json spec_to_json(const BenchmarkSpec& spec) {
  json j;
  j["master_seed"] = spec.master_seed;
  j["replicates"] = spec.replicates;
  j["full_scale"] = spec.full_scale;
  j["p_max"] = spec.p_max;
  j["alpha"] = spec.alpha;
  j["k_max"] = spec.k_max;
  j["scenarios"] = json::array();
  for (const auto& s : spec.scenarios) {
    json o;
    o["name"] = s.name;
    o["ar"] = s.model.ar;
    o["ma"] = s.model.ma;
    o["n"] = s.n;
    o["methods"] = s.methods;
    if (s.order) {
      o["order"] = *s.order;
    } else {
      o["order"] = "dic";
    }
    j["scenarios"].push_back(o);
  }
  return j;
}

std::uint64_t name_hash(const std::string& s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t replicate_seed(std::uint64_t master, const std::string& scenario, std::size_t replicate) {
  return derive_seed(master, {name_hash(scenario), static_cast<std::uint64_t>(replicate)});
}

namespace {

MethodResult score(const ChainOutput& chain, const std::vector<double>& truth, double alpha) {
  MethodResult r;
  r.method = chain.method;
  r.order = chain.order;
  const auto& grid = chain.psd.grid();
  const auto med = posterior_median_psd(chain.psd);
  r.iae = integrated_absolute_error(med, truth, grid);
  const auto band = uniform_credible_band(interior_columns(chain.psd), alpha);
  r.covered = band_covers(band, interior_values(truth, grid.n));
  r.eta_mean = chain.mean_eta();
  r.rho_acceptance = chain.rho_acceptance;
  return r;
}

}  // namespace

ReplicateResult run_replicate(const BenchmarkSpec& spec, std::size_t scenario, std::size_t replicate) {
  const auto start = std::chrono::steady_clock::now();
  const Scenario& sc = spec.scenarios.at(scenario);
  ReplicateResult out;
  out.scenario = scenario;
  out.replicate = replicate;
  out.seed = replicate_seed(spec.master_seed, sc.name, replicate);
  try {
    const auto ts = simulate_arma(sc.model, sc.n, derive_seed(out.seed, {0}));
    const auto grid = fourier_frequencies(sc.n);
    const auto truth = arma_spectral_density(sc.model, grid);

    McmcConfig ar_cfg = spec.ar_mcmc();
    ar_cfg.seed = derive_seed(out.seed, {1});
    std::size_t order = sc.order.value_or(0);
    const bool needs_order = std::any_of(sc.methods.begin(), sc.methods.end(),
                                         [](const std::string& m) { return m != "np"; });
    if (!sc.order && needs_order) {
      order = select_order(ts, spec.p_max, ar_cfg).selected_dic;
      out.dic_order = order;
    }

    auto prior = BernsteinDirichletConfig::for_length(sc.n);
    prior.k_max = spec.k_max;
    for (const auto& m : sc.methods) {
      if (m == "ar") {
        McmcConfig c = ar_cfg;
        c.seed = derive_seed(ar_cfg.seed, {order});
        out.methods.push_back(score(run_ar(ts, order, {}, c), truth, spec.alpha));
      } else {
        McmcConfig c = spec.npc_mcmc();
        const std::size_t p = m == "np" ? 0 : order;
        c.seed = derive_seed(out.seed, {m == "np" ? 2u : 3u});
        auto r = score(run_npc(ts, p, prior, c), truth, spec.alpha);
        r.method = m;
        out.methods.push_back(std::move(r));
      }
    }
  } catch (const std::exception& e) {
    out.failed = true;
    out.error = e.what();
    out.methods.clear();
  }
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

std::vector<MethodSummary> summarize(const BenchmarkSpec& spec, const std::vector<ReplicateResult>& reps) {
  std::vector<MethodSummary> out;
  for (std::size_t s = 0; s < spec.scenarios.size(); ++s) {
    const auto& sc = spec.scenarios[s];
    for (const auto& m : sc.methods) {
      MethodSummary sum;
      sum.scenario = sc.name;
      sum.method = m;
      std::vector<double> iae, orders;
      double covered = 0.0, eta = 0.0;
      for (const auto& r : reps) {
        if (r.scenario != s || r.failed) continue;
        for (const auto& mr : r.methods) {
          if (mr.method != m) continue;
          iae.push_back(mr.iae);
          orders.push_back(static_cast<double>(mr.order));
          covered += mr.covered ? 1.0 : 0.0;
          eta += mr.eta_mean;
        }
      }
      sum.ok = iae.size();
      if (!iae.empty()) {
        const double cnt = static_cast<double>(iae.size());
        double total = 0.0;
        for (double v : iae) total += v;
        sum.aiae_mean = total / cnt;
        sum.aiae_median = median(iae);
        sum.cuci = covered / cnt;
        sum.eta_hat = eta / cnt;
        sum.order_median = median(orders);
      }
      out.push_back(sum);
    }
  }
  return out;
}

BenchmarkResult run_benchmark(const BenchmarkSpec& spec, std::size_t workers, const ProgressFn& progress) {
  spec.validate();
  const auto start = std::chrono::steady_clock::now();
  const std::size_t total = spec.scenarios.size() * spec.replicates;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, total);

  BenchmarkResult result;
  result.spec = spec;
  result.replicates.resize(total);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= total) return;
      result.replicates[i] = run_replicate(spec, i / spec.replicates, i % spec.replicates);
      const std::size_t d = done.fetch_add(1) + 1;
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(result.replicates[i], d, total);
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  for (const auto& r : result.replicates) result.failed += r.failed ? 1 : 0;
  result.summary = summarize(spec, result.replicates);
  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

const MethodSummary* BenchmarkResult::find(const std::string& scenario, const std::string& method) const {
  for (const auto& s : summary) {
    if (s.scenario == scenario && s.method == method) return &s;
  }
  return nullptr;
}

std::string summary_csv(const BenchmarkResult& result) {
  std::string out = csv_row({"scenario", "method", "n", "replicates", "ok", "order_median", "aiae_mean", "aiae_median",
                             "cuci", "eta_hat"});
  for (const auto& s : result.summary) {
    std::size_t n = 0;
    for (const auto& sc : result.spec.scenarios) {
      if (sc.name == s.scenario) n = sc.n;
    }
    out += csv_row({s.scenario, s.method, std::to_string(n), std::to_string(result.spec.replicates),
                    std::to_string(s.ok), format_double(s.order_median), format_double(s.aiae_mean),
                    format_double(s.aiae_median), format_double(s.cuci), format_double(s.eta_hat)});
  }
  return out;
}

std::string replicates_csv(const BenchmarkResult& result) {
  std::string out = csv_row({"scenario", "replicate", "seed", "method", "order", "iae", "covered", "eta_mean", "error"});
  for (const auto& r : result.replicates) {
    const auto& name = result.spec.scenarios[r.scenario].name;
    if (r.failed) {
      std::string msg = r.error;
      std::replace(msg.begin(), msg.end(), ',', ';');
      std::replace(msg.begin(), msg.end(), '\n', ' ');
      out += csv_row({name, std::to_string(r.replicate), std::to_string(r.seed), "", "", "", "", "", msg});
      continue;
    }
    for (const auto& m : r.methods) {
      out += csv_row({name, std::to_string(r.replicate), std::to_string(r.seed), m.method, std::to_string(m.order),
                      format_double(m.iae), m.covered ? "1" : "0", format_double(m.eta_mean), ""});
    }
  }
  return out;
}

json provenance_json(const BenchmarkResult& result, bool timing) {
  json j;
  j["spec"] = spec_to_json(result.spec);
  const auto npc = result.spec.npc_mcmc();
  const auto ar = result.spec.ar_mcmc();
  j["run_lengths"] = {{"npc", {{"iterations", npc.iterations}, {"burn_in", npc.burn_in}, {"thin", npc.thin}}},
                      {"ar", {{"iterations", ar.iterations}, {"burn_in", ar.burn_in}, {"thin", ar.thin}}}};
  j["seed_rule"] = "replicate seed = derive_seed(master_seed, {fnv1a64(scenario name), replicate index})";
  j["replicates_total"] = result.replicates.size();
  j["replicates_failed"] = result.failed;
  json summary = json::array();
  for (const auto& s : result.summary) {
    summary.push_back({{"scenario", s.scenario},
                       {"method", s.method},
                       {"ok", s.ok},
                       {"order_median", s.order_median},
                       {"aiae_mean", s.aiae_mean},
                       {"aiae_median", s.aiae_median},
                       {"cuci", s.cuci},
                       {"eta_hat", s.eta_hat}});
  }
  j["summary"] = summary;
  if (timing) j["wall_seconds"] = result.wall_seconds;
  return j;
}

}  // namespace npcspec::tools
