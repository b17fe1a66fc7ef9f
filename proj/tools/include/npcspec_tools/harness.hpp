#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "npcspec/armodels.hpp"
#include "npcspec/mcmc.hpp"

namespace npcspec::tools {

struct Scenario {
  std::string name;
  ArmaSpec model;
  std::size_t n = 128;
  std::vector<std::string> methods{"ar", "np", "npc"};
  std::optional<std::size_t> order;  // empty: DIC-selected per replicate
};

struct BenchmarkSpec {
  std::uint64_t master_seed = 1;
  std::size_t replicates = 64;
  bool full_scale = false;  // full run lengths instead of 4x shorter chains
  std::size_t p_max = 10;
  double alpha = 0.1;  // uniform band miscoverage
  std::size_t k_max = 500;
  std::vector<Scenario> scenarios;

  McmcConfig npc_mcmc() const;
  McmcConfig ar_mcmc() const;
  void validate() const;

  /// AR(1) a=0.95, MA(1) b=0.8 (AR/NP/NPC with DIC order) and ARMA(1,1)
  /// a=0.75, b=0.8 with the order fixed at 1, all at n=128.
  static BenchmarkSpec comparison();
  static BenchmarkSpec white_noise();
};

BenchmarkSpec spec_from_json(const nlohmann::json& j);
nlohmann::json spec_to_json(const BenchmarkSpec& spec);

struct MethodResult {
  std::string method;
  std::size_t order = 0;
  double iae = 0.0;
  bool covered = false;
  double eta_mean = 0.0;
  std::vector<double> rho_acceptance;
};

struct ReplicateResult {
  std::size_t scenario = 0;
  std::size_t replicate = 0;
  std::uint64_t seed = 0;
  bool failed = false;
  std::string error;
  std::optional<std::size_t> dic_order;
  std::vector<MethodResult> methods;
  double wall_seconds = 0.0;
};

struct MethodSummary {
  std::string scenario;
  std::string method;
  std::size_t ok = 0;
  double aiae_mean = 0.0;
  double aiae_median = 0.0;
  double cuci = 0.0;
  double eta_hat = 0.0;
  double order_median = 0.0;
};

struct BenchmarkResult {
  BenchmarkSpec spec;
  std::vector<ReplicateResult> replicates;  // scenario-major, replicate-minor
  std::vector<MethodSummary> summary;
  std::size_t failed = 0;
  double wall_seconds = 0.0;

  const MethodSummary* find(const std::string& scenario, const std::string& method) const;
};

/// Seed of replicate r of a scenario: derived from the master seed, a pinned
/// hash of the scenario name and r.
std::uint64_t replicate_seed(std::uint64_t master, const std::string& scenario, std::size_t replicate);

/// FNV-1a 64-bit.
std::uint64_t name_hash(const std::string& s);

/// One replicate: simulate, optional order scan, fit every method, score.
ReplicateResult run_replicate(const BenchmarkSpec& spec, std::size_t scenario, std::size_t replicate);

using ProgressFn = std::function<void(const ReplicateResult&, std::size_t done, std::size_t total)>;

/// Runs all replicates on a pool of `workers` threads (0: hardware
/// concurrency). Aggregation happens after all workers have joined, so the
/// result does not depend on execution order.
BenchmarkResult run_benchmark(const BenchmarkSpec& spec, std::size_t workers, const ProgressFn& progress = {});

std::vector<MethodSummary> summarize(const BenchmarkSpec& spec, const std::vector<ReplicateResult>& reps);

std::string summary_csv(const BenchmarkResult& result);
std::string replicates_csv(const BenchmarkResult& result);
/// Spec echo, seeds and counts; wall time only when `timing` is set.
nlohmann::json provenance_json(const BenchmarkResult& result, bool timing);

}  // namespace npcspec::tools
