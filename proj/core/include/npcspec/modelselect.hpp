#pragma once

#include <cstddef>
#include <vector>

#include "npcspec/fourier.hpp"
#include "npcspec/mcmc.hpp"

namespace npcspec {

/// -ar_log_likelihood(ts, yule_walker_fit(ts, p)) for p = 0..p_max.
std::vector<double> neg_loglik_curve(const TimeSeries& ts, std::size_t p_max);

/// drop(p-1 -> p) / drop(p -> p+1) for p = 1..size-2, where drop(a -> b) =
/// curve[a] - curve[b]. Entry i belongs to p = i + 1; a zero denominator
/// gives +infinity.
std::vector<double> elbow_ratios(const std::vector<double>& curve);

struct DicResult {
  double dic = 0.0;
  double mean_deviance = 0.0;  // D-bar
  double p_d = 0.0;
  double plugin_deviance = 0.0;  // D(theta-bar)
};

/// Deviance information criterion D-bar + p_D of an AR chain, with
/// D = -2 log-likelihood and the plug-in at the posterior means of (rho, sigma2).
DicResult dic(const ChainOutput& chain, const TimeSeries& ts);

struct OrderScan {
  std::vector<std::size_t> orders;
  std::vector<double> neg_loglik;
  std::vector<double> dic;
  std::vector<std::size_t> dic_rank;  // 1 = smallest DIC
  std::vector<double> bic;            // D(Yule-Walker fit) + p log n
  std::size_t selected_dic = 0;
};

/// AR fits for p = 0..p_max. The chain for order p is seeded with
/// derive_seed(mcmc.seed, {p}).
OrderScan select_order(const TimeSeries& ts, std::size_t p_max, const McmcConfig& mcmc,
                       const ArPriorConfig& prior = {});

}  // namespace npcspec
