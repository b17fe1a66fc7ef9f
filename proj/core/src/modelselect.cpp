#include "npcspec/modelselect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "npcspec/error.hpp"

namespace npcspec {

std::vector<double> neg_loglik_curve(const TimeSeries& ts, std::size_t p_max) {
  if (p_max >= ts.size()) throw InvalidInput("maximal order must be smaller than the series length");
  std::vector<double> out(p_max + 1);
  for (std::size_t p = 0; p <= p_max; ++p) out[p] = -ar_log_likelihood(ts, yule_walker_fit(ts, p));
  return out;
}

std::vector<double> elbow_ratios(const std::vector<double>& curve) {
  std::vector<double> out;
  for (std::size_t p = 1; p + 1 < curve.size(); ++p) {
    const double before = curve[p - 1] - curve[p];
    const double after = curve[p] - curve[p + 1];
    out.push_back(after == 0.0 ? std::numeric_limits<double>::infinity() : before / after);
  }
  return out;
}

DicResult dic(const ChainOutput& chain, const TimeSeries& ts) {
  if (chain.traces.empty()) throw InvalidInput("DIC of an empty chain");
  const std::size_t p = chain.order;
  std::vector<double> rho_mean(p, 0.0);
  double sigma2_mean = 0.0;
  double dev_sum = 0.0;
  for (const auto& t : chain.traces) {
    if (t.rho.size() != p) throw InvalidInput("trace does not match the chain order");
    for (std::size_t l = 0; l < p; ++l) rho_mean[l] += t.rho[l];
    sigma2_mean += t.sigma2;
    dev_sum += -2.0 * ar_log_likelihood(ts, ArModel(PacfVector(t.rho), t.sigma2));
  }
  const double count = static_cast<double>(chain.traces.size());
  for (auto& r : rho_mean) r /= count;
  sigma2_mean /= count;

  DicResult out;
  out.mean_deviance = dev_sum / count;
  out.plugin_deviance = -2.0 * ar_log_likelihood(ts, ArModel(PacfVector(rho_mean), sigma2_mean));
  out.p_d = out.mean_deviance - out.plugin_deviance;
  out.dic = out.mean_deviance + out.p_d;
  return out;
}

OrderScan select_order(const TimeSeries& ts, std::size_t p_max, const McmcConfig& mcmc,
                       const ArPriorConfig& prior) {
  OrderScan scan;
  scan.neg_loglik = neg_loglik_curve(ts, p_max);
  const double log_n = std::log(static_cast<double>(ts.size()));
  for (std::size_t p = 0; p <= p_max; ++p) {
    McmcConfig cfg = mcmc;
    cfg.seed = derive_seed(mcmc.seed, {p});
    const auto chain = run_ar(ts, p, prior, cfg);
    scan.orders.push_back(p);
    scan.dic.push_back(dic(chain, ts).dic);
    scan.bic.push_back(2.0 * scan.neg_loglik[p] + static_cast<double>(p) * log_n);
  }
  std::vector<std::size_t> idx(scan.orders.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return scan.dic[a] < scan.dic[b]; });
  scan.dic_rank.assign(idx.size(), 0);
  for (std::size_t r = 0; r < idx.size(); ++r) scan.dic_rank[idx[r]] = r + 1;
  scan.selected_dic = scan.orders[idx.front()];
  return scan;
}

}  // namespace npcspec
