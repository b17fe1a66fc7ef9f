#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "npcspec/fourier.hpp"

namespace npcspec {

class Rng;

/// Partial autocorrelations (rho_1..rho_p), each strictly inside (-1, 1).
class PacfVector {
 public:
  PacfVector() = default;
  explicit PacfVector(std::vector<double> rho);

  std::size_t size() const { return rho_.size(); }
  std::span<const double> values() const { return rho_; }
  double operator[](std::size_t i) const { return rho_[i]; }

 private:
  std::vector<double> rho_;
};

/// AR coefficients (a_1..a_p) of Z_t = sum_l a_l Z_{t-l} + e_t.
/// Construction does not check causality; see is_causal().
struct ArCoefficients {
  std::vector<double> a;
  std::size_t size() const { return a.size(); }
};

/// Causal AR(p) model. Immutable; the coefficients are derived from the
/// partial autocorrelations at construction and never go out of sync.
class ArModel {
 public:
  /// White noise with unit variance.
  ArModel();
  ArModel(PacfVector pacf, double sigma2);

  static ArModel from_coefficients(const ArCoefficients& coeffs, double sigma2);

  std::size_t p() const { return pacf_.size(); }
  const PacfVector& pacf() const { return pacf_; }
  const ArCoefficients& coeffs() const { return coeffs_; }
  double sigma2() const { return sigma2_; }

  ArModel with_sigma2(double sigma2) const { return ArModel(pacf_, sigma2); }

 private:
  PacfVector pacf_;
  ArCoefficients coeffs_;
  double sigma2_ = 1.0;
};

/// ARMA data generator: Z_t = sum a_i Z_{t-i} + sum b_j e_{t-j} + e_t.
struct ArmaSpec {
  std::vector<double> ar;
  std::vector<double> ma;
};

/// Levinson-type recursion phi_{k,k} = rho_k,
/// phi_{k,l} = phi_{k-1,l} - rho_k phi_{k-1,k-l}; returns a_l = phi_{p,l}.
ArCoefficients pacf_to_ar(const PacfVector& rho);

/// Every intermediate row phi_{k,.} for k = 0..p (row k has k entries).
std::vector<std::vector<double>> levinson_rows(std::span<const double> rho);

/// Inverse recursion. Throws InvalidInput when the coefficients are not causal.
PacfVector ar_to_pacf(const ArCoefficients& a);

/// True iff 1 - a_1 z - ... - a_p z^p has no root in the closed unit disc.
bool is_causal(std::span<const double> a);

/// (sigma2 / 2pi) |1 - sum_l a_l exp(-i l lambda)|^-2.
double ar_spectral_density(const ArModel& model, double lambda);
std::vector<double> ar_spectral_density(const ArModel& model, const FrequencyGrid& grid);

/// (sigma2 / 2pi) |1 + sum b_j e^{-i j lambda}|^2 / |1 - sum a_i e^{-i i lambda}|^2.
double arma_spectral_density(const ArmaSpec& spec, double lambda, double sigma2 = 1.0);
std::vector<double> arma_spectral_density(const ArmaSpec& spec, const FrequencyGrid& grid,
                                          double sigma2 = 1.0);

/// Stationary autocovariances gamma(0..max_lag): the (p+1)-dimensional
/// Yule-Walker system is solved for gamma(0..p) and extended by the AR
/// recursion.
std::vector<double> ar_autocovariance(const ArModel& model, std::size_t max_lag);

/// Gaussian log density split as log_norm - quad / 2.
struct GaussianLogLik {
  double log_norm = 0.0;
  double quad = 0.0;
  double value() const { return log_norm - 0.5 * quad; }
};

/// Exact Gaussian log-likelihood of z under the AR model, with all 2pi
/// constants. The first p observations enter through their stationary joint
/// density (evaluated by Durbin-Levinson prediction errors), the rest through
/// the conditional innovations.
GaussianLogLik ar_log_likelihood_parts(std::span<const double> z, const ArModel& model);

inline double ar_log_likelihood(std::span<const double> z, const ArModel& model) {
  return ar_log_likelihood_parts(z, model).value();
}
inline double ar_log_likelihood(const TimeSeries& ts, const ArModel& model) {
  return ar_log_likelihood_parts(ts.values(), model).value();
}

/// Mean-corrected sample autocovariances with denominator n.
std::vector<double> sample_autocovariance(std::span<const double> z, std::size_t max_lag);

/// Yule-Walker estimate of order p (solved by Durbin-Levinson).
/// Throws InvalidInput for a constant series or p >= n.
ArModel yule_walker_fit(const TimeSeries& ts, std::size_t p);

/// Simulated ARMA path with standard normal innovations after a burn-in of
/// max(1000, 10 (p + q)) values. Deterministic in the seed.
TimeSeries simulate_arma(const ArmaSpec& spec, std::size_t n, std::uint64_t seed);
std::vector<double> simulate_arma(const ArmaSpec& spec, std::size_t n, Rng& rng);

/// Exact stationary draw from the AR model: the first p values from the
/// Cholesky factor of their autocovariance matrix, then the recursion.
std::vector<double> simulate_ar_exact(const ArModel& model, std::size_t n, Rng& rng);

}  // namespace npcspec
