#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "npcspec/armodels.hpp"
#include "npcspec/fourier.hpp"

namespace npcspec {

enum class SpectralRole { true_psd, working_psd, correction, damped_correction };

/// One value per Fourier frequency j = 0..floor(n/2).
struct SpectralGridValues {
  std::vector<double> values;
  SpectralRole role = SpectralRole::true_psd;

  std::size_t size() const { return values.size(); }
};

/// Diagonal of C_n in the row order of F_n: lambda_0, the duplicated pairs
/// for lambda_1..lambda_N, then lambda_{n/2} for even n. Omitted endpoint
/// slots hold the pass-through value 1.
struct CorrectionDiagonal {
  std::vector<double> diag;
  bool omitted_endpoints = false;
};

/// Grid index j of the frequency that slot `slot` of F_n z belongs to.
constexpr std::size_t slot_frequency(std::size_t slot) { return (slot + 1) / 2; }

/// True for the lambda_0 slot and, for even n, the lambda_{n/2} slot.
constexpr bool is_endpoint_slot(std::size_t n, std::size_t slot) {
  return slot == 0 || (n % 2 == 0 && slot == n - 1);
}

/// Whether grid index j is an endpoint frequency (0, or n/2 for even n).
constexpr bool is_endpoint_frequency(std::size_t n, std::size_t j) {
  return j == 0 || (n % 2 == 0 && j == n / 2);
}

/// Number of diagonal entries that enter the likelihood.
constexpr std::size_t used_slot_count(std::size_t n, bool omit_endpoints) {
  if (!omit_endpoints) return n;
  return n % 2 == 0 ? n - 2 : n - 1;
}

CorrectionDiagonal build_correction_diagonal(const SpectralGridValues& c_vals, std::size_t n,
                                             bool omit_endpoints);

/// Whittle log-likelihood
///   -1/2 sum_{j=0}^{n-1} [log f(lambda_j) + I(lambda_j)/f(lambda_j)] - (n + n_used)/2 log(2 pi),
/// i.e. the exact Gaussian density of F_n z with covariance 2 pi diag(f),
/// omitted endpoint coefficients being treated as standard normal zeros.
/// n_used is the number of retained diagonal entries.
double whittle_log_likelihood(const Periodogram& pg, const SpectralGridValues& f_vals, bool omit_endpoints);

/// Total correction c_eta(lambda_j) f_param(lambda_j)^(eta - 1) per frequency.
/// Endpoint frequencies are set to 1 when omitted.
std::vector<double> total_correction(const ArModel& working, const SpectralGridValues& c_eta_vals, double eta,
                                     std::size_t n, bool omit_endpoints);

/// -1/2 log det C_n + log p_param(F_n^T C_n^{-1/2} F_n z) with
/// C_n = C_n(c_eta f_param^(eta - 1)).
double corrected_ar_log_likelihood(const TimeSeries& ts, const ArModel& working,
                                   const SpectralGridValues& c_eta_vals, double eta, bool omit_endpoints);

/// Same likelihood parametrized by the target spectral density f, i.e.
/// C_n = C_n(f / f_param).
double corrected_log_likelihood_for_target(const TimeSeries& ts, const ArModel& working,
                                           const SpectralGridValues& f_vals, bool omit_endpoints);

/// Exact draw from the corrected likelihood: Z from the working model, then
/// F_n^T C_n^{1/2} F_n Z with every diagonal slot (endpoints included) used.
TimeSeries sample_from_corrected(const ArModel& working, const SpectralGridValues& c_eta_vals, double eta,
                                 std::size_t n, std::uint64_t seed);

/// Repeated evaluation of the corrected likelihood for one fixed series.
///
/// F_n z is computed once. The AR quadratic form of the back-transformed
/// series is split into its circulant part, which is diagonal in the Fourier
/// basis, and a correction that involves only the first and last p values of
/// the series. Each call then costs O((p + 1) n) with no transform.
/// Not thread safe (owns scratch buffers).
class CorrectedLikelihood {
 public:
  struct Parts {
    double log_det = 0.0;  // sum of log C_n over used slots
    std::size_t n_used = 0;
    GaussianLogLik working;  // log p_param of the transformed series
    double value() const { return -0.5 * log_det + working.value(); }
  };

  CorrectedLikelihood(const TimeSeries& ts, bool omit_endpoints);

  std::size_t n() const { return n_; }
  bool omit_endpoints() const { return omit_; }
  const FrequencyGrid& grid() const { return grid_; }
  const std::vector<double>& coefficients() const { return coeffs_; }
  /// Periodogram of the data, from the cached coefficients.
  Periodogram periodogram() const;

  /// `correction` holds the total correction per grid frequency; values at
  /// omitted endpoints are ignored.
  Parts parts(std::span<const double> correction, const ArModel& working);
  double log_likelihood(std::span<const double> correction, const ArModel& working) {
    return parts(correction, working).value();
  }

  /// Same as parts() but always takes the inverse-transform route.
  /// Exposed so the fast route can be checked against it.
  Parts parts_general(std::span<const double> correction, const ArModel& working);

 private:
  void prepare_boundary(std::size_t p);
  void prepare_working(const ArModel& working);

  std::size_t n_;
  bool omit_;
  FrequencyGrid grid_;
  std::vector<double> coeffs_;
  std::vector<double> freq_sq_;    // squared coefficients summed per frequency
  std::vector<double> freq_mult_;  // used slots per frequency (0, 1 or 2)
  RealFourierTransform transform_;
  std::vector<double> scaled_;
  std::vector<double> series_;

  // Boundary rows: x_t = sum_j boundary_[b * G + j] / sqrt(C_j) for the
  // times t = 1..p and n-p+1..n.
  std::size_t boundary_p_ = 0;
  std::vector<double> boundary_;
  std::vector<double> inv_root_;
  std::vector<double> x_edge_;

  // Working model at unit innovation variance.
  std::vector<double> cached_pacf_;
  bool working_ready_ = false;
  std::vector<double> gain_;  // |1 - sum a_l exp(-i l lambda_j)|^2
  std::vector<std::vector<double>> levinson_;
  std::vector<double> pred_var_;  // prediction-error variances v_0..v_p
  double log_var_sum_ = 0.0;      // sum over t = 1..n of log v
};

}  // namespace npcspec
