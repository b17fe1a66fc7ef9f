#include "npcspec/armodels.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "npcspec/error.hpp"
#include "npcspec/rng.hpp"

namespace npcspec {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kLogTwoPi = 1.8378770664093454836;

std::complex<double> lag_polynomial(std::span<const double> coef, double lambda, double sign) {
  // 1 + sign * sum_l coef_l exp(-i l lambda)
  std::complex<double> acc(1.0, 0.0);
  for (std::size_t l = 0; l < coef.size(); ++l) {
    const double angle = -static_cast<double>(l + 1) * lambda;
    acc += sign * coef[l] * std::complex<double>(std::cos(angle), std::sin(angle));
  }
  return acc;
}

}  // namespace

PacfVector::PacfVector(std::vector<double> rho) : rho_(std::move(rho)) {
  for (double r : rho_) {
    if (!(std::abs(r) < 1.0)) throw InvalidInput("partial autocorrelations must lie in (-1, 1)");
  }
}

ArModel::ArModel() = default;

ArModel::ArModel(PacfVector pacf, double sigma2)
    : pacf_(std::move(pacf)), coeffs_(pacf_to_ar(pacf_)), sigma2_(sigma2) {
  if (!(sigma2_ > 0.0) || !std::isfinite(sigma2_)) throw InvalidInput("innovation variance must be positive");
}

ArModel ArModel::from_coefficients(const ArCoefficients& coeffs, double sigma2) {
  return ArModel(ar_to_pacf(coeffs), sigma2);
}

std::vector<std::vector<double>> levinson_rows(std::span<const double> rho) {
  std::vector<std::vector<double>> rows(rho.size() + 1);
  for (std::size_t k = 1; k <= rho.size(); ++k) {
    const auto& prev = rows[k - 1];
    auto& cur = rows[k];
    cur.resize(k);
    const double r = rho[k - 1];
    for (std::size_t l = 1; l < k; ++l) {
      cur[l - 1] = 2 * l == k ? prev[l - 1] * (1.0 - r) : prev[l - 1] - r * prev[k - l - 1];
    }
    cur[k - 1] = r;
  }
  return rows;
}

ArCoefficients pacf_to_ar(const PacfVector& rho) {
  auto rows = levinson_rows(rho.values());
  return ArCoefficients{std::move(rows.back())};
}

PacfVector ar_to_pacf(const ArCoefficients& coeffs) {
  const std::size_t p = coeffs.size();
  std::vector<double> phi = coeffs.a;
  std::vector<double> rho(p);
  for (std::size_t k = p; k >= 1; --k) {
    const double r = phi[k - 1];
    if (!(std::abs(r) < 1.0)) throw InvalidInput("AR coefficients are not causal");
    rho[k - 1] = r;
    const double denom = 1.0 - r * r;
    std::vector<double> prev(k - 1);
    for (std::size_t l = 1; l < k; ++l) {
      prev[l - 1] = 2 * l == k ? phi[l - 1] / (1.0 - r) : (phi[l - 1] + r * phi[k - l - 1]) / denom;
    }
    phi = std::move(prev);
  }
  return PacfVector(std::move(rho));
}

bool is_causal(std::span<const double> a) {
  try {
    ar_to_pacf(ArCoefficients{std::vector<double>(a.begin(), a.end())});
    return true;
  } catch (const InvalidInput&) {
    return false;
  }
}

double ar_spectral_density(const ArModel& model, double lambda) {
  const auto phi = lag_polynomial(model.coeffs().a, lambda, -1.0);
  return model.sigma2() / (kTwoPi * std::norm(phi));
}

std::vector<double> ar_spectral_density(const ArModel& model, const FrequencyGrid& grid) {
  std::vector<double> out(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) out[j] = ar_spectral_density(model, grid.freqs[j]);
  return out;
}

double arma_spectral_density(const ArmaSpec& spec, double lambda, double sigma2) {
  const auto phi = lag_polynomial(spec.ar, lambda, -1.0);
  const auto theta = lag_polynomial(spec.ma, lambda, 1.0);
  return sigma2 * std::norm(theta) / (kTwoPi * std::norm(phi));
}

std::vector<double> arma_spectral_density(const ArmaSpec& spec, const FrequencyGrid& grid, double sigma2) {
  std::vector<double> out(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) out[j] = arma_spectral_density(spec, grid.freqs[j], sigma2);
  return out;
}

std::vector<double> ar_autocovariance(const ArModel& model, std::size_t max_lag) {
  const std::size_t p = model.p();
  const auto& a = model.coeffs().a;
  // gamma(h) - sum_l a_l gamma(|h - l|) = sigma2 [h == 0], h = 0..p
  Eigen::MatrixXd system = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(p + 1), static_cast<Eigen::Index>(p + 1));
  for (std::size_t h = 0; h <= p; ++h) {
    for (std::size_t l = 1; l <= p; ++l) {
      const std::size_t lag = h > l ? h - l : l - h;
      system(static_cast<Eigen::Index>(h), static_cast<Eigen::Index>(lag)) -= a[l - 1];
    }
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p + 1));
  rhs(0) = model.sigma2();
  const Eigen::VectorXd head = system.fullPivLu().solve(rhs);

  std::vector<double> gamma(std::max(max_lag, p) + 1);
  for (std::size_t h = 0; h <= p; ++h) gamma[h] = head(static_cast<Eigen::Index>(h));
  for (std::size_t h = p + 1; h < gamma.size(); ++h) {
    double acc = 0.0;
    for (std::size_t l = 1; l <= p; ++l) acc += a[l - 1] * gamma[h - l];
    gamma[h] = acc;
  }
  gamma.resize(max_lag + 1);
  return gamma;
}

GaussianLogLik ar_log_likelihood_parts(std::span<const double> z, const ArModel& model) {
  const std::size_t n = z.size();
  const std::size_t p = model.p();
  if (n <= p) throw InvalidInput("series must be longer than the AR order");

  const auto rho = model.pacf().values();
  const auto rows = levinson_rows(rho);

  // Prediction-error variances v_m = gamma(0) prod_{k<=m} (1 - rho_k^2),
  // with v_p = sigma2.
  std::vector<double> v(p + 1);
  v[p] = model.sigma2();
  for (std::size_t m = p; m >= 1; --m) v[m - 1] = v[m] / (1.0 - rho[m - 1] * rho[m - 1]);

  GaussianLogLik out;
  double log_v_sum = 0.0;
  for (std::size_t t = 0; t < p; ++t) {
    const auto& phi = rows[t];
    double pred = 0.0;
    for (std::size_t l = 1; l <= t; ++l) pred += phi[l - 1] * z[t - l];
    const double e = z[t] - pred;
    out.quad += e * e / v[t];
    log_v_sum += std::log(v[t]);
  }
  const auto& a = model.coeffs().a;
  double tail = 0.0;
  for (std::size_t t = p; t < n; ++t) {
    double pred = 0.0;
    for (std::size_t l = 1; l <= p; ++l) pred += a[l - 1] * z[t - l];
    const double e = z[t] - pred;
    tail += e * e;
  }
  out.quad += tail / v[p];
  log_v_sum += static_cast<double>(n - p) * std::log(v[p]);
  out.log_norm = -0.5 * (static_cast<double>(n) * kLogTwoPi + log_v_sum);
  return out;
}

std::vector<double> sample_autocovariance(std::span<const double> z, std::size_t max_lag) {
  const std::size_t n = z.size();
  if (max_lag >= n) throw InvalidInput("autocovariance lag must be smaller than the series length");
  double mean = 0.0;
  for (double v : z) mean += v;
  mean /= static_cast<double>(n);
  std::vector<double> gamma(max_lag + 1, 0.0);
  for (std::size_t h = 0; h <= max_lag; ++h) {
    double acc = 0.0;
    for (std::size_t t = h; t < n; ++t) acc += (z[t] - mean) * (z[t - h] - mean);
    gamma[h] = acc / static_cast<double>(n);
  }
  return gamma;
}

ArModel yule_walker_fit(const TimeSeries& ts, std::size_t p) {
  if (p >= ts.size()) throw InvalidInput("Yule-Walker order must be smaller than the series length");
  const auto gamma = sample_autocovariance(ts.values(), p);
  if (!(gamma[0] > 0.0)) throw InvalidInput("Yule-Walker fit of a constant series");

  // Durbin-Levinson on the sample autocovariances.
  std::vector<double> rho(p);
  std::vector<double> phi;
  double v = gamma[0];
  for (std::size_t k = 1; k <= p; ++k) {
    double num = gamma[k];
    for (std::size_t l = 1; l < k; ++l) num -= phi[l - 1] * gamma[k - l];
    const double r = num / v;
    if (!(std::abs(r) < 1.0)) throw InvalidInput("Yule-Walker fit is degenerate (|pacf| >= 1)");
    std::vector<double> next(k);
    for (std::size_t l = 1; l < k; ++l) next[l - 1] = phi[l - 1] - r * phi[k - l - 1];
    next[k - 1] = r;
    phi = std::move(next);
    rho[k - 1] = r;
    v *= (1.0 - r * r);
  }
  // v equals gamma(0) - sum_l a_l gamma(l).
  return ArModel(PacfVector(std::move(rho)), v);
}

std::vector<double> simulate_arma(const ArmaSpec& spec, std::size_t n, Rng& rng) {
  if (n < 4) throw InvalidInput("series length must be at least 4");
  if (!is_causal(spec.ar)) throw InvalidInput("AR part of the ARMA specification is not causal");
  const std::size_t p = spec.ar.size();
  const std::size_t q = spec.ma.size();
  const std::size_t burn = std::max<std::size_t>(1000, 10 * (p + q));
  const std::size_t total = burn + n;

  std::vector<double> z(total, 0.0);
  std::vector<double> e(total, 0.0);
  for (std::size_t t = 0; t < total; ++t) {
    e[t] = rng.normal();
    double acc = e[t];
    for (std::size_t i = 1; i <= p && i <= t; ++i) acc += spec.ar[i - 1] * z[t - i];
    for (std::size_t j = 1; j <= q && j <= t; ++j) acc += spec.ma[j - 1] * e[t - j];
    z[t] = acc;
  }
  return std::vector<double>(z.begin() + static_cast<std::ptrdiff_t>(burn), z.end());
}

TimeSeries simulate_arma(const ArmaSpec& spec, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  return TimeSeries(simulate_arma(spec, n, rng));
}

std::vector<double> simulate_ar_exact(const ArModel& model, std::size_t n, Rng& rng) {
  const std::size_t p = model.p();
  if (n <= p) throw InvalidInput("series must be longer than the AR order");
  std::vector<double> z(n, 0.0);
  if (p > 0) {
    const auto gamma = ar_autocovariance(model, p - 1);
    Eigen::MatrixXd cov(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = 0; j < p; ++j) {
        cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = gamma[i > j ? i - j : j - i];
      }
    }
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success) throw NumericFailure("AR autocovariance matrix is not positive definite");
    Eigen::VectorXd normals(static_cast<Eigen::Index>(p));
    for (std::size_t i = 0; i < p; ++i) normals(static_cast<Eigen::Index>(i)) = rng.normal();
    const Eigen::VectorXd head = llt.matrixL() * normals;
    for (std::size_t i = 0; i < p; ++i) z[i] = head(static_cast<Eigen::Index>(i));
  }
  const auto& a = model.coeffs().a;
  const double sd = std::sqrt(model.sigma2());
  for (std::size_t t = p; t < n; ++t) {
    double acc = sd * rng.normal();
    for (std::size_t l = 1; l <= p; ++l) acc += a[l - 1] * z[t - l];
    z[t] = acc;
  }
  return z;
}

}  // namespace npcspec
