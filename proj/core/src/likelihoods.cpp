#include "npcspec/likelihoods.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "npcspec/error.hpp"
#include "npcspec/rng.hpp"

namespace npcspec {

namespace {

constexpr double kLogTwoPi = 1.8378770664093454836;

void check_grid_length(const SpectralGridValues& vals, std::size_t n) {
  if (vals.size() != grid_size(n)) throw InvalidInput("spectral grid values have the wrong length");
}

void check_positive_where_used(std::span<const double> vals, std::size_t n, bool omit_endpoints) {
  for (std::size_t j = 0; j < vals.size(); ++j) {
    if (omit_endpoints && is_endpoint_frequency(n, j)) continue;
    if (!(vals[j] > 0.0) || !std::isfinite(vals[j])) {
      throw InvalidInput("spectral values must be positive and finite where used");
    }
  }
}

}  // namespace

CorrectionDiagonal build_correction_diagonal(const SpectralGridValues& c_vals, std::size_t n,
                                             bool omit_endpoints) {
  check_grid_length(c_vals, n);
  check_positive_where_used(c_vals.values, n, omit_endpoints);
  CorrectionDiagonal out;
  out.omitted_endpoints = omit_endpoints;
  out.diag.resize(n);
  for (std::size_t s = 0; s < n; ++s) {
    out.diag[s] = (omit_endpoints && is_endpoint_slot(n, s)) ? 1.0 : c_vals.values[slot_frequency(s)];
  }
  return out;
}

double whittle_log_likelihood(const Periodogram& pg, const SpectralGridValues& f_vals, bool omit_endpoints) {
  const std::size_t n = pg.n;
  if (pg.size() != grid_size(n)) throw InvalidInput("periodogram length does not match n");
  check_grid_length(f_vals, n);
  check_positive_where_used(f_vals.values, n, omit_endpoints);
  double acc = 0.0;
  for (std::size_t j = 0; j < pg.size(); ++j) {
    const bool endpoint = is_endpoint_frequency(n, j);
    if (omit_endpoints && endpoint) continue;
    const double mult = endpoint ? 1.0 : 2.0;
    const double f = f_vals.values[j];
    acc += mult * (std::log(f) + pg.ordinates[j] / f);
  }
  const double n_used = static_cast<double>(used_slot_count(n, omit_endpoints));
  return -0.5 * acc - 0.5 * (static_cast<double>(n) + n_used) * kLogTwoPi;
}

std::vector<double> total_correction(const ArModel& working, const SpectralGridValues& c_eta_vals, double eta,
                                     std::size_t n, bool omit_endpoints) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw InvalidInput("eta must lie in [0, 1]");
  check_grid_length(c_eta_vals, n);
  check_positive_where_used(c_eta_vals.values, n, omit_endpoints);
  const auto grid = fourier_frequencies(n);
  std::vector<double> out(grid.size(), 1.0);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (omit_endpoints && is_endpoint_frequency(n, j)) continue;
    const double fp = ar_spectral_density(working, grid.freqs[j]);
    out[j] = c_eta_vals.values[j] * std::pow(fp, eta - 1.0);
  }
  return out;
}

double corrected_ar_log_likelihood(const TimeSeries& ts, const ArModel& working,
                                   const SpectralGridValues& c_eta_vals, double eta, bool omit_endpoints) {
  if (ts.size() <= working.p()) throw InvalidInput("series must be longer than the working AR order");
  const auto corr = total_correction(working, c_eta_vals, eta, ts.size(), omit_endpoints);
  CorrectedLikelihood lik(ts, omit_endpoints);
  return lik.parts_general(corr, working).value();
}

double corrected_log_likelihood_for_target(const TimeSeries& ts, const ArModel& working,
                                           const SpectralGridValues& f_vals, bool omit_endpoints) {
  // c_eta = f / f_param with eta = 0 gives total correction f / f_param.
  return corrected_ar_log_likelihood(ts, working, f_vals, 0.0, omit_endpoints);
}

TimeSeries sample_from_corrected(const ArModel& working, const SpectralGridValues& c_eta_vals, double eta,
                                 std::size_t n, std::uint64_t seed) {
  const auto corr = total_correction(working, c_eta_vals, eta, n, false);
  Rng rng(seed);
  const auto z = simulate_ar_exact(working, n, rng);
  RealFourierTransform tr(n);
  std::vector<double> coeffs(n);
  tr.forward(z, coeffs);
  for (std::size_t s = 0; s < n; ++s) coeffs[s] *= std::sqrt(corr[slot_frequency(s)]);
  std::vector<double> out(n);
  tr.inverse(coeffs, out);
  return TimeSeries(std::move(out));
}

// ---------------------------------------------------------------------------

CorrectedLikelihood::CorrectedLikelihood(const TimeSeries& ts, bool omit_endpoints)
    : n_(ts.size()),
      omit_(omit_endpoints),
      grid_(fourier_frequencies(ts.size())),
      coeffs_(ts.size()),
      freq_sq_(grid_size(ts.size()), 0.0),
      freq_mult_(grid_size(ts.size()), 0.0),
      transform_(ts.size()),
      scaled_(ts.size()),
      series_(ts.size()) {
  transform_.forward(ts.values(), coeffs_);
  for (std::size_t s = 0; s < n_; ++s) {
    if (omit_ && is_endpoint_slot(n_, s)) continue;
    freq_sq_[slot_frequency(s)] += coeffs_[s] * coeffs_[s];
    freq_mult_[slot_frequency(s)] += 1.0;
  }
}

Periodogram CorrectedLikelihood::periodogram() const {
  return periodogram_from_coeffs(FourierCoefficients{coeffs_});
}

namespace {

// Fills scaled = C^{-1/2} F z (zero at omitted slots); returns sum log C.
double scale_coefficients(std::span<const double> coeffs, std::span<const double> correction, std::size_t n,
                          bool omit, std::span<double> scaled) {
  if (correction.size() != grid_size(n)) throw InvalidInput("correction has the wrong length");
  double log_det = 0.0;
  for (std::size_t j = 0; j < correction.size(); ++j) {
    const std::size_t first = j == 0 ? 0 : 2 * j - 1;
    const std::size_t last = std::min(n - 1, 2 * j);
    if (omit && is_endpoint_frequency(n, j)) {
      for (std::size_t s = first; s <= last; ++s) scaled[s] = 0.0;
      continue;
    }
    const double c = correction[j];
    const double inv_root = 1.0 / std::sqrt(c);
    log_det += static_cast<double>(last - first + 1) * std::log(c);
    for (std::size_t s = first; s <= last; ++s) scaled[s] = coeffs[s] * inv_root;
  }
  return log_det;
}

}  // namespace

void CorrectedLikelihood::prepare_boundary(std::size_t p) {
  if (boundary_p_ == p && !boundary_.empty()) return;
  const std::size_t g = grid_size(n_);
  boundary_p_ = p;
  boundary_.assign(2 * p * g, 0.0);
  inv_root_.assign(g, 0.0);
  x_edge_.assign(2 * p, 0.0);
  for (std::size_t b = 0; b < 2 * p; ++b) {
    const std::size_t t = b < p ? b + 1 : n_ - 2 * p + b + 1;
    for (std::size_t s = 0; s < n_; ++s) {
      boundary_[b * g + slot_frequency(s)] += fourier_matrix_entry(n_, s, t) * coeffs_[s];
    }
  }
}

void CorrectedLikelihood::prepare_working(const ArModel& working) {
  const auto rho = working.pacf().values();
  if (working_ready_ && std::equal(rho.begin(), rho.end(), cached_pacf_.begin(), cached_pacf_.end())) return;
  const std::size_t p = rho.size();
  cached_pacf_.assign(rho.begin(), rho.end());
  levinson_ = levinson_rows(rho);
  pred_var_.assign(p + 1, 1.0);
  for (std::size_t m = p; m >= 1; --m) pred_var_[m - 1] = pred_var_[m] / (1.0 - rho[m - 1] * rho[m - 1]);
  log_var_sum_ = 0.0;
  for (std::size_t t = 0; t < p; ++t) log_var_sum_ += std::log(pred_var_[t]);
  const auto& a = levinson_[p];
  gain_.assign(grid_.size(), 0.0);
  for (std::size_t j = 0; j < grid_.size(); ++j) {
    double re = 1.0;
    double im = 0.0;
    for (std::size_t l = 1; l <= p; ++l) {
      const double arg = static_cast<double>(l) * grid_.freqs[j];
      re -= a[l - 1] * std::cos(arg);
      im += a[l - 1] * std::sin(arg);
    }
    gain_[j] = re * re + im * im;
  }
  working_ready_ = true;
}

CorrectedLikelihood::Parts CorrectedLikelihood::parts(std::span<const double> correction, const ArModel& working) {
  const std::size_t p = working.p();
  if (2 * p >= n_) return parts_general(correction, working);
  if (correction.size() != grid_size(n_)) throw InvalidInput("correction has the wrong length");
  if (p > 0) {
    prepare_boundary(p);
    prepare_working(working);
  }
  Parts out;
  out.n_used = used_slot_count(n_, omit_);
  double circ = 0.0;
  double log_det = 0.0;
  for (std::size_t j = 0; j < freq_mult_.size(); ++j) {
    if (freq_mult_[j] == 0.0) {
      if (p > 0) inv_root_[j] = 0.0;
      continue;
    }
    const double c = correction[j];
    log_det += freq_mult_[j] * std::log(c);
    const double gain = p > 0 ? gain_[j] : 1.0;
    circ += gain * freq_sq_[j] / c;
    if (p > 0) inv_root_[j] = 1.0 / std::sqrt(c);
  }
  double quad = circ;
  double log_var = 0.0;
  if (p > 0) {
    const std::size_t g = grid_.size();
    for (std::size_t b = 0; b < 2 * p; ++b) {
      const double* row = boundary_.data() + b * g;
      double acc = 0.0;
      for (std::size_t j = 0; j < g; ++j) acc += row[j] * inv_root_[j];
      x_edge_[b] = acc;
    }
    // x_t for t = 1..p sits at x_edge_[t - 1]; x_{n-p+1+m} at x_edge_[p + m].
    auto x_at = [&](std::ptrdiff_t t) {
      return t >= 1 ? x_edge_[static_cast<std::size_t>(t - 1)] : x_edge_[static_cast<std::size_t>(2 * static_cast<std::ptrdiff_t>(p) + t - 1)];
    };
    const auto& a = levinson_[p];
    for (std::size_t t = 1; t <= p; ++t) {
      double wrapped = x_at(static_cast<std::ptrdiff_t>(t));
      for (std::size_t l = 1; l <= p; ++l) wrapped -= a[l - 1] * x_at(static_cast<std::ptrdiff_t>(t) - static_cast<std::ptrdiff_t>(l));
      const auto& phi = levinson_[t - 1];
      double head = x_at(static_cast<std::ptrdiff_t>(t));
      for (std::size_t l = 1; l < t; ++l) head -= phi[l - 1] * x_at(static_cast<std::ptrdiff_t>(t - l));
      quad += head * head / pred_var_[t - 1] - wrapped * wrapped;
    }
    log_var = log_var_sum_;
  }
  const double sigma2 = working.sigma2();
  out.log_det = log_det;
  out.working.quad = quad / sigma2;
  out.working.log_norm = -0.5 * (static_cast<double>(n_) * (kLogTwoPi + std::log(sigma2)) + log_var);
  return out;
}

CorrectedLikelihood::Parts CorrectedLikelihood::parts_general(std::span<const double> correction,
                                                              const ArModel& working) {
  if (n_ <= working.p()) throw InvalidInput("series must be longer than the working AR order");
  Parts out;
  out.n_used = used_slot_count(n_, omit_);
  out.log_det = scale_coefficients(coeffs_, correction, n_, omit_, scaled_);
  transform_.inverse(scaled_, series_);
  out.working = ar_log_likelihood_parts(series_, working);
  return out;
}

}  // namespace npcspec
