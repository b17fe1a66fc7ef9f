#include "npcspec/fourier.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "npcspec/error.hpp"

namespace npcspec {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_length(std::size_t n) {
  if (n < 4) throw InvalidInput("series length must be at least 4");
}

}  // namespace

TimeSeries::TimeSeries(std::vector<double> values, SeriesMeta meta)
    : values_(std::move(values)), meta_(meta) {
  require_length(values_.size());
  for (double v : values_) {
    if (!std::isfinite(v)) throw InvalidInput("time series contains a non-finite value");
  }
}

TimeSeries TimeSeries::centered() const {
  double mean = 0.0;
  for (double v : values_) mean += v;
  mean /= static_cast<double>(values_.size());
  std::vector<double> out(values_);
  for (double& v : out) v -= mean;
  SeriesMeta meta = meta_;
  meta.mean_centered = true;
  return TimeSeries(std::move(out), meta);
}

TimeSeries TimeSeries::differenced() const {
  std::vector<double> out;
  out.reserve(values_.size() - 1);
  for (std::size_t t = 1; t < values_.size(); ++t) out.push_back(values_[t] - values_[t - 1]);
  SeriesMeta meta = meta_;
  meta.differenced = true;
  return TimeSeries(std::move(out), meta);
}

FrequencyGrid fourier_frequencies(std::size_t n) {
  require_length(n);
  FrequencyGrid grid;
  grid.n = n;
  grid.freqs.resize(grid_size(n));
  for (std::size_t j = 0; j < grid.freqs.size(); ++j) {
    grid.freqs[j] = kTwoPi * static_cast<double>(j) / static_cast<double>(n);
  }
  return grid;
}

// ---------------------------------------------------------------------------
// FFTW-backed transform

struct RealFourierTransform::Plans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
  // exp(-2 pi i j / n), j = 0..n/2: phase shift from the 1-based time index.
  std::vector<double> shift_re;
  std::vector<double> shift_im;
};

// Plans live for the whole program; FFTW's planner is not thread safe but
// executing an existing plan on new arrays is.
namespace {

std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

const RealFourierTransform::Plans* plans_for(std::size_t n) {
  static std::map<std::size_t, std::unique_ptr<RealFourierTransform::Plans>> cache;
  std::lock_guard<std::mutex> lock(plan_mutex());
  auto it = cache.find(n);
  if (it != cache.end()) return it->second.get();

  auto plans = std::make_unique<RealFourierTransform::Plans>();
  const int ni = static_cast<int>(n);
  double* in = fftw_alloc_real(n);
  fftw_complex* out = fftw_alloc_complex(n / 2 + 1);
  plans->r2c = fftw_plan_dft_r2c_1d(ni, in, out, FFTW_ESTIMATE | FFTW_UNALIGNED);
  plans->c2r = fftw_plan_dft_c2r_1d(ni, out, in, FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(in);
  fftw_free(out);
  if (plans->r2c == nullptr || plans->c2r == nullptr) throw NumericFailure("FFTW planning failed");

  plans->shift_re.resize(n / 2 + 1);
  plans->shift_im.resize(n / 2 + 1);
  for (std::size_t j = 0; j <= n / 2; ++j) {
    const double angle = -kTwoPi * static_cast<double>(j) / static_cast<double>(n);
    plans->shift_re[j] = std::cos(angle);
    plans->shift_im[j] = std::sin(angle);
  }
  auto* raw = plans.get();
  cache.emplace(n, std::move(plans));
  return raw;
}
}  // namespace

RealFourierTransform::RealFourierTransform(std::size_t n)
    : n_(n), plans_(nullptr), real_buf_(n), complex_buf_(2 * (n / 2 + 1)) {
  require_length(n);
  plans_ = plans_for(n);
}

void RealFourierTransform::forward(std::span<const double> z, std::span<double> out) {
  if (z.size() != n_ || out.size() != n_) throw InvalidInput("transform length mismatch");
  std::copy(z.begin(), z.end(), real_buf_.begin());
  auto* spec = reinterpret_cast<fftw_complex*>(complex_buf_.data());
  fftw_execute_dft_r2c(plans_->r2c, real_buf_.data(), spec);

  // FFTW sums over m = 0..n-1; the time index here is t = m + 1, so each bin
  // picks up the factor exp(-2 pi i j / n).
  const double scale = 1.0 / std::sqrt(static_cast<double>(n_));
  const double pair_scale = std::numbers::sqrt2 * scale;
  out[0] = spec[0][0] * scale;
  const std::size_t pairs = interior_pairs(n_);
  for (std::size_t j = 1; j <= pairs; ++j) {
    const double re = spec[j][0] * plans_->shift_re[j] - spec[j][1] * plans_->shift_im[j];
    const double im = spec[j][0] * plans_->shift_im[j] + spec[j][1] * plans_->shift_re[j];
    out[2 * j - 1] = pair_scale * re;
    out[2 * j] = pair_scale * im;
  }
  if (n_ % 2 == 0) {
    out[n_ - 1] = -spec[n_ / 2][0] * scale;
  }
}

void RealFourierTransform::inverse(std::span<const double> coeffs, std::span<double> out) {
  if (coeffs.size() != n_ || out.size() != n_) throw InvalidInput("transform length mismatch");
  auto* spec = reinterpret_cast<fftw_complex*>(complex_buf_.data());
  const double half_sqrt2 = std::numbers::sqrt2 / 2.0;
  spec[0][0] = coeffs[0];
  spec[0][1] = 0.0;
  const std::size_t pairs = interior_pairs(n_);
  for (std::size_t j = 1; j <= pairs; ++j) {
    // (c + i s) / sqrt(2) * exp(+2 pi i j / n)
    const double c = coeffs[2 * j - 1] * half_sqrt2;
    const double s = coeffs[2 * j] * half_sqrt2;
    const double sr = plans_->shift_re[j];
    const double si = -plans_->shift_im[j];
    spec[j][0] = c * sr - s * si;
    spec[j][1] = c * si + s * sr;
  }
  if (n_ % 2 == 0) {
    spec[n_ / 2][0] = -coeffs[n_ - 1];
    spec[n_ / 2][1] = 0.0;
  }
  fftw_execute_dft_c2r(plans_->c2r, spec, real_buf_.data());
  const double scale = 1.0 / std::sqrt(static_cast<double>(n_));
  for (std::size_t t = 0; t < n_; ++t) out[t] = real_buf_[t] * scale;
}

FourierCoefficients real_fourier_transform(std::span<const double> z) {
  RealFourierTransform tr(z.size());
  FourierCoefficients fc;
  fc.coeffs.resize(z.size());
  tr.forward(z, fc.coeffs);
  return fc;
}

std::vector<double> inverse_real_fourier_transform_values(std::span<const double> coeffs) {
  RealFourierTransform tr(coeffs.size());
  std::vector<double> out(coeffs.size());
  tr.inverse(coeffs, out);
  return out;
}

TimeSeries inverse_real_fourier_transform(const FourierCoefficients& fc) {
  return TimeSeries(inverse_real_fourier_transform_values(fc.coeffs));
}

// ---------------------------------------------------------------------------
// Explicit matrix route

double fourier_matrix_entry(std::size_t n, std::size_t row, std::size_t t) {
  const double nd = static_cast<double>(n);
  const double scale = 1.0 / std::sqrt(nd);
  if (row == 0) return scale;
  // e_{n/2} with components exp(-i pi t) = (-1)^t
  if (n % 2 == 0 && row == n - 1) return t % 2 == 0 ? scale : -scale;
  const std::size_t j = (row + 1) / 2;
  // j*t reduced mod n keeps the angle in [0, 2pi).
  const double angle = -kTwoPi * static_cast<double>((j * t) % n) / nd;
  const double pair_scale = std::numbers::sqrt2 * scale;
  return pair_scale * (row % 2 == 1 ? std::cos(angle) : std::sin(angle));
}

std::vector<double> fourier_matrix_row(std::size_t n, std::size_t row) {
  require_length(n);
  if (row >= n) throw InvalidInput("row index out of range");
  std::vector<double> r(n);
  for (std::size_t t = 1; t <= n; ++t) r[t - 1] = fourier_matrix_entry(n, row, t);
  return r;
}

FourierCoefficients real_fourier_transform_direct(std::span<const double> z) {
  const std::size_t n = z.size();
  FourierCoefficients fc;
  fc.coeffs.assign(n, 0.0);
  for (std::size_t row = 0; row < n; ++row) {
    const auto r = fourier_matrix_row(n, row);
    double acc = 0.0;
    for (std::size_t t = 0; t < n; ++t) acc += r[t] * z[t];
    fc.coeffs[row] = acc;
  }
  return fc;
}

std::vector<double> inverse_real_fourier_transform_direct(std::span<const double> coeffs) {
  const std::size_t n = coeffs.size();
  std::vector<double> z(n, 0.0);
  for (std::size_t row = 0; row < n; ++row) {
    const auto r = fourier_matrix_row(n, row);
    for (std::size_t t = 0; t < n; ++t) z[t] += r[t] * coeffs[row];
  }
  return z;
}

Periodogram periodogram_direct(const TimeSeries& ts) {
  const std::size_t n = ts.size();
  const auto grid = fourier_frequencies(n);
  Periodogram pg;
  pg.n = n;
  pg.ordinates.resize(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    double re = 0.0;
    double im = 0.0;
    for (std::size_t t = 1; t <= n; ++t) {
      const double angle = -kTwoPi * static_cast<double>((j * t) % n) / static_cast<double>(n);
      re += ts[t - 1] * std::cos(angle);
      im += ts[t - 1] * std::sin(angle);
    }
    pg.ordinates[j] = (re * re + im * im) / (kTwoPi * static_cast<double>(n));
  }
  return pg;
}

Periodogram periodogram_from_coeffs(const FourierCoefficients& fc) {
  const std::size_t n = fc.n();
  require_length(n);
  const auto& y = fc.coeffs;
  Periodogram pg;
  pg.n = n;
  pg.ordinates.resize(grid_size(n));
  pg.ordinates[0] = y[0] * y[0] / kTwoPi;
  const std::size_t pairs = interior_pairs(n);
  for (std::size_t j = 1; j <= pairs; ++j) {
    pg.ordinates[j] = (y[2 * j] * y[2 * j] + y[2 * j - 1] * y[2 * j - 1]) / (2.0 * kTwoPi);
  }
  if (n % 2 == 0) pg.ordinates[n / 2] = y[n - 1] * y[n - 1] / kTwoPi;
  return pg;
}

}  // namespace npcspec
