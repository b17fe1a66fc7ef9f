#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace npcspec {

/// Preprocessing applied to a series before analysis.
struct SeriesMeta {
  bool mean_centered = false;
  bool differenced = false;
};

/// Finite real observations Z_1..Z_n with n >= 4.
class TimeSeries {
 public:
  TimeSeries() = default;
  explicit TimeSeries(std::vector<double> values, SeriesMeta meta = {});

  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  const SeriesMeta& meta() const { return meta_; }
  double operator[](std::size_t i) const { return values_[i]; }

  /// Subtract the sample mean.
  TimeSeries centered() const;
  /// First differences Z_t - Z_{t-1}; the result has one fewer value.
  TimeSeries differenced() const;

 private:
  std::vector<double> values_;
  SeriesMeta meta_;
};

/// Coefficients F_n z in the row order
/// (e_0, c_1, s_1, ..., c_N, s_N[, e_{n/2}]).
struct FourierCoefficients {
  std::vector<double> coeffs;
  std::size_t n() const { return coeffs.size(); }
};

/// Fourier frequencies 2*pi*j/n for j = 0..floor(n/2).
struct FrequencyGrid {
  std::vector<double> freqs;
  std::size_t n = 0;

  std::size_t size() const { return freqs.size(); }
};

/// Periodogram ordinates at the Fourier frequencies of a length-n series.
struct Periodogram {
  std::vector<double> ordinates;
  std::size_t n = 0;

  std::size_t size() const { return ordinates.size(); }
};

/// N = floor((n - 1) / 2), the number of interior (cosine, sine) pairs.
constexpr std::size_t interior_pairs(std::size_t n) { return (n - 1) / 2; }

/// Number of grid points, floor(n/2) + 1.
constexpr std::size_t grid_size(std::size_t n) { return n / 2 + 1; }

FrequencyGrid fourier_frequencies(std::size_t n);

/// FFT-backed F_n z.
FourierCoefficients real_fourier_transform(std::span<const double> z);
inline FourierCoefficients real_fourier_transform(const TimeSeries& ts) {
  return real_fourier_transform(ts.values());
}

/// F_n^T y, the inverse of real_fourier_transform.
std::vector<double> inverse_real_fourier_transform_values(std::span<const double> coeffs);
TimeSeries inverse_real_fourier_transform(const FourierCoefficients& fc);

/// Explicit O(n^2) matrix route; kept as the reference for the FFT path.
FourierCoefficients real_fourier_transform_direct(std::span<const double> z);
std::vector<double> inverse_real_fourier_transform_direct(std::span<const double> coeffs);

/// Row `row` of F_n as a dense vector (entries t = 1..n stored at 0..n-1).
std::vector<double> fourier_matrix_row(std::size_t n, std::size_t row);
/// Single entry of F_n at time t in 1..n; no range checks.
double fourier_matrix_entry(std::size_t n, std::size_t row, std::size_t t);

/// |sum_t z_t exp(-i t lambda)|^2 / (2 pi n), evaluated term by term.
Periodogram periodogram_direct(const TimeSeries& ts);

/// Periodogram from paired squared coefficients.
Periodogram periodogram_from_coeffs(const FourierCoefficients& fc);

/// Reusable transform for one length. Owns scratch space, so one instance per
/// thread; the underlying FFTW plans are shared and immutable.
class RealFourierTransform {
 public:
  explicit RealFourierTransform(std::size_t n);

  std::size_t n() const { return n_; }
  void forward(std::span<const double> z, std::span<double> out);
  void inverse(std::span<const double> coeffs, std::span<double> out);

  struct Plans;

 private:
  std::size_t n_;
  const Plans* plans_;
  std::vector<double> real_buf_;
  std::vector<double> complex_buf_;  // interleaved (re, im)
};

}  // namespace npcspec
