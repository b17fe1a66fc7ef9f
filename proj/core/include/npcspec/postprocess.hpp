#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "npcspec/fourier.hpp"

namespace npcspec {

/// Posterior spectral density draws on a fixed grid, stored row-major
/// (one row per draw).
class PosteriorSpectra {
 public:
  PosteriorSpectra() = default;
  explicit PosteriorSpectra(FrequencyGrid grid) : grid_(std::move(grid)) {}
  PosteriorSpectra(FrequencyGrid grid, std::vector<double> samples);

  const FrequencyGrid& grid() const { return grid_; }
  std::size_t rows() const { return grid_.size() == 0 ? 0 : samples_.size() / grid_.size(); }
  std::size_t cols() const { return grid_.size(); }
  bool empty() const { return samples_.empty(); }

  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(samples_).subspan(i * cols(), cols());
  }
  double at(std::size_t i, std::size_t j) const { return samples_[i * cols() + j]; }
  const std::vector<double>& data() const { return samples_; }

  void append(std::span<const double> psd);

 private:
  FrequencyGrid grid_;
  std::vector<double> samples_;
};

enum class BandKind { pointwise, uniform };

struct CredibleBand {
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<double> center;  // the pointwise median the band is built around
  double alpha = 0.1;          // miscoverage; 0.1 gives a 90% band
  BandKind kind = BandKind::pointwise;
  double c_star = 0.0;         // uniform bands only
  std::size_t excluded = 0;    // frequencies dropped for zero spread
};

/// Median of a sample; the mean of the two middle values for even counts.
double median(std::vector<double> values);

/// Empirical quantile with linear interpolation between order statistics
/// (the "type 7" rule: position (N - 1) prob).
double quantile(std::vector<double> values, double prob);

std::vector<double> posterior_median_psd(const PosteriorSpectra& ps);

/// Copy without the endpoint frequencies 0 and (for even n) pi.
PosteriorSpectra interior_columns(const PosteriorSpectra& ps);
/// Values at the interior grid frequencies of a full-grid vector.
std::vector<double> interior_values(std::span<const double> values, std::size_t n);

/// log(x + xi) - xi / (x + xi).
double fuller_log(double x, double xi);

/// Inverse of fuller_log on x >= 0 by bisection to 1e-10 relative width.
/// Values below fuller_log(0, xi) map to 0.
double inverse_fuller_log(double y, double xi);

/// Simultaneous band on the Fuller-log scale: median +/- C* times the
/// (unscaled) median absolute deviation, C* being the smallest value such that
/// at least (1 - alpha) N draws lie within it at every frequency.
CredibleBand uniform_credible_band(const PosteriorSpectra& ps, double alpha, double xi = 0.001);

/// Columnwise (alpha/2, 1 - alpha/2) quantiles.
CredibleBand pointwise_credible_band(const PosteriorSpectra& ps, double alpha);

/// Trapezoidal integral of |estimate - truth| over the grid.
double integrated_absolute_error(std::span<const double> estimate, std::span<const double> truth,
                                 const FrequencyGrid& grid);

/// True iff lower <= truth <= upper at every grid point.
bool band_covers(const CredibleBand& band, std::span<const double> truth);

}  // namespace npcspec
