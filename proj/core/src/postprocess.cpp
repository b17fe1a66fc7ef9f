#include "npcspec/postprocess.hpp"

#include <algorithm>
#include <cmath>

#include "npcspec/error.hpp"

namespace npcspec {

PosteriorSpectra::PosteriorSpectra(FrequencyGrid grid, std::vector<double> samples)
    : grid_(std::move(grid)), samples_(std::move(samples)) {
  if (grid_.size() == 0 || samples_.size() % grid_.size() != 0) {
    throw InvalidInput("posterior sample matrix does not match the grid");
  }
}

void PosteriorSpectra::append(std::span<const double> psd) {
  if (psd.size() != grid_.size()) throw InvalidInput("posterior draw does not match the grid");
  samples_.insert(samples_.end(), psd.begin(), psd.end());
}

double median(std::vector<double> values) {
  if (values.empty()) throw InvalidInput("median of an empty sample");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

double quantile(std::vector<double> values, double prob) {
  if (values.empty()) throw InvalidInput("quantile of an empty sample");
  if (!(prob >= 0.0 && prob <= 1.0)) throw InvalidInput("quantile probability outside [0, 1]");
  std::sort(values.begin(), values.end());
  const double pos = prob * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

namespace {

std::vector<double> column(const PosteriorSpectra& ps, std::size_t j) {
  std::vector<double> col(ps.rows());
  for (std::size_t i = 0; i < ps.rows(); ++i) col[i] = ps.at(i, j);
  return col;
}

void require_samples(const PosteriorSpectra& ps) {
  if (ps.empty()) throw InvalidInput("no posterior samples");
}

}  // namespace

std::vector<double> posterior_median_psd(const PosteriorSpectra& ps) {
  require_samples(ps);
  std::vector<double> out(ps.cols());
  for (std::size_t j = 0; j < ps.cols(); ++j) out[j] = median(column(ps, j));
  return out;
}

std::vector<double> interior_values(std::span<const double> values, std::size_t n) {
  if (values.size() != grid_size(n)) throw InvalidInput("values do not match the grid of a length-n series");
  const std::size_t last = n % 2 == 0 ? values.size() - 1 : values.size();
  return std::vector<double>(values.begin() + 1, values.begin() + static_cast<std::ptrdiff_t>(last));
}

PosteriorSpectra interior_columns(const PosteriorSpectra& ps) {
  const std::size_t n = ps.grid().n;
  FrequencyGrid sub{interior_values(ps.grid().freqs, n), n};
  std::vector<double> samples;
  samples.reserve(ps.rows() * sub.size());
  for (std::size_t i = 0; i < ps.rows(); ++i) {
    const auto row = interior_values(ps.row(i), n);
    samples.insert(samples.end(), row.begin(), row.end());
  }
  return PosteriorSpectra(std::move(sub), std::move(samples));
}

double fuller_log(double x, double xi) {
  if (x < 0.0) throw InvalidInput("fuller_log of a negative value");
  if (!(xi >= 0.0)) throw InvalidInput("fuller_log offset must be nonnegative");
  return std::log(x + xi) - xi / (x + xi);
}

double inverse_fuller_log(double y, double xi) {
  if (y <= fuller_log(0.0, xi)) return 0.0;
  // Bracket: fuller_log(x) <= log(x + xi), so x = exp(y) + 1 is above the root.
  double lo = 0.0;
  double hi = std::exp(y) + 1.0;
  while (fuller_log(hi, xi) < y) hi *= 2.0;
  for (int it = 0; it < 400 && (hi - lo) > 1e-10 * std::max(hi, 1e-300); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (fuller_log(mid, xi) < y) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

CredibleBand uniform_credible_band(const PosteriorSpectra& ps, double alpha, double xi) {
  require_samples(ps);
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidInput("alpha must lie in (0, 1)");
  const std::size_t rows = ps.rows();
  const std::size_t cols = ps.cols();

  std::vector<double> transformed(rows * cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) transformed[i * cols + j] = fuller_log(ps.at(i, j), xi);
  }
  std::vector<double> center(cols);
  std::vector<double> spread(cols);
  std::vector<double> col(rows);
  for (std::size_t j = 0; j < cols; ++j) {
    for (std::size_t i = 0; i < rows; ++i) col[i] = transformed[i * cols + j];
    center[j] = median(col);
    for (std::size_t i = 0; i < rows; ++i) col[i] = std::abs(transformed[i * cols + j] - center[j]);
    spread[j] = median(col);
  }

  CredibleBand band;
  band.kind = BandKind::uniform;
  band.alpha = alpha;
  band.excluded = static_cast<std::size_t>(std::count(spread.begin(), spread.end(), 0.0));

  std::vector<double> stats(rows, 0.0);
  for (std::size_t i = 0; i < rows; ++i) {
    double worst = 0.0;
    for (std::size_t j = 0; j < cols; ++j) {
      if (spread[j] == 0.0) continue;
      worst = std::max(worst, std::abs(transformed[i * cols + j] - center[j]) / spread[j]);
    }
    stats[i] = worst;
  }
  std::sort(stats.begin(), stats.end());
  const auto needed = static_cast<std::size_t>(std::ceil((1.0 - alpha) * static_cast<double>(rows) - 1e-9));
  band.c_star = stats[std::clamp<std::size_t>(needed, 1, rows) - 1];

  band.lower.resize(cols);
  band.upper.resize(cols);
  band.center.resize(cols);
  for (std::size_t j = 0; j < cols; ++j) {
    band.center[j] = inverse_fuller_log(center[j], xi);
    band.lower[j] = inverse_fuller_log(center[j] - band.c_star * spread[j], xi);
    band.upper[j] = inverse_fuller_log(center[j] + band.c_star * spread[j], xi);
  }
  return band;
}

CredibleBand pointwise_credible_band(const PosteriorSpectra& ps, double alpha) {
  require_samples(ps);
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidInput("alpha must lie in (0, 1)");
  CredibleBand band;
  band.kind = BandKind::pointwise;
  band.alpha = alpha;
  band.lower.resize(ps.cols());
  band.upper.resize(ps.cols());
  band.center.resize(ps.cols());
  for (std::size_t j = 0; j < ps.cols(); ++j) {
    auto col = column(ps, j);
    band.lower[j] = quantile(col, alpha / 2.0);
    band.upper[j] = quantile(col, 1.0 - alpha / 2.0);
    band.center[j] = median(std::move(col));
  }
  return band;
}

double integrated_absolute_error(std::span<const double> estimate, std::span<const double> truth,
                                 const FrequencyGrid& grid) {
  if (estimate.size() != grid.size() || truth.size() != grid.size()) {
    throw InvalidInput("IAE inputs do not match the grid");
  }
  double acc = 0.0;
  for (std::size_t j = 0; j + 1 < grid.size(); ++j) {
    const double width = grid.freqs[j + 1] - grid.freqs[j];
    acc += 0.5 * width * (std::abs(estimate[j] - truth[j]) + std::abs(estimate[j + 1] - truth[j + 1]));
  }
  return acc;
}

bool band_covers(const CredibleBand& band, std::span<const double> truth) {
  if (truth.size() != band.lower.size()) throw InvalidInput("band and truth differ in length");
  for (std::size_t j = 0; j < truth.size(); ++j) {
    if (truth[j] < band.lower[j] || truth[j] > band.upper[j]) return false;
  }
  return true;
}

}  // namespace npcspec
