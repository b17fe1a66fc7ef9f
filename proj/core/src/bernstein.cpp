#include "npcspec/bernstein.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <utility>

#include "npcspec/error.hpp"

namespace npcspec {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Largest table (in doubles) built eagerly: about 200 MB.
constexpr std::size_t kTableBudget = 25'000'000;

bool open_unit(double x) { return x > 0.0 && x < 1.0; }

}  // namespace

std::size_t BernsteinDirichletConfig::default_truncation(std::size_t n) {
  const auto cube_root = static_cast<std::size_t>(std::ceil(std::cbrt(static_cast<double>(n)) - 1e-12));
  return std::max<std::size_t>(20, cube_root);
}

BernsteinDirichletConfig BernsteinDirichletConfig::for_length(std::size_t n) {
  BernsteinDirichletConfig cfg;
  cfg.L = default_truncation(n);
  return cfg;
}

void BernsteinDirichletConfig::validate() const {
  if (!(M > 0.0)) throw InvalidInput("Dirichlet mass M must be positive");
  if (!(g0_a > 0.0 && g0_b > 0.0)) throw InvalidInput("base density parameters must be positive");
  if (!(theta_k > 0.0)) throw InvalidInput("theta_k must be positive");
  if (!(alpha_tau > 0.0 && beta_tau > 0.0)) throw InvalidInput("tau hyperparameters must be positive");
  if (L < 1) throw InvalidInput("truncation L must be at least 1");
  if (k_max < 1) throw InvalidInput("k_max must be at least 1");
}

bool BernsteinState::in_support(const BernsteinDirichletConfig& cfg) const {
  if (V.size() != cfg.L || W.size() != cfg.L + 1) return false;
  if (!std::all_of(V.begin(), V.end(), open_unit)) return false;
  if (!std::all_of(W.begin(), W.end(), open_unit)) return false;
  if (k < 1 || k > cfg.k_max) return false;
  return tau > 0.0 && std::isfinite(tau);
}

std::vector<double> stick_breaking(std::span<const double> V) {
  std::vector<double> p(V.size() + 1);
  double remaining = 1.0;
  double total = 0.0;
  for (std::size_t l = 0; l < V.size(); ++l) {
    if (!open_unit(V[l])) throw InvalidInput("stick-breaking fractions must lie in (0, 1)");
    p[l + 1] = V[l] * remaining;
    remaining *= (1.0 - V[l]);
    total += p[l + 1];
  }
  p[0] = std::max(0.0, 1.0 - total);
  return p;
}

std::size_t mixture_cell(double w, std::size_t k) {
  const double scaled = std::ceil(w * static_cast<double>(k));
  if (!(scaled >= 1.0)) return 1;
  return std::min(k, static_cast<std::size_t>(scaled));
}

std::vector<double> mixture_weights(std::span<const double> p, std::span<const double> W, std::size_t k) {
  if (p.size() != W.size()) throw InvalidInput("stick weights and atoms differ in length");
  if (k < 1) throw InvalidInput("k must be at least 1");
  std::vector<double> w(k, 0.0);
  for (std::size_t l = 0; l < p.size(); ++l) w[mixture_cell(W[l], k) - 1] += p[l];
  return w;
}

double log_beta_density(double omega, std::size_t a, std::size_t b) {
  if (omega < 0.0 || omega > 1.0) return kNegInf;
  const double ad = static_cast<double>(a);
  const double bd = static_cast<double>(b);
  double out = std::lgamma(ad + bd) - std::lgamma(ad) - std::lgamma(bd);
  if (a > 1) {
    if (omega == 0.0) return kNegInf;
    out += (ad - 1.0) * std::log(omega);
  }
  if (b > 1) {
    if (omega == 1.0) return kNegInf;
    out += (bd - 1.0) * std::log1p(-omega);
  }
  return out;
}

double log_k_prior(std::size_t k, double theta_k, std::size_t k_max) {
  if (k < 1 || k > k_max) return kNegInf;
  auto unnormalized = [theta_k](std::size_t kk) {
    const double kd = static_cast<double>(kk);
    return -theta_k * kd * std::log(kd);
  };
  double max_term = kNegInf;
  for (std::size_t kk = 1; kk <= k_max; ++kk) max_term = std::max(max_term, unnormalized(kk));
  double sum = 0.0;
  for (std::size_t kk = 1; kk <= k_max; ++kk) sum += std::exp(unnormalized(kk) - max_term);
  return unnormalized(k) - (max_term + std::log(sum));
}

SpectralGridValues eval_c_eta(const BernsteinState& state, const FrequencyGrid& grid) {
  const auto p = stick_breaking(state.V);
  const auto w = mixture_weights(p, state.W, state.k);
  SpectralGridValues out;
  out.role = SpectralRole::damped_correction;
  out.values.assign(grid.size(), 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double omega = std::min(1.0, grid.freqs[i] / std::numbers::pi);
    double acc = 0.0;
    for (std::size_t j = 1; j <= state.k; ++j) {
      if (w[j - 1] == 0.0) continue;
      acc += w[j - 1] * std::exp(log_beta_density(omega, j, state.k - j + 1));
    }
    out.values[i] = state.tau * acc;
  }
  return out;
}

double log_prior(const BernsteinState& state, const BernsteinDirichletConfig& cfg) {
  if (!state.in_support(cfg)) return kNegInf;
  double out = 0.0;
  for (double v : state.V) out += std::log(cfg.M) + (cfg.M - 1.0) * std::log1p(-v);
  if (cfg.g0_a != 1.0 || cfg.g0_b != 1.0) {
    const double log_norm = std::lgamma(cfg.g0_a + cfg.g0_b) - std::lgamma(cfg.g0_a) - std::lgamma(cfg.g0_b);
    for (double w : state.W) {
      out += log_norm + (cfg.g0_a - 1.0) * std::log(w) + (cfg.g0_b - 1.0) * std::log1p(-w);
    }
  }
  out += log_k_prior(state.k, cfg.theta_k, cfg.k_max);
  // Inverse-gamma(alpha, beta) density.
  const double a = cfg.alpha_tau;
  const double b = cfg.beta_tau;
  out += a * std::log(b) - std::lgamma(a) - (a + 1.0) * std::log(state.tau) - b / state.tau;
  return out;
}

// ---------------------------------------------------------------------------

BetaBasis::BetaBasis(std::size_t n, std::size_t k_max) : n_(n), k_max_(k_max) {
  if (n < 4) throw InvalidInput("series length must be at least 4");
  if (k_max < 1) throw InvalidInput("k_max must be at least 1");
  const std::size_t g = grid_size(n);
  omega_.resize(g);
  log_omega_.resize(g);
  log_one_minus_.resize(g);
  for (std::size_t i = 0; i < g; ++i) {
    omega_[i] = std::min(1.0, 2.0 * static_cast<double>(i) / static_cast<double>(n));
    log_omega_[i] = std::log(omega_[i]);
    log_one_minus_[i] = std::log1p(-omega_[i]);
  }
  lgamma_.resize(k_max + 2);
  lgamma_[0] = std::numeric_limits<double>::infinity();
  for (std::size_t m = 1; m < lgamma_.size(); ++m) lgamma_[m] = std::lgamma(static_cast<double>(m));

  const std::size_t entries = k_max * (k_max + 1) / 2 * g;
  if (entries <= kTableBudget) {
    table_.resize(entries);
    std::size_t offset = 0;
    for (std::size_t k = 1; k <= k_max; ++k) {
      for (std::size_t j = 1; j <= k; ++j) {
        for (std::size_t i = 0; i < g; ++i) table_[offset + i] = std::exp(log_density(i, j, k));
        offset += g;
      }
    }
  }
}

double BetaBasis::log_density(std::size_t i, std::size_t j, std::size_t k) const {
  // beta(omega | j, k - j + 1) = k!/((j-1)!(k-j)!) omega^(j-1) (1-omega)^(k-j)
  double out = lgamma_[k + 1] - lgamma_[j] - lgamma_[k - j + 1];
  if (j > 1) {
    if (omega_[i] == 0.0) return kNegInf;
    out += static_cast<double>(j - 1) * log_omega_[i];
  }
  if (k > j) {
    if (omega_[i] == 1.0) return kNegInf;
    out += static_cast<double>(k - j) * log_one_minus_[i];
  }
  return out;
}

void BetaBasis::accumulate(std::size_t k, std::size_t j, double weight, std::span<double> out) const {
  const std::size_t g = omega_.size();
  if (tabulated()) {
    const double* row = table_.data() + (k * (k - 1) / 2 + (j - 1)) * g;
    for (std::size_t i = 0; i < g; ++i) out[i] += weight * row[i];
    return;
  }
  for (std::size_t i = 0; i < g; ++i) out[i] += weight * std::exp(log_density(i, j, k));
}

void BetaBasis::mixture(std::span<const double> p, std::span<const double> W, std::size_t k,
                        std::span<double> out) const {
  if (k < 1 || k > k_max_) throw InvalidInput("k outside 1..k_max");
  std::fill(out.begin(), out.end(), 0.0);
  if (!tabulated()) {
    for (std::size_t l = 0; l < p.size(); ++l) {
      if (p[l] != 0.0) accumulate(k, mixture_cell(W[l], k), p[l], out);
    }
    return;
  }
  // Rows of one k are scattered over the table; touching them all before the
  // arithmetic lets the cache misses overlap.
  constexpr std::size_t kMaxBatch = 64;
  const std::size_t g = omega_.size();
  const double* rows[kMaxBatch];
  double weights[kMaxBatch];
  const double* base = table_.data() + k * (k - 1) / 2 * g;
  for (std::size_t start = 0; start < p.size(); start += kMaxBatch) {
    const std::size_t stop = std::min(p.size(), start + kMaxBatch);
    std::size_t count = 0;
    for (std::size_t l = start; l < stop; ++l) {
      if (p[l] == 0.0) continue;
      rows[count] = base + (mixture_cell(W[l], k) - 1) * g;
      weights[count] = p[l];
      for (std::size_t i = 0; i < g; i += 8) __builtin_prefetch(rows[count] + i);
      ++count;
    }
    for (std::size_t r = 0; r < count; ++r) {
      const double* row = rows[r];
      const double w = weights[r];
      for (std::size_t i = 0; i < g; ++i) out[i] += w * row[i];
    }
  }
}

std::shared_ptr<const BetaBasis> BetaBasis::shared(std::size_t n, std::size_t k_max) {
  static std::mutex mutex;
  static std::map<std::pair<std::size_t, std::size_t>, std::weak_ptr<const BetaBasis>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[{n, k_max}];
  if (auto existing = slot.lock()) return existing;
  auto created = std::make_shared<const BetaBasis>(n, k_max);
  slot = created;
  return created;
}

}  // namespace npcspec
