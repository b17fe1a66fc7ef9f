#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "npcspec/fourier.hpp"
#include "npcspec/likelihoods.hpp"

namespace npcspec {

/// Hyperparameters of the Bernstein-Dirichlet prior on the damped correction.
struct BernsteinDirichletConfig {
  double M = 1.0;  // Dirichlet process mass
  // Base density g0 = Beta(g0_a, g0_b) on (0, 1); uniform by default.
  double g0_a = 1.0;
  double g0_b = 1.0;
  double theta_k = 0.01;
  std::size_t k_max = 500;
  double alpha_tau = 0.001;
  double beta_tau = 0.001;
  std::size_t L = 20;  // stick-breaking truncation

  /// max(20, ceil(n^(1/3))).
  static std::size_t default_truncation(std::size_t n);
  static BernsteinDirichletConfig for_length(std::size_t n);

  void validate() const;
};

/// Finite-dimensional prior state (V_1..V_L, W_0..W_L, k, tau).
struct BernsteinState {
  std::vector<double> V;  // size L
  std::vector<double> W;  // size L + 1, W[0] is W_0
  std::size_t k = 1;
  double tau = 1.0;

  bool in_support(const BernsteinDirichletConfig& cfg) const;
};

/// Stick-breaking weights; element 0 is p_0 = 1 - sum_{l>=1} p_l and element
/// l >= 1 is p_l = V_l prod_{j<l} (1 - V_j).
std::vector<double> stick_breaking(std::span<const double> V);

/// Cell index in 1..k of an atom at w: ((j-1)/k, j/k], with w = 0 in cell 1.
std::size_t mixture_cell(double w, std::size_t k);

/// Dense weights w~_{1,k}..w~_{k,k} (stored at 0..k-1).
std::vector<double> mixture_weights(std::span<const double> p, std::span<const double> W, std::size_t k);

/// log beta(omega | a, b) for positive integer a, b; -inf where the density vanishes.
double log_beta_density(double omega, std::size_t a, std::size_t b);

/// log p_k(k) with p_k(k) proportional to exp(-theta k log k) on 1..k_max.
double log_k_prior(std::size_t k, double theta_k, std::size_t k_max);

/// tau * sum_j w~_{j,k} beta(lambda/pi | j, k - j + 1) on the grid.
SpectralGridValues eval_c_eta(const BernsteinState& state, const FrequencyGrid& grid);

/// Joint log prior density; -infinity outside the support.
double log_prior(const BernsteinState& state, const BernsteinDirichletConfig& cfg);

/// Beta densities beta(omega_i | j, k - j + 1) on the points omega_i = 2i/n,
/// i = 0..floor(n/2), for 1 <= j <= k <= k_max. Tabulated when the table
/// fits in the memory budget, evaluated on demand otherwise. Immutable after
/// construction, so one instance can be shared across threads.
class BetaBasis {
 public:
  BetaBasis(std::size_t n, std::size_t k_max);

  /// Shared instance per (n, k_max).
  static std::shared_ptr<const BetaBasis> shared(std::size_t n, std::size_t k_max);

  std::size_t n() const { return n_; }
  std::size_t k_max() const { return k_max_; }
  std::size_t points() const { return omega_.size(); }
  bool tabulated() const { return !table_.empty(); }

  /// out[i] += weight * beta(omega_i | j, k - j + 1).
  void accumulate(std::size_t k, std::size_t j, double weight, std::span<double> out) const;

  /// q(omega_i) = sum_l p_l beta(omega_i | cell(W_l), k - cell + 1).
  void mixture(std::span<const double> p, std::span<const double> W, std::size_t k, std::span<double> out) const;


 private:
  double log_density(std::size_t i, std::size_t j, std::size_t k) const;

  std::size_t n_;
  std::size_t k_max_;
  std::vector<double> omega_;
  std::vector<double> log_omega_;
  std::vector<double> log_one_minus_;
  std::vector<double> lgamma_;  // lgamma_[m] = log Gamma(m), m = 0..k_max + 1
  std::vector<double> table_;
};

}  // namespace npcspec
