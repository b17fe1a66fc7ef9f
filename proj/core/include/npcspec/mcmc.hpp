#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "npcspec/armodels.hpp"
#include "npcspec/bernstein.hpp"
#include "npcspec/likelihoods.hpp"
#include "npcspec/postprocess.hpp"
#include "npcspec/rng.hpp"

namespace npcspec {

struct McmcConfig {
  std::size_t iterations = 50'000;  // total sweeps, burn-in included
  std::size_t burn_in = 30'000;
  std::size_t thin = 4;
  std::uint64_t seed = 1;
  double eta_proposal_sd = 0.1;
  double adapt_target = 0.44;
  std::size_t adapt_batch = 50;
  double adapt_step_cap = 0.05;
  double initial_rho_sd = 0.0;  // 0 selects 1/sqrt(n)
  bool enumerate_k = true;      // exact discrete full conditional; random walk otherwise
  bool omit_endpoints = true;

  /// Run lengths of the simulation study for NP/NPC chains.
  static McmcConfig npc_defaults();
  /// Run lengths of the simulation study for the parametric AR chains.
  static McmcConfig ar_defaults();

  std::size_t retained() const { return (iterations - burn_in) / thin; }
  void validate() const;
};

/// Priors of the parametric AR sampler.
struct ArPriorConfig {
  double alpha_sigma = 0.001;
  double beta_sigma = 0.001;
};

/// Full state of the corrected sampler.
struct NpcState {
  BernsteinState bern;
  PacfVector rho;
  double eta = 0.0;
};

struct AcceptanceCounter {
  std::size_t proposed = 0;
  std::size_t accepted = 0;
  double rate() const { return proposed == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(proposed); }
  void record(bool ok) {
    ++proposed;
    accepted += ok ? 1 : 0;
  }
};

/// min(cap, b^(-1/2)) for batch index b >= 1.
double adaptation_step(std::size_t batch_index, double cap);

/// Batch-wise adaptation of random-walk proposal scales: after every
/// `batch` iterations of burn-in, log sd moves up by the current step if the
/// batch acceptance rate exceeded the target and down otherwise.
class ProposalAdapter {
 public:
  ProposalAdapter() = default;
  ProposalAdapter(std::size_t dims, double initial_sd, double target, std::size_t batch, double step_cap);

  std::size_t dims() const { return log_sd_.size(); }
  double sd(std::size_t l) const;
  std::size_t batches_completed() const { return batch_index_; }

  void record(std::size_t l, bool accepted);
  /// Applies one adaptation to coordinate l with the given batch rate.
  void adapt(std::size_t l, double batch_rate);
  /// Call once per sweep; adapts at batch boundaries while `adapting`.
  void end_iteration(bool adapting);

 private:
  std::vector<double> log_sd_;
  std::vector<AcceptanceCounter> batch_counts_;
  double target_ = 0.44;
  std::size_t batch_ = 50;
  double step_cap_ = 0.05;
  std::size_t iter_in_batch_ = 0;
  std::size_t batch_index_ = 0;
};

/// Likelihood seen by the corrected sampler. The default implementation
/// wraps CorrectedLikelihood; a constant stub is used for prior checks.
class NpcLikelihood {
 public:
  virtual ~NpcLikelihood() = default;
  virtual std::size_t n() const = 0;
  virtual bool omit_endpoints() const = 0;
  virtual CorrectedLikelihood::Parts parts(std::span<const double> correction, const ArModel& working) = 0;
};

class DataLikelihood final : public NpcLikelihood {
 public:
  DataLikelihood(const TimeSeries& ts, bool omit_endpoints) : lik_(ts, omit_endpoints) {}
  std::size_t n() const override { return lik_.n(); }
  bool omit_endpoints() const override { return lik_.omit_endpoints(); }
  CorrectedLikelihood::Parts parts(std::span<const double> correction, const ArModel& working) override {
    return lik_.parts(correction, working);
  }
  CorrectedLikelihood& inner() { return lik_; }

 private:
  CorrectedLikelihood lik_;
};

/// Log-likelihood identically zero; n_used = 0 so tau draws from its prior.
class FlatLikelihood final : public NpcLikelihood {
 public:
  explicit FlatLikelihood(std::size_t n) : n_(n) {}
  std::size_t n() const override { return n_; }
  bool omit_endpoints() const override { return true; }
  CorrectedLikelihood::Parts parts(std::span<const double>, const ArModel&) override { return {}; }

 private:
  std::size_t n_;
};

/// One retained iteration.
struct TraceRecord {
  std::size_t k = 0;
  double tau = 0.0;
  double eta = 0.0;
  double sigma2 = 1.0;
  std::vector<double> rho;
  std::vector<double> rho_sd;
  double log_likelihood = 0.0;
};

struct ChainOutput {
  std::string method;  // "ar", "np" or "npc"
  std::size_t order = 0;
  McmcConfig config;
  PosteriorSpectra psd;
  std::vector<TraceRecord> traces;
  std::vector<double> rho_acceptance;  // post burn-in, per coordinate
  double eta_acceptance = 0.0;
  double v_acceptance = 0.0;
  double w_acceptance = 0.0;
  double k_acceptance = 0.0;  // random-walk k moves only
  double wall_seconds = 0.0;

  double mean_eta() const;
};

/// log prior + corrected log-likelihood for an order-p working model with
/// unit innovation variance; rho_l and eta carry uniform priors on (-1, 1)
/// and [0, 1]. Returns -infinity outside the support.
double npc_full_conditional_logpost(const NpcState& state, const TimeSeries& ts, std::size_t p,
                                    const BernsteinDirichletConfig& cfg, bool omit_endpoints = true);

/// Metropolis-within-Gibbs sampler for (V, W, k, tau, rho, eta).
///
/// Scan order per sweep: V_1..V_L, W_0..W_L, k, tau, rho_1..rho_p, eta.
/// With p = 0 the working model is white noise, eta is held at 0 and the
/// sampler is the plain Whittle/Bernstein-Dirichlet procedure.
class NpcSampler {
 public:
  NpcSampler(NpcLikelihood& likelihood, std::size_t p, BernsteinDirichletConfig prior, McmcConfig mcmc,
             NpcState initial, Rng rng);

  /// Starting point: rho from Yule-Walker, eta = 1/2 (0 for p = 0), V and W
  /// uniform draws, k = min(k_max, 20), tau matched to the periodogram level.
  static NpcState initial_state(const TimeSeries& ts, std::size_t p, const BernsteinDirichletConfig& prior,
                                Rng& rng);

  const NpcState& state() const { return state_; }
  std::size_t order() const { return p_; }
  double log_likelihood() const { return loglik_; }
  /// Cached log posterior (log prior + log-likelihood).
  double log_posterior() const;

  void update_V(std::size_t l);
  void update_W(std::size_t l);
  void update_k();
  void update_tau();
  /// Random-walk Metropolis on log tau; reference for the conjugate draw.
  void update_tau_metropolis(double log_step_sd);
  void update_rho(std::size_t l);
  void update_eta();
  /// One systematic scan; `adapting` enables proposal adaptation.
  void sweep(bool adapting);

  /// Posterior spectral density c_eta(lambda) f_param(lambda)^eta on the grid.
  std::vector<double> current_psd() const;

  Rng& rng() { return rng_; }
  ProposalAdapter& adapter() { return adapter_; }
  const ProposalAdapter& adapter() const { return adapter_; }
  /// Full-conditional probabilities of k from the last enumeration.
  const std::vector<double>& last_k_probabilities() const { return k_probs_; }

  AcceptanceCounter v_counter, w_counter, k_counter, eta_counter;
  std::vector<AcceptanceCounter> rho_counters;

 private:
  void recompute_working();
  void recompute_mixture();
  double evaluate(std::span<const double> q, std::span<const double> fparam_pow, double tau,
                  const ArModel& working);
  double log_param_prior() const;

  NpcLikelihood& lik_;
  std::size_t p_;
  BernsteinDirichletConfig prior_;
  McmcConfig mcmc_;
  NpcState state_;
  Rng rng_;
  ProposalAdapter adapter_;
  std::shared_ptr<const BetaBasis> basis_;
  std::vector<double> log_k_prior_;  // index k
  FrequencyGrid grid_;

  ArModel working_;
  std::vector<double> stick_;       // p_0..p_L
  std::vector<double> q_;           // mixture density on the grid
  std::vector<double> fparam_;      // working spectral density (sigma2 = 1)
  std::vector<double> fparam_pow_;  // fparam^(eta - 1)
  double loglik_ = 0.0;

  std::vector<double> scratch_q_;
  std::vector<double> scratch_pow_;
  std::vector<double> scratch_fp_;
  std::vector<double> scratch_corr_;
  std::vector<double> k_probs_;
};

/// Runs the corrected sampler on a series; p = 0 gives the NP procedure.
ChainOutput run_npc(const TimeSeries& ts, std::size_t p, const BernsteinDirichletConfig& prior,
                    const McmcConfig& mcmc);

/// Gibbs sampler for the parametric AR(p) model in the PACF parametrization:
/// conjugate inverse-gamma draws of sigma2 and adaptive random-walk
/// Metropolis steps for each rho_l.
class ArSampler {
 public:
  ArSampler(const TimeSeries& ts, std::size_t p, ArPriorConfig prior, McmcConfig mcmc, Rng rng);

  const PacfVector& rho() const { return rho_; }
  double sigma2() const { return sigma2_; }
  double log_likelihood() const;

  void update_sigma2();
  void update_rho(std::size_t l);
  void sweep(bool adapting);

  std::vector<double> current_psd(const FrequencyGrid& grid) const;

  Rng& rng() { return rng_; }
  const ProposalAdapter& adapter() const { return adapter_; }
  void set_state(PacfVector rho, double sigma2);

  std::vector<AcceptanceCounter> rho_counters;

 private:
  std::span<const double> z() const { return ts_.values(); }

  TimeSeries ts_;
  std::size_t p_;
  ArPriorConfig prior_;
  McmcConfig mcmc_;
  Rng rng_;
  ProposalAdapter adapter_;
  PacfVector rho_;
  double sigma2_ = 1.0;
  GaussianLogLik unit_;  // likelihood parts at sigma2 = 1
};

ChainOutput run_ar(const TimeSeries& ts, std::size_t p, const ArPriorConfig& prior, const McmcConfig& mcmc);

}  // namespace npcspec
