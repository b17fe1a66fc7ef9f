#include "npcspec/mcmc.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "npcspec/error.hpp"

namespace npcspec {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool accept(Rng& rng, double log_ratio) {
  if (std::isnan(log_ratio)) return false;
  if (log_ratio >= 0.0) return true;
  return std::log(rng.uniform()) < log_ratio;
}

double log_sum_exp(std::span<const double> v) {
  double m = kNegInf;
  for (double x : v) m = std::max(m, x);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

}  // namespace

// ---------------------------------------------------------------------------

McmcConfig McmcConfig::npc_defaults() {
  McmcConfig c;
  c.iterations = 50'000;
  c.burn_in = 30'000;
  c.thin = 4;
  return c;
}

McmcConfig McmcConfig::ar_defaults() {
  McmcConfig c;
  c.iterations = 20'000;
  c.burn_in = 8'000;
  c.thin = 1;
  return c;
}

void McmcConfig::validate() const {
  if (iterations < 1) throw InvalidInput("iterations must be positive");
  if (burn_in >= iterations) throw InvalidInput("burn-in must be smaller than the number of iterations");
  if (thin < 1) throw InvalidInput("thin must be at least 1");
  if (!(eta_proposal_sd > 0.0)) throw InvalidInput("eta proposal sd must be positive");
  if (!(adapt_target > 0.0 && adapt_target < 1.0)) throw InvalidInput("adaptation target must lie in (0, 1)");
  if (adapt_batch < 1) throw InvalidInput("adaptation batch must be at least 1");
  if (!(adapt_step_cap > 0.0)) throw InvalidInput("adaptation step cap must be positive");
  if (initial_rho_sd < 0.0) throw InvalidInput("initial rho proposal sd must be nonnegative");
}

double adaptation_step(std::size_t batch_index, double cap) {
  const double b = static_cast<double>(std::max<std::size_t>(batch_index, 1));
  return std::min(cap, 1.0 / std::sqrt(b));
}

ProposalAdapter::ProposalAdapter(std::size_t dims, double initial_sd, double target, std::size_t batch,
                                 double step_cap)
    : log_sd_(dims, std::log(initial_sd)),
      batch_counts_(dims),
      target_(target),
      batch_(batch),
      step_cap_(step_cap) {
  if (!(initial_sd > 0.0)) throw InvalidInput("initial proposal sd must be positive");
  if (batch < 1) throw InvalidInput("adaptation batch must be at least 1");
}

double ProposalAdapter::sd(std::size_t l) const { return std::exp(log_sd_.at(l)); }

void ProposalAdapter::record(std::size_t l, bool accepted) { batch_counts_.at(l).record(accepted); }

void ProposalAdapter::adapt(std::size_t l, double batch_rate) {
  const double delta = adaptation_step(batch_index_, step_cap_);
  log_sd_.at(l) += batch_rate > target_ ? delta : -delta;
}

void ProposalAdapter::end_iteration(bool adapting) {
  if (++iter_in_batch_ < batch_) return;
  iter_in_batch_ = 0;
  if (adapting) {
    ++batch_index_;
    for (std::size_t l = 0; l < log_sd_.size(); ++l) adapt(l, batch_counts_[l].rate());
  }
  for (auto& c : batch_counts_) c = AcceptanceCounter{};
}

double ChainOutput::mean_eta() const {
  if (traces.empty()) return 0.0;
  double s = 0.0;
  for (const auto& t : traces) s += t.eta;
  return s / static_cast<double>(traces.size());
}

// ---------------------------------------------------------------------------

double npc_full_conditional_logpost(const NpcState& state, const TimeSeries& ts, std::size_t p,
                                    const BernsteinDirichletConfig& cfg, bool omit_endpoints) {
  if (state.rho.size() != p) return kNegInf;
  if (!(state.eta >= 0.0 && state.eta <= 1.0)) return kNegInf;
  const double prior = log_prior(state.bern, cfg);
  if (!std::isfinite(prior)) return kNegInf;
  const ArModel working(state.rho, 1.0);
  const auto grid = fourier_frequencies(ts.size());
  const auto c_eta = eval_c_eta(state.bern, grid);
  double ll = kNegInf;
  try {
    ll = corrected_ar_log_likelihood(ts, working, c_eta, state.eta, omit_endpoints);
  } catch (const InvalidInput&) {
    return kNegInf;
  }
  return prior - static_cast<double>(p) * std::numbers::ln2 + ll;
}

// ---------------------------------------------------------------------------

NpcSampler::NpcSampler(NpcLikelihood& likelihood, std::size_t p, BernsteinDirichletConfig prior,
                       McmcConfig mcmc, NpcState initial, Rng rng)
    : lik_(likelihood),
      p_(p),
      prior_(prior),
      mcmc_(mcmc),
      state_(std::move(initial)),
      rng_(rng) {
  prior_.validate();
  mcmc_.validate();
  const std::size_t n = lik_.n();
  if (n <= p_) throw InvalidInput("series must be longer than the working AR order");
  if (state_.rho.size() != p_) throw InvalidInput("initial state has the wrong number of partial autocorrelations");
  if (!state_.bern.in_support(prior_)) throw InvalidInput("initial Bernstein state outside the prior support");
  if (!(state_.eta >= 0.0 && state_.eta <= 1.0)) throw InvalidInput("initial eta outside [0, 1]");
  if (p_ == 0) state_.eta = 0.0;

  const double init_sd = mcmc_.initial_rho_sd > 0.0 ? mcmc_.initial_rho_sd : 1.0 / std::sqrt(static_cast<double>(n));
  adapter_ = ProposalAdapter(p_, init_sd, mcmc_.adapt_target, mcmc_.adapt_batch, mcmc_.adapt_step_cap);
  rho_counters.resize(p_);

  basis_ = BetaBasis::shared(n, prior_.k_max);
  log_k_prior_.assign(prior_.k_max + 1, kNegInf);
  {
    std::vector<double> un(prior_.k_max + 1, kNegInf);
    for (std::size_t k = 1; k <= prior_.k_max; ++k) {
      const double kd = static_cast<double>(k);
      un[k] = -prior_.theta_k * kd * std::log(kd);
    }
    const double norm = log_sum_exp(un);
    for (std::size_t k = 1; k <= prior_.k_max; ++k) log_k_prior_[k] = un[k] - norm;
  }

  grid_ = fourier_frequencies(n);
  const std::size_t g = grid_size(n);
  q_.assign(g, 0.0);
  scratch_q_.assign(g, 0.0);
  scratch_pow_.assign(g, 0.0);
  scratch_fp_.assign(g, 0.0);
  scratch_corr_.assign(g, 0.0);
  recompute_mixture();
  recompute_working();
  loglik_ = evaluate(q_, fparam_pow_, state_.bern.tau, working_);
  if (!std::isfinite(loglik_)) throw NumericFailure("log-likelihood at the initial state is not finite");
}

void NpcSampler::recompute_mixture() {
  stick_ = stick_breaking(state_.bern.V);
  basis_->mixture(stick_, state_.bern.W, state_.bern.k, q_);
}

void NpcSampler::recompute_working() {
  working_ = ArModel(state_.rho, 1.0);
  fparam_ = ar_spectral_density(working_, grid_);
  fparam_pow_.resize(fparam_.size());
  for (std::size_t j = 0; j < fparam_.size(); ++j) fparam_pow_[j] = std::pow(fparam_[j], state_.eta - 1.0);
}

double NpcSampler::evaluate(std::span<const double> q, std::span<const double> fparam_pow, double tau,
                            const ArModel& working) {
  const std::size_t n = lik_.n();
  const bool omit = lik_.omit_endpoints();
  for (std::size_t j = 0; j < q.size(); ++j) {
    const double c = tau * q[j] * fparam_pow[j];
    if (!(c > 0.0) || !std::isfinite(c)) {
      if (omit && is_endpoint_frequency(n, j)) {
        scratch_corr_[j] = 1.0;
        continue;
      }
      return kNegInf;
    }
    scratch_corr_[j] = c;
  }
  const double v = lik_.parts(scratch_corr_, working).value();
  return std::isnan(v) ? kNegInf : v;
}

double NpcSampler::log_param_prior() const { return -static_cast<double>(p_) * std::numbers::ln2; }

double NpcSampler::log_posterior() const { return log_prior(state_.bern, prior_) + log_param_prior() + loglik_; }

NpcState NpcSampler::initial_state(const TimeSeries& ts, std::size_t p, const BernsteinDirichletConfig& prior,
                                   Rng& rng) {
  prior.validate();
  NpcState s;
  s.bern.V.resize(prior.L);
  s.bern.W.resize(prior.L + 1);
  for (auto& v : s.bern.V) v = rng.uniform();
  for (auto& w : s.bern.W) w = rng.uniform();
  s.bern.k = std::min<std::size_t>(prior.k_max, 20);
  s.rho = p == 0 ? PacfVector() : yule_walker_fit(ts, p).pacf();
  s.eta = p == 0 ? 0.0 : 0.5;

  const std::size_t n = ts.size();
  const auto pg = periodogram_from_coeffs(real_fourier_transform(ts));
  const auto grid = fourier_frequencies(n);
  const auto fparam = ar_spectral_density(ArModel(s.rho, 1.0), grid);
  std::vector<double> q(grid_size(n), 0.0);
  BetaBasis::shared(n, prior.k_max)->mixture(stick_breaking(s.bern.V), s.bern.W, s.bern.k, q);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (is_endpoint_frequency(n, j)) continue;
    num += pg.ordinates[j];
    den += q[j] * std::pow(fparam[j], s.eta);
  }
  s.bern.tau = (num > 0.0 && den > 0.0 && std::isfinite(num / den)) ? num / den : 1.0;
  return s;
}

void NpcSampler::update_V(std::size_t l) {
  auto& V = state_.bern.V;
  const double old = V.at(l);
  const double proposal = rng_.uniform();
  const double log_prior_ratio = (prior_.M - 1.0) * (std::log1p(-proposal) - std::log1p(-old));
  V[l] = proposal;
  const auto stick = stick_breaking(V);
  basis_->mixture(stick, state_.bern.W, state_.bern.k, scratch_q_);
  const double ll = evaluate(scratch_q_, fparam_pow_, state_.bern.tau, working_);
  const bool ok = accept(rng_, log_prior_ratio + ll - loglik_);
  v_counter.record(ok);
  if (ok) {
    stick_ = stick;
    std::swap(q_, scratch_q_);
    loglik_ = ll;
  } else {
    V[l] = old;
  }
}

void NpcSampler::update_W(std::size_t l) {
  auto& W = state_.bern.W;
  const double old = W.at(l);
  const double proposal = rng_.uniform();
  double log_prior_ratio = 0.0;
  if (prior_.g0_a != 1.0 || prior_.g0_b != 1.0) {
    log_prior_ratio = (prior_.g0_a - 1.0) * (std::log(proposal) - std::log(old)) +
                      (prior_.g0_b - 1.0) * (std::log1p(-proposal) - std::log1p(-old));
  }
  W[l] = proposal;
  basis_->mixture(stick_, W, state_.bern.k, scratch_q_);
  const double ll = evaluate(scratch_q_, fparam_pow_, state_.bern.tau, working_);
  const bool ok = accept(rng_, log_prior_ratio + ll - loglik_);
  w_counter.record(ok);
  if (ok) {
    std::swap(q_, scratch_q_);
    loglik_ = ll;
  } else {
    W[l] = old;
  }
}

void NpcSampler::update_k() {
  const std::size_t k_max = prior_.k_max;
  if (!mcmc_.enumerate_k) {
    const std::size_t k = state_.bern.k;
    const bool up = rng_.uniform() < 0.5;
    const std::size_t proposal = up ? k + 1 : k - 1;
    if (proposal < 1 || proposal > k_max) {
      k_counter.record(false);
      return;
    }
    basis_->mixture(stick_, state_.bern.W, proposal, scratch_q_);
    const double ll = evaluate(scratch_q_, fparam_pow_, state_.bern.tau, working_);
    const bool ok = accept(rng_, log_k_prior_[proposal] - log_k_prior_[k] + ll - loglik_);
    k_counter.record(ok);
    if (ok) {
      state_.bern.k = proposal;
      std::swap(q_, scratch_q_);
      loglik_ = ll;
    }
    return;
  }

  std::vector<double> logp(k_max, kNegInf);
  for (std::size_t k = 1; k <= k_max; ++k) {
    basis_->mixture(stick_, state_.bern.W, k, scratch_q_);
    logp[k - 1] = log_k_prior_[k] + evaluate(scratch_q_, fparam_pow_, state_.bern.tau, working_);
  }
  const double norm = log_sum_exp(logp);
  if (!std::isfinite(norm)) throw NumericFailure("full conditional of k vanishes everywhere");
  k_probs_.resize(k_max);
  for (std::size_t i = 0; i < k_max; ++i) k_probs_[i] = std::exp(logp[i] - norm);
  const double u = rng_.uniform();
  double cum = 0.0;
  std::size_t chosen = k_max;
  for (std::size_t i = 0; i < k_max; ++i) {
    cum += k_probs_[i];
    if (u < cum) {
      chosen = i + 1;
      break;
    }
  }
  while (chosen > 1 && k_probs_[chosen - 1] == 0.0) --chosen;
  state_.bern.k = chosen;
  basis_->mixture(stick_, state_.bern.W, chosen, q_);
  loglik_ = evaluate(q_, fparam_pow_, state_.bern.tau, working_);
}

void NpcSampler::update_tau() {
  // C_n = tau D_n, so the likelihood is tau^(-n_used/2) exp(-Q_1 / (2 tau)) in tau.
  for (std::size_t j = 0; j < q_.size(); ++j) {
    const double c = q_[j] * fparam_pow_[j];
    scratch_corr_[j] = (c > 0.0 && std::isfinite(c)) ? c : 1.0;
  }
  const auto parts = lik_.parts(scratch_corr_, working_);
  const double quad = parts.working.quad;
  if (parts.n_used > 0 && !(quad > 0.0)) throw NumericFailure("nonpositive quadratic form in the tau update");
  const double shape = prior_.alpha_tau + 0.5 * static_cast<double>(parts.n_used);
  const double rate = prior_.beta_tau + 0.5 * quad;
  const double tau = rng_.inverse_gamma(shape, rate);
  if (!(tau > 0.0) || !std::isfinite(tau)) throw NumericFailure("tau draw is not a positive finite number");
  state_.bern.tau = tau;
  loglik_ = evaluate(q_, fparam_pow_, tau, working_);
}

void NpcSampler::update_tau_metropolis(double log_step_sd) {
  const double tau = state_.bern.tau;
  const double proposal = tau * std::exp(log_step_sd * rng_.normal());
  const double a = prior_.alpha_tau;
  const double b = prior_.beta_tau;
  auto log_target_prior = [a, b](double t) { return -(a + 1.0) * std::log(t) - b / t; };
  const double ll = evaluate(q_, fparam_pow_, proposal, working_);
  // log-scale random walk: Jacobian term log(proposal / tau).
  const double log_ratio = log_target_prior(proposal) - log_target_prior(tau) + ll - loglik_ +
                           std::log(proposal) - std::log(tau);
  if (accept(rng_, log_ratio)) {
    state_.bern.tau = proposal;
    loglik_ = ll;
  }
}

void NpcSampler::update_rho(std::size_t l) {
  const double old = state_.rho[l];
  const double proposal = old + adapter_.sd(l) * rng_.normal();
  if (std::abs(proposal) >= 1.0) {
    rho_counters[l].record(false);
    adapter_.record(l, false);
    return;
  }
  std::vector<double> rho(state_.rho.values().begin(), state_.rho.values().end());
  rho[l] = proposal;
  PacfVector candidate(std::move(rho));
  ArModel working(candidate, 1.0);
  auto fp = ar_spectral_density(working, grid_);
  for (std::size_t j = 0; j < fp.size(); ++j) scratch_pow_[j] = std::pow(fp[j], state_.eta - 1.0);
  const double ll = evaluate(q_, scratch_pow_, state_.bern.tau, working);
  const bool ok = accept(rng_, ll - loglik_);
  rho_counters[l].record(ok);
  adapter_.record(l, ok);
  if (ok) {
    state_.rho = std::move(candidate);
    working_ = std::move(working);
    fparam_ = std::move(fp);
    std::swap(fparam_pow_, scratch_pow_);
    loglik_ = ll;
  }
}

void NpcSampler::update_eta() {
  const double proposal = std::clamp(state_.eta + mcmc_.eta_proposal_sd * rng_.normal(), 0.0, 1.0);
  for (std::size_t j = 0; j < fparam_.size(); ++j) scratch_pow_[j] = std::pow(fparam_[j], proposal - 1.0);
  const double ll = evaluate(q_, scratch_pow_, state_.bern.tau, working_);
  const bool ok = accept(rng_, ll - loglik_);
  eta_counter.record(ok);
  if (ok) {
    state_.eta = proposal;
    std::swap(fparam_pow_, scratch_pow_);
    loglik_ = ll;
  }
}

void NpcSampler::sweep(bool adapting) {
  for (std::size_t l = 0; l < state_.bern.V.size(); ++l) update_V(l);
  for (std::size_t l = 0; l < state_.bern.W.size(); ++l) update_W(l);
  update_k();
  update_tau();
  if (p_ > 0) {
    for (std::size_t l = 0; l < p_; ++l) update_rho(l);
    update_eta();
  }
  adapter_.end_iteration(adapting);
}

std::vector<double> NpcSampler::current_psd() const {
  std::vector<double> out(q_.size());
  for (std::size_t j = 0; j < q_.size(); ++j) {
    out[j] = state_.bern.tau * q_[j] * fparam_[j] * fparam_pow_[j];
  }
  return out;
}

ChainOutput run_npc(const TimeSeries& ts, std::size_t p, const BernsteinDirichletConfig& prior,
                    const McmcConfig& mcmc) {
  mcmc.validate();
  const auto start = std::chrono::steady_clock::now();
  Rng rng(mcmc.seed);
  auto init = NpcSampler::initial_state(ts, p, prior, rng);
  DataLikelihood lik(ts, mcmc.omit_endpoints);
  NpcSampler sampler(lik, p, prior, mcmc, std::move(init), rng);

  ChainOutput out;
  out.method = p == 0 ? "np" : "npc";
  out.order = p;
  out.config = mcmc;
  out.psd = PosteriorSpectra(fourier_frequencies(ts.size()));
  out.traces.reserve(mcmc.retained());
  for (std::size_t it = 0; it < mcmc.iterations; ++it) {
    if (it == mcmc.burn_in) {
      sampler.v_counter = sampler.w_counter = sampler.k_counter = sampler.eta_counter = AcceptanceCounter{};
      for (auto& c : sampler.rho_counters) c = AcceptanceCounter{};
    }
    sampler.sweep(it < mcmc.burn_in);
    if (it < mcmc.burn_in || (it - mcmc.burn_in + 1) % mcmc.thin != 0) continue;
    const auto& st = sampler.state();
    out.psd.append(sampler.current_psd());
    TraceRecord rec;
    rec.k = st.bern.k;
    rec.tau = st.bern.tau;
    rec.eta = st.eta;
    rec.rho.assign(st.rho.values().begin(), st.rho.values().end());
    for (std::size_t l = 0; l < p; ++l) rec.rho_sd.push_back(sampler.adapter().sd(l));
    rec.log_likelihood = sampler.log_likelihood();
    out.traces.push_back(std::move(rec));
  }
  for (const auto& c : sampler.rho_counters) out.rho_acceptance.push_back(c.rate());
  out.eta_acceptance = sampler.eta_counter.rate();
  out.v_acceptance = sampler.v_counter.rate();
  out.w_acceptance = sampler.w_counter.rate();
  out.k_acceptance = sampler.k_counter.rate();
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

// ---------------------------------------------------------------------------

ArSampler::ArSampler(const TimeSeries& ts, std::size_t p, ArPriorConfig prior, McmcConfig mcmc, Rng rng)
    : ts_(ts), p_(p), prior_(prior), mcmc_(mcmc), rng_(rng) {
  mcmc_.validate();
  if (ts.size() <= p) throw InvalidInput("series must be longer than the AR order");
  if (!(prior_.alpha_sigma > 0.0 && prior_.beta_sigma > 0.0)) {
    throw InvalidInput("sigma2 hyperparameters must be positive");
  }
  const auto fit = yule_walker_fit(ts, p);
  rho_ = fit.pacf();
  sigma2_ = fit.sigma2();
  const double init_sd =
      mcmc_.initial_rho_sd > 0.0 ? mcmc_.initial_rho_sd : 1.0 / std::sqrt(static_cast<double>(ts.size()));
  adapter_ = ProposalAdapter(p_, init_sd, mcmc_.adapt_target, mcmc_.adapt_batch, mcmc_.adapt_step_cap);
  rho_counters.resize(p_);
  unit_ = ar_log_likelihood_parts(z(), ArModel(rho_, 1.0));
}

void ArSampler::set_state(PacfVector rho, double sigma2) {
  if (rho.size() != p_) throw InvalidInput("state has the wrong number of partial autocorrelations");
  if (!(sigma2 > 0.0)) throw InvalidInput("sigma2 must be positive");
  rho_ = std::move(rho);
  sigma2_ = sigma2;
  unit_ = ar_log_likelihood_parts(z(), ArModel(rho_, 1.0));
}

double ArSampler::log_likelihood() const {
  const double n = static_cast<double>(ts_.size());
  return unit_.log_norm - 0.5 * n * std::log(sigma2_) - 0.5 * unit_.quad / sigma2_;
}

void ArSampler::update_sigma2() {
  const double shape = prior_.alpha_sigma + 0.5 * static_cast<double>(ts_.size());
  const double rate = prior_.beta_sigma + 0.5 * unit_.quad;
  sigma2_ = rng_.inverse_gamma(shape, rate);
  if (!(sigma2_ > 0.0) || !std::isfinite(sigma2_)) throw NumericFailure("sigma2 draw is not a positive finite number");
}

void ArSampler::update_rho(std::size_t l) {
  const double proposal = rho_[l] + adapter_.sd(l) * rng_.normal();
  if (std::abs(proposal) >= 1.0) {
    rho_counters[l].record(false);
    adapter_.record(l, false);
    return;
  }
  std::vector<double> rho(rho_.values().begin(), rho_.values().end());
  rho[l] = proposal;
  PacfVector candidate(std::move(rho));
  const auto parts = ar_log_likelihood_parts(z(), ArModel(candidate, 1.0));
  const double log_ratio = (parts.log_norm - unit_.log_norm) - 0.5 * (parts.quad - unit_.quad) / sigma2_;
  const bool ok = accept(rng_, log_ratio);
  rho_counters[l].record(ok);
  adapter_.record(l, ok);
  if (ok) {
    rho_ = std::move(candidate);
    unit_ = parts;
  }
}

void ArSampler::sweep(bool adapting) {
  update_sigma2();
  for (std::size_t l = 0; l < p_; ++l) update_rho(l);
  adapter_.end_iteration(adapting);
}

std::vector<double> ArSampler::current_psd(const FrequencyGrid& grid) const {
  return ar_spectral_density(ArModel(rho_, sigma2_), grid);
}

ChainOutput run_ar(const TimeSeries& ts, std::size_t p, const ArPriorConfig& prior, const McmcConfig& mcmc) {
  mcmc.validate();
  const auto start = std::chrono::steady_clock::now();
  ArSampler sampler(ts, p, prior, mcmc, Rng(mcmc.seed));
  const auto grid = fourier_frequencies(ts.size());

  ChainOutput out;
  out.method = "ar";
  out.order = p;
  out.config = mcmc;
  out.psd = PosteriorSpectra(grid);
  out.traces.reserve(mcmc.retained());
  for (std::size_t it = 0; it < mcmc.iterations; ++it) {
    if (it == mcmc.burn_in) {
      for (auto& c : sampler.rho_counters) c = AcceptanceCounter{};
    }
    sampler.sweep(it < mcmc.burn_in);
    if (it < mcmc.burn_in || (it - mcmc.burn_in + 1) % mcmc.thin != 0) continue;
    out.psd.append(sampler.current_psd(grid));
    TraceRecord rec;
    rec.sigma2 = sampler.sigma2();
    rec.eta = 1.0;
    rec.rho.assign(sampler.rho().values().begin(), sampler.rho().values().end());
    for (std::size_t l = 0; l < p; ++l) rec.rho_sd.push_back(sampler.adapter().sd(l));
    rec.log_likelihood = sampler.log_likelihood();
    out.traces.push_back(std::move(rec));
  }
  for (const auto& c : sampler.rho_counters) out.rho_acceptance.push_back(c.rate());
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace npcspec
