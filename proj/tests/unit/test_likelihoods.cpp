#include <cmath>
#include <numbers>

#include "doctest.h"
#include "npcspec/error.hpp"
#include "npcspec/likelihoods.hpp"
#include "npcspec/rng.hpp"
#include "oracles.hpp"

using namespace npcspec;

namespace {

ArModel random_model(Rng& rng, std::size_t p) {
  std::vector<double> r(p);
  for (auto& v : r) v = 0.9 * (2.0 * rng.uniform() - 1.0);
  return ArModel(PacfVector(r), 0.4 + rng.uniform());
}

SpectralGridValues random_positive(Rng& rng, std::size_t n, SpectralRole role) {
  SpectralGridValues v;
  v.role = role;
  v.values.resize(grid_size(n));
  for (auto& x : v.values) x = 0.1 + 2.0 * rng.uniform();
  return v;
}

}  // namespace

TEST_CASE("slot bookkeeping") {
  CHECK(slot_frequency(0) == 0);
  CHECK(slot_frequency(1) == 1);
  CHECK(slot_frequency(2) == 1);
  CHECK(slot_frequency(7) == 4);
  CHECK(is_endpoint_slot(8, 7));
  CHECK_FALSE(is_endpoint_slot(9, 8));
  CHECK(used_slot_count(8, true) == 6);
  CHECK(used_slot_count(9, true) == 8);
  CHECK(used_slot_count(9, false) == 9);
}

TEST_CASE("correction diagonal layout") {
  SpectralGridValues c{{1.0, 2.0, 3.0, 4.0}, SpectralRole::correction};
  const auto d = build_correction_diagonal(c, 6, false);
  CHECK(d.diag == std::vector<double>{1.0, 2.0, 2.0, 3.0, 3.0, 4.0});
  const auto e = build_correction_diagonal(c, 6, true);
  CHECK(e.diag == std::vector<double>{1.0, 2.0, 2.0, 3.0, 3.0, 1.0});
  CHECK_THROWS_AS(build_correction_diagonal(c, 8, false), InvalidInput);
  SpectralGridValues bad{{1.0, -2.0, 3.0, 4.0}, SpectralRole::correction};
  CHECK_THROWS_AS(build_correction_diagonal(bad, 6, false), InvalidInput);
  SpectralGridValues zero_end{{0.0, 2.0, 3.0, 0.0}, SpectralRole::correction};
  CHECK_NOTHROW(build_correction_diagonal(zero_end, 6, true));
}

TEST_CASE("unit correction gives the exact AR likelihood") {
  Rng rng(31);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t p = static_cast<std::size_t>(rng.uniform_int(0, 5));
    const std::size_t n = static_cast<std::size_t>(rng.uniform_int(16, 100));
    const auto m = random_model(rng, p);
    const TimeSeries ts(simulate_ar_exact(m, n, rng));
    SpectralGridValues ones{std::vector<double>(grid_size(n), 1.0), SpectralRole::damped_correction};
    // c_eta = f_param^(1 - eta) makes the total correction one.
    SpectralGridValues c;
    const auto grid = fourier_frequencies(n);
    const double eta = rng.uniform();
    for (double lam : grid.freqs) c.values.push_back(std::pow(ar_spectral_density(m, lam), 1.0 - eta));
    const double exact = ar_log_likelihood(ts, m);
    CHECK(std::abs(corrected_ar_log_likelihood(ts, m, ones, 1.0, false) - exact) < 1e-10);
    CHECK(std::abs(corrected_ar_log_likelihood(ts, m, c, eta, false) - exact) < 1e-9);
  }
}

TEST_CASE("corrected likelihood equals the dense oracle for both endpoint conventions") {
  Rng rng(32);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t p = static_cast<std::size_t>(rng.uniform_int(0, 4));
    const std::size_t n = static_cast<std::size_t>(rng.uniform_int(static_cast<std::int64_t>(2 * p) + 4, 60));
    const auto m = random_model(rng, p);
    const TimeSeries ts(simulate_ar_exact(m, n, rng));
    const auto c = random_positive(rng, n, SpectralRole::damped_correction);
    const double eta = rng.uniform();
    for (bool omit : {false, true}) {
      const auto corr = total_correction(m, c, eta, n, omit);
      const double want = oracle::corrected_loglik(ts.values(), m.coeffs().a, m.sigma2(), corr, omit);
      const double got = corrected_ar_log_likelihood(ts, m, c, eta, omit);
      CAPTURE(n);
      CAPTURE(p);
      CAPTURE(omit);
      CHECK(std::abs(got - want) < 1e-9);
    }
  }
}

TEST_CASE("fast evaluation route matches the inverse-transform route") {
  Rng rng(33);
  for (int rep = 0; rep < 60; ++rep) {
    const std::size_t n = static_cast<std::size_t>(rng.uniform_int(5, 200));
    const std::size_t p = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(std::min<std::size_t>(8, n - 1))));
    const auto m = random_model(rng, p);
    const TimeSeries ts(simulate_ar_exact(m, n, rng));
    for (bool omit : {false, true}) {
      CorrectedLikelihood lik(ts, omit);
      const auto c = random_positive(rng, n, SpectralRole::correction);
      const auto a = lik.parts(c.values, m);
      const auto b = lik.parts_general(c.values, m);
      CHECK(a.n_used == b.n_used);
      CHECK(std::abs(a.value() - b.value()) < 1e-10);
      CHECK(std::abs(a.working.quad - b.working.quad) < 1e-10 * (1.0 + b.working.quad));
    }
  }
}

TEST_CASE("p = 0 reduces to the Whittle likelihood") {
  Rng rng(34);
  for (std::size_t n : {4, 5, 16, 17, 64, 129}) {
    std::vector<double> z(n);
    for (auto& v : z) v = rng.normal();
    const TimeSeries ts(z);
    const auto f = random_positive(rng, n, SpectralRole::true_psd);
    const auto pg = periodogram_direct(ts);
    for (bool omit : {false, true}) {
      const double w = whittle_log_likelihood(pg, f, omit);
      CHECK(std::abs(w - oracle::whittle(z, f.values, omit)) < 1e-10);
      CHECK(std::abs(corrected_log_likelihood_for_target(ts, ArModel(), f, omit) - w) < 1e-10);
    }
  }
}

TEST_CASE("innovation variance of the working model cancels for a fixed target") {
  Rng rng(35);
  const std::size_t n = 40;
  const auto m = random_model(rng, 2);
  const TimeSeries ts(simulate_ar_exact(m, n, rng));
  const auto f = random_positive(rng, n, SpectralRole::true_psd);
  const double base = corrected_log_likelihood_for_target(ts, m, f, false);
  const double base_omit = corrected_log_likelihood_for_target(ts, m, f, true);
  for (double s : {0.01, 0.5, 3.0, 250.0}) {
    const auto scaled = m.with_sigma2(m.sigma2() * s);
    CHECK(std::abs(corrected_log_likelihood_for_target(ts, scaled, f, false) - base) < 1e-10);
    // Omitted coefficients are standard normal zeros whatever sigma2 is, so
    // only the retained ones rescale.
    const double shift = 0.5 * (static_cast<double>(used_slot_count(n, true)) - static_cast<double>(n)) * std::log(s);
    CHECK(std::abs(corrected_log_likelihood_for_target(ts, scaled, f, true) - base_omit - shift) < 1e-10);
  }
}

TEST_CASE("total correction and eta extremes") {
  const ArModel m(PacfVector({0.5}), 1.0);
  const std::size_t n = 10;
  SpectralGridValues c{std::vector<double>(grid_size(n), 2.0), SpectralRole::damped_correction};
  const auto t1 = total_correction(m, c, 1.0, n, false);
  for (double v : t1) CHECK(v == doctest::Approx(2.0));
  const auto t0 = total_correction(m, c, 0.0, n, true);
  CHECK(t0[0] == 1.0);
  CHECK(t0.back() == 1.0);
  const auto grid = fourier_frequencies(n);
  CHECK(t0[2] == doctest::Approx(2.0 / ar_spectral_density(m, grid.freqs[2])));
  CHECK_THROWS_AS(total_correction(m, c, 1.5, n, false), InvalidInput);
  CHECK_THROWS_AS(corrected_ar_log_likelihood(TimeSeries({1.0, 2.0, 3.0, 4.0}), ArModel(PacfVector({0.1, 0.1, 0.1, 0.1}), 1.0),
                                              SpectralGridValues{std::vector<double>(3, 1.0)}, 0.5, false),
                  InvalidInput);
}

TEST_CASE("corrected draws are deterministic and reduce to the working model for unit correction") {
  const ArModel m(PacfVector({0.5}), 1.0);
  SpectralGridValues c;
  const auto grid = fourier_frequencies(32);
  for (double lam : grid.freqs) c.values.push_back(ar_spectral_density(m, lam));
  const auto a = sample_from_corrected(m, c, 0.0, 32, 77);
  const auto b = sample_from_corrected(m, c, 0.0, 32, 77);
  for (std::size_t i = 0; i < 32; ++i) REQUIRE(a[i] == b[i]);
  Rng rng(77);
  const auto direct = simulate_ar_exact(m, 32, rng);
  for (std::size_t i = 0; i < 32; ++i) CHECK(a[i] == doctest::Approx(direct[i]).epsilon(1e-10));
}
