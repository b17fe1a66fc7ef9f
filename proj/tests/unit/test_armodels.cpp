#include <cmath>
#include <limits>
#include <numbers>

#include "doctest.h"
#include "npcspec/armodels.hpp"
#include "npcspec/error.hpp"
#include "npcspec/rng.hpp"
#include "oracles.hpp"

using namespace npcspec;

namespace {

std::vector<double> random_pacf(Rng& rng, std::size_t p, double bound = 0.95) {
  std::vector<double> r(p);
  for (auto& v : r) v = bound * (2.0 * rng.uniform() - 1.0);
  return r;
}

}  // namespace

TEST_CASE("PacfVector rejects values on or outside the unit interval") {
  CHECK_THROWS_AS(PacfVector({0.5, 1.0}), InvalidInput);
  CHECK_THROWS_AS(PacfVector({-1.2}), InvalidInput);
  CHECK_THROWS_AS(PacfVector({NAN}), InvalidInput);
  CHECK_NOTHROW(PacfVector({0.99, -0.99}));
}

TEST_CASE("pacf_to_ar closed forms") {
  CHECK(pacf_to_ar(PacfVector({0.3})).a[0] == 0.3);
  const double r1 = 0.4, r2 = -0.7;
  const auto a = pacf_to_ar(PacfVector({r1, r2})).a;
  CHECK(a[0] == r1 * (1.0 - r2));
  CHECK(a[1] == r2);
  CHECK(pacf_to_ar(PacfVector()).a.empty());
}

TEST_CASE("PACF and AR coefficients round trip") {
  Rng rng(11);
  for (int rep = 0; rep < 300; ++rep) {
    const std::size_t p = 1 + static_cast<std::size_t>(rng.uniform_int(0, 14));
    const PacfVector rho(random_pacf(rng, p));
    const auto a = pacf_to_ar(rho);
    CHECK(is_causal(a.a));
    const auto back = ar_to_pacf(a);
    for (std::size_t l = 0; l < p; ++l) CHECK(std::abs(back[l] - rho[l]) < 1e-10);
  }
}

TEST_CASE("ar_to_pacf rejects non-causal coefficients") {
  CHECK_THROWS_AS(ar_to_pacf(ArCoefficients{{1.2}}), InvalidInput);
  CHECK_THROWS_AS(ar_to_pacf(ArCoefficients{{0.5, 0.6}}), InvalidInput);
  CHECK_FALSE(is_causal(std::vector<double>{1.0}));
  CHECK(is_causal(std::vector<double>{0.75, -0.5}));
}

TEST_CASE("partial autocorrelations agree with Durbin-Levinson on the true autocorrelations") {
  Rng rng(12);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t p = 1 + static_cast<std::size_t>(rng.uniform_int(0, 4));
    const auto rho = random_pacf(rng, p, 0.8);
    const auto a = pacf_to_ar(PacfVector(rho)).a;
    const auto g = oracle::ar_autocovariance(a, 1.0, p);
    // Durbin-Levinson written out on the oracle autocovariances.
    std::vector<double> phi, pacf;
    double v = g[0];
    for (std::size_t k = 1; k <= p; ++k) {
      double num = g[k];
      for (std::size_t l = 1; l < k; ++l) num -= phi[l - 1] * g[k - l];
      const double kappa = num / v;
      std::vector<double> next(k);
      for (std::size_t l = 1; l < k; ++l) next[l - 1] = phi[l - 1] - kappa * phi[k - l - 1];
      next[k - 1] = kappa;
      phi = next;
      v *= 1.0 - kappa * kappa;
      pacf.push_back(kappa);
    }
    for (std::size_t l = 0; l < p; ++l) CHECK(pacf[l] == doctest::Approx(rho[l]).epsilon(1e-9));
  }
}

TEST_CASE("spectral densities") {
  const ArModel m(PacfVector({0.6, -0.3}), 2.0);
  for (double lam : {0.0, 0.3, 1.7, std::numbers::pi}) {
    CHECK(ar_spectral_density(m, lam) == doctest::Approx(oracle::ar_psd(m.coeffs().a, 2.0, lam)).epsilon(1e-12));
  }
  CHECK(ar_spectral_density(ArModel(), 1.0) == doctest::Approx(1.0 / (2.0 * std::numbers::pi)));
  const ArmaSpec ma{{}, {0.8}};
  const double lam = 0.9;
  const double expect = (1.0 + 0.64 + 1.6 * std::cos(lam)) / (2.0 * std::numbers::pi);
  CHECK(arma_spectral_density(ma, lam) == doctest::Approx(expect).epsilon(1e-12));
  const ArmaSpec ar{{0.6 * (1.0 + 0.3), -0.3}, {}};
  CHECK(arma_spectral_density(ar, lam, 2.0) == doctest::Approx(ar_spectral_density(m, lam)).epsilon(1e-12));
}

TEST_CASE("autocovariances agree with the MA(infinity) oracle") {
  const ArModel m(PacfVector({0.9, -0.5, 0.2}), 1.5);
  const auto g = ar_autocovariance(m, 10);
  const auto o = oracle::ar_autocovariance(m.coeffs().a, 1.5, 10);
  for (std::size_t h = 0; h <= 10; ++h) CHECK(g[h] == doctest::Approx(o[h]).epsilon(1e-10));
}

TEST_CASE("exact AR log-likelihood equals the dense Toeplitz Cholesky oracle") {
  Rng rng(13);
  for (int rep = 0; rep < 25; ++rep) {
    const std::size_t p = static_cast<std::size_t>(rng.uniform_int(0, 5));
    const std::size_t n = static_cast<std::size_t>(rng.uniform_int(static_cast<std::int64_t>(p) + 4, 90));
    const ArModel m(PacfVector(random_pacf(rng, p, 0.9)), 0.3 + 2.0 * rng.uniform());
    const auto z = simulate_ar_exact(m, n, rng);
    const double got = ar_log_likelihood(z, m);
    const double want = oracle::ar_loglik(z, m.coeffs().a, m.sigma2());
    CAPTURE(p);
    CAPTURE(n);
    CHECK(std::abs(got - want) < 1e-9);
  }
  CHECK_THROWS_AS(ar_log_likelihood(std::vector<double>{1.0, 2.0}, ArModel(PacfVector({0.1, 0.2}), 1.0)), InvalidInput);
}

TEST_CASE("Yule-Walker recovers an AR(2) and rejects degenerate input") {
  const auto ts = simulate_arma(ArmaSpec{{0.75, -0.5}, {}}, 20000, 5);
  const auto fit = yule_walker_fit(ts, 2);
  CHECK(fit.coeffs().a[0] == doctest::Approx(0.75).epsilon(0.05));
  CHECK(fit.coeffs().a[1] == doctest::Approx(-0.5).epsilon(0.05));
  CHECK(fit.sigma2() == doctest::Approx(1.0).epsilon(0.05));
  CHECK_THROWS_AS(yule_walker_fit(TimeSeries(std::vector<double>(10, 1.0)), 1), InvalidInput);
  CHECK_THROWS_AS(yule_walker_fit(ts, 20000), InvalidInput);
  const auto wn = yule_walker_fit(ts, 0);
  CHECK(wn.p() == 0);
}

TEST_CASE("sample autocovariance is mean corrected with denominator n") {
  const std::vector<double> z{1.0, 3.0, 2.0, 6.0};
  const auto g = sample_autocovariance(z, 1);
  // mean 3: deviations -2, 0, -1, 3
  CHECK(g[0] == doctest::Approx((4.0 + 0.0 + 1.0 + 9.0) / 4.0));
  CHECK(g[1] == doctest::Approx((0.0 + 0.0 - 3.0) / 4.0));
}

TEST_CASE("simulation is deterministic and has the right variance") {
  const ArmaSpec spec{{0.5}, {0.4}};
  const auto a = simulate_arma(spec, 500, 9);
  const auto b = simulate_arma(spec, 500, 9);
  for (std::size_t i = 0; i < 500; ++i) REQUIRE(a[i] == b[i]);
  const auto long_run = simulate_arma(spec, 200000, 10);
  double s = 0.0;
  for (std::size_t i = 0; i < long_run.size(); ++i) s += long_run[i] * long_run[i];
  // ARMA(1,1) variance (1 + 2 a b + b^2) / (1 - a^2)
  CHECK(s / 200000.0 == doctest::Approx((1.0 + 0.4 + 0.16) / 0.75).epsilon(0.03));
  CHECK_THROWS_AS(simulate_arma(ArmaSpec{{1.1}, {}}, 100, 1), InvalidInput);
}

TEST_CASE("exact simulation reproduces the stationary lag-one covariance") {
  const ArModel m(PacfVector({0.95}), 1.0);
  Rng rng(21);
  double s0 = 0.0, s1 = 0.0;
  const int reps = 40000;
  for (int r = 0; r < reps; ++r) {
    const auto z = simulate_ar_exact(m, 4, rng);
    s0 += z[0] * z[0];
    s1 += z[0] * z[1];
  }
  const double g0 = 1.0 / (1.0 - 0.95 * 0.95);
  CHECK(s0 / reps == doctest::Approx(g0).epsilon(0.04));
  CHECK(s1 / reps == doctest::Approx(0.95 * g0).epsilon(0.04));
}
