#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "expfam/baselines.hpp"
#include "expfam/special_functions.hpp"
#include "oracles.hpp"

using namespace expfam;

namespace {

using Params = std::vector<std::pair<std::string, double>>;

std::vector<double> gamma_sample(std::mt19937_64& rng, std::size_t n, double shape,
                                 double rate) {
  std::gamma_distribution<double> d(shape, 1.0 / rate);
  std::vector<double> xs(n);
  for (auto& x : xs) x = d(rng);
  return xs;
}

// Density-by-density log-likelihood, re-typed from the family definition.
long double naive_ll(const DistributionSpec& spec, const std::vector<double>& xs,
                     long double mu, long double sigma) {
  long double ll = 0.0L;
  for (double x : xs) {
    const long double T = eval_T(spec.generator, x);
    const long double T1 = eval_T_prime(spec.generator, x);
    ll += mu * std::log(mu * sigma) - std::lgamma(mu) + std::log(std::abs(T1)) +
          (mu - 1.0L) * std::log(T) - mu * sigma * T;
  }
  return ll;
}

DistributionSpec free_spec(const std::string& name, const Params& params) {
  DistributionSpec spec;
  spec.name = name;
  spec.generator = make_generator(name, params);
  spec.canonical = {2.0, 1.0};
  return spec;
}

}  // namespace

TEST_CASE("log_likelihood equals the per-observation definition") {
  std::mt19937_64 rng(4401);
  const std::vector<std::pair<std::string, Params>> gens = {
      {"gamma", {}},
      {"inverse_gamma", {}},
      {"weibull", {{"delta", 2.0}}},
      {"gompertz", {{"delta", 0.9}}},
      {"dagum", {{"c", 1.6}}},
  };
  std::lognormal_distribution<double> ld(0.0, 0.5);
  std::uniform_real_distribution<double> up(0.3, 4.0);
  for (const auto& [name, params] : gens) {
    const DistributionSpec spec = free_spec(name, params);
    for (int rep = 0; rep < 20; ++rep) {
      std::vector<double> xs(35);
      for (auto& x : xs) x = ld(rng);
      const double mu = up(rng), sigma = up(rng);
      CAPTURE(name);
      const double got = log_likelihood(spec, xs, mu, sigma);
      const long double want = naive_ll(spec, xs, mu, sigma);
      CHECK(std::abs(got - static_cast<double>(want)) < 1e-11 * (1.0 + std::abs(got)));
    }
  }
}

TEST_CASE("log_posterior adds the two gamma prior kernels") {
  std::mt19937_64 rng(4402);
  const DistributionSpec spec = free_spec("gamma", {});
  const auto xs = gamma_sample(rng, 30, 2.0, 2.0);
  const HyperParams hp{0.7, 1.3, 2.2, 0.4};
  const double mu = 1.7, sigma = 0.8;
  const double want = log_likelihood(spec, xs, mu, sigma) +
                      (hp.alpha1 - 1.0) * std::log(mu) - hp.beta1 * mu +
                      (hp.alpha2 - 1.0) * std::log(sigma) - hp.beta2 * sigma;
  CHECK(log_posterior(spec, xs, mu, sigma, hp) == doctest::Approx(want).epsilon(1e-14));
  // flat_hyper collapses the posterior onto the likelihood exactly
  CHECK(log_posterior(spec, xs, mu, sigma, flat_hyper) == log_likelihood(spec, xs, mu, sigma));
}

TEST_CASE("analytic score matches finite differences of the posterior") {
  std::mt19937_64 rng(4403);
  const std::vector<std::pair<std::string, Params>> gens = {
      {"gamma", {}},
      {"weibull", {{"delta", 1.5}}},
      {"gompertz", {{"delta", 0.8}}},
      {"burr_xii", {{"c", 2.0}}},
  };
  std::lognormal_distribution<double> ld(0.0, 0.4);
  std::uniform_real_distribution<double> up(0.4, 3.0);
  const HyperParams hp{0.3, 0.9, 1.8, 0.2};
  for (const auto& [name, params] : gens) {
    const DistributionSpec spec = free_spec(name, params);
    for (int rep = 0; rep < 10; ++rep) {
      std::vector<double> xs(25);
      for (auto& x : xs) x = ld(rng);
      const double mu = up(rng), sigma = up(rng);
      const Score g = score(spec, xs, mu, sigma, hp);
      const double fd_mu = oracle::fd1(
          [&](double m) { return log_posterior(spec, xs, m, sigma, hp); }, mu, 1e-6 * mu);
      const double fd_sigma = oracle::fd1(
          [&](double s) { return log_posterior(spec, xs, mu, s, hp); }, sigma, 1e-6 * sigma);
      CAPTURE(name);
      CHECK(std::abs(g.d_mu - fd_mu) < 1e-5 * (1.0 + std::abs(fd_mu)));
      CHECK(std::abs(g.d_sigma - fd_sigma) < 1e-5 * (1.0 + std::abs(fd_sigma)));
    }
  }
}

TEST_CASE("ML on gamma data matches the classical gamma-MLE oracle") {
  std::mt19937_64 rng(4404);
  const DistributionSpec spec = free_spec("gamma", {});
  for (int rep = 0; rep < 10; ++rep) {
    const auto xs = gamma_sample(rng, 60, 2.0, 2.0);
    const NumericFit fit = fit_ml_numeric(spec, xs);
    REQUIRE(fit.estimate.ok());
    const auto [shape, rate] = oracle::gamma_mle(xs);
    // family rate is mu * sigma, so sigma = rate / shape
    CHECK(std::abs(*fit.estimate.mu_hat - shape) < 1e-6 * shape);
    CHECK(std::abs(*fit.estimate.sigma_hat - rate / shape) < 1e-6 * (rate / shape));
  }
}

TEST_CASE("MAP estimates are stationary local maxima") {
  std::mt19937_64 rng(4405);
  const HyperParams hp;  // 0.01 x 4
  const std::vector<std::pair<std::string, Params>> gens = {
      {"gamma", {}},
      {"weibull", {{"delta", 2.0}}},
      {"gompertz", {{"delta", 1.1}}},
  };
  std::lognormal_distribution<double> ld(0.0, 0.5);
  for (const auto& [name, params] : gens) {
    const DistributionSpec spec = free_spec(name, params);
    for (int rep = 0; rep < 10; ++rep) {
      std::vector<double> xs(40);
      for (auto& x : xs) x = ld(rng);
      const NumericFit fit = fit_map_numeric(spec, xs, hp);
      CAPTURE(name);
      REQUIRE(fit.estimate.ok());
      CHECK(fit.report.converged);
      const double mu = *fit.estimate.mu_hat, sigma = *fit.estimate.sigma_hat;
      const Score g = score(spec, xs, mu, sigma, hp);
      CHECK(std::hypot(g.d_mu, g.d_sigma) <= 1e-7);
      const double at = log_posterior(spec, xs, mu, sigma, hp);
      for (double f : {0.99, 1.01}) {
        CHECK(at >= log_posterior(spec, xs, mu * f, sigma, hp));
        CHECK(at >= log_posterior(spec, xs, mu, sigma * f, hp));
      }
    }
  }
}

TEST_CASE("ML is MAP at flat hyperparameters, bit for bit") {
  std::mt19937_64 rng(4406);
  const DistributionSpec spec = free_spec("weibull", {{{"delta", 1.5}}});
  for (int rep = 0; rep < 10; ++rep) {
    std::vector<double> xs(30);
    std::lognormal_distribution<double> ld(0.0, 0.4);
    for (auto& x : xs) x = ld(rng);
    const NumericFit ml = fit_ml_numeric(spec, xs);
    const NumericFit map = fit_map_numeric(spec, xs, flat_hyper);
    REQUIRE(ml.estimate.ok());
    CHECK(*ml.estimate.mu_hat == *map.estimate.mu_hat);
    CHECK(*ml.estimate.sigma_hat == *map.estimate.sigma_hat);
    CHECK(ml.report.objective == map.report.objective);
  }
}

TEST_CASE("fixed-mu rows use the closed-form conditional mode") {
  std::mt19937_64 rng(4407);
  const auto spec = registry_lookup("weibull", Params{{"beta", 1.0}, {"delta", 2.0}});
  std::exponential_distribution<double> ed(1.0);
  std::vector<double> xs(50);
  for (auto& x : xs) x = std::sqrt(ed(rng));
  const HyperParams hp;
  const NumericFit fit = fit_map_numeric(spec, xs, hp);
  REQUIRE(fit.estimate.ok());
  CHECK(!fit.estimate.mu_hat);
  REQUIRE(fit.estimate.sigma_hat);
  // (n mu0 + alpha2 - 1) / (mu0 sum T + beta2), re-typed
  long double sum_T = 0.0L;
  for (double x : xs) sum_T += eval_T(spec.generator, x);
  const double want = (50.0 * 1.0 + hp.alpha2 - 1.0) /
                      (1.0 * static_cast<double>(sum_T) + hp.beta2);
  CHECK(*fit.estimate.sigma_hat == doctest::Approx(want).epsilon(1e-13));
  CHECK(std::abs(score(spec, xs, 1.0, *fit.estimate.sigma_hat, hp).d_sigma) < 1e-8);
}

TEST_CASE("fixed-sigma rows zero the mu-score at the fixed sigma") {
  std::mt19937_64 rng(4408);
  const auto spec = registry_lookup(
      "modified_weibull_extension", Params{{"lambda", 2.0}, {"alpha", 1.5}, {"beta", 1.2}});
  std::gamma_distribution<double> gd(3.0, 1.0 / 3.0);
  std::vector<double> xs(60);
  for (auto& x : xs) x = eval_T_inverse(spec.generator, gd(rng));
  const HyperParams hp;
  const NumericFit fit = fit_map_numeric(spec, xs, hp);
  REQUIRE(fit.estimate.ok());
  CHECK(!fit.estimate.sigma_hat);
  REQUIRE(fit.estimate.mu_hat);
  CHECK(std::abs(score(spec, xs, *fit.estimate.mu_hat, 1.0, hp).d_mu) < 1e-7);
}

TEST_CASE("linked rows maximize the profiled posterior") {
  std::mt19937_64 rng(4409);
  const auto spec = registry_lookup("chi_squared", Params{{"nu", 5.0}});
  std::gamma_distribution<double> gd(2.5, 1.0 / (2.5 * 0.2));
  std::vector<double> xs(80);
  for (auto& x : xs) x = gd(rng);
  const HyperParams hp;
  const NumericFit fit = fit_map_numeric(spec, xs, hp);
  REQUIRE(fit.estimate.ok());
  REQUIRE(fit.estimate.mu_hat);
  REQUIRE(fit.estimate.sigma_hat);
  const double mu = *fit.estimate.mu_hat;
  CHECK(*fit.estimate.sigma_hat == doctest::Approx(0.5 / mu).epsilon(1e-14));
  auto profile = [&](double m) { return log_posterior(spec, xs, m, 0.5 / m, hp); };
  const double at = profile(mu);
  CHECK(std::abs(oracle::fd1(profile, mu, 1e-5 * mu)) < 1e-4 * (1.0 + std::abs(at)));
  CHECK(at >= profile(mu * 0.99));
  CHECK(at >= profile(mu * 1.01));
}

TEST_CASE("a good init converges immediately; bad inputs throw") {
  std::mt19937_64 rng(4410);
  const DistributionSpec spec = free_spec("gamma", {});
  const auto xs = gamma_sample(rng, 50, 2.0, 2.0);
  const NumericFit direct = fit_ml_numeric(spec, xs);
  REQUIRE(direct.estimate.ok());
  const NumericFit warm = fit_ml_numeric(
      spec, xs, CanonicalParams{*direct.estimate.mu_hat, *direct.estimate.sigma_hat});
  REQUIRE(warm.estimate.ok());
  CHECK(warm.report.iterations == 0);  // already stationary
  CHECK(*warm.estimate.mu_hat == *direct.estimate.mu_hat);

  CHECK_THROWS_AS(fit_ml_numeric(spec, std::vector<double>{1.0}), std::invalid_argument);
  CHECK_THROWS_AS(log_likelihood(spec, xs, 0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(log_likelihood(spec, xs, 1.0, -1.0), std::domain_error);
}

TEST_CASE("degenerate data is reported as failure, not thrown") {
  // all-equal observations make the likelihood unbounded in mu
  const DistributionSpec spec = free_spec("gamma", {});
  const std::vector<double> xs(12, 3.0);
  const NumericFit fit = fit_map_numeric(spec, xs, HyperParams{});
  if (!fit.estimate.ok()) {
    CHECK(fit.estimate.failure == Failure::non_convergence);
  } else {
    // if it converged, the report must be self-consistent
    CHECK(fit.report.final_gradient_norm <= 1e-8);
  }
}
