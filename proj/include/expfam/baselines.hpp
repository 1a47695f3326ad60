#pragma once

// Traditional numeric MAP and ML fitters used as comparison baselines.
//
// The log-posterior at p = 1 groups into per-sample sufficient sums
// (sum T, sum log T, sum log|T'|), so each optimizer evaluation is O(1)
// after a single pass over the data:
//
//   ll(mu, sigma) = n [mu log(mu sigma) - lnGamma(mu)] + sum log|T'|
//                   + (mu - 1) sum log T - mu sigma sum T
//   lp = ll + (alpha1 - 1) log mu - beta1 mu + (alpha2 - 1) log sigma - beta2 sigma
//
// Strategy: Newton polish on the analytic score from the closed-form init
// (finite-difference Hessian), with a log-space Nelder-Mead fallback when
// Newton stalls. Converged when the score norm falls to 1e-8; hard cap 500
// iterations. ML is MAP at hp = (1, 0, 1, 0) — same code path, so the
// nesting identity is bitwise.

#include <optional>
#include <span>

#include "expfam/estimators.hpp"

namespace expfam {

struct Score {
  double d_mu = 0.0;
  double d_sigma = 0.0;
};

struct OptimizerReport {
  bool converged = false;
  int iterations = 0;
  double final_gradient_norm = 0.0;
  double objective = 0.0;  // log-posterior (log-likelihood for ML) at the result
};

struct NumericFit {
  Estimate estimate;
  OptimizerReport report;
};

// Flat hyperparameters that reduce the posterior to the likelihood exactly.
inline constexpr HyperParams flat_hyper{1.0, 0.0, 1.0, 0.0};

double log_likelihood(const DistributionSpec& spec, std::span<const double> sample,
                      double mu, double sigma);

double log_posterior(const DistributionSpec& spec, std::span<const double> sample,
                     double mu, double sigma, const HyperParams& hp);

// Analytic gradient of log_posterior in (mu, sigma); mu-component uses digamma.
Score score(const DistributionSpec& spec, std::span<const double> sample,
            double mu, double sigma, const HyperParams& hp);

// Numeric MAP over the spec's free coordinates (fixed/linked structure is
// honored: constrained rows optimize the free coordinate only). Requires
// sample size >= 2. Non-convergence is reported, never thrown.
NumericFit fit_map_numeric(const DistributionSpec& spec, std::span<const double> sample,
                           const HyperParams& hp,
                           std::optional<CanonicalParams> init = std::nullopt);

NumericFit fit_ml_numeric(const DistributionSpec& spec, std::span<const double> sample,
                          std::optional<CanonicalParams> init = std::nullopt);

}  // namespace expfam
