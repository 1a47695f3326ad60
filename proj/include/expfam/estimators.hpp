#pragma once

// Closed-form MAP estimators for (mu, sigma) under independent gamma priors,
// in the flat-mu-prior limit. sigma solves the quadratic
//
//   q(sigma) = A sigma^2 - B sigma + C,
//     A = (beta2/n) xbar4
//     B = (1/n) xbar5 - (1 + xbar2) xbar1
//     C = ((alpha2-1)/n) xbar3 - (1 + xbar2)
//
// taking the "+" root (B + sqrt(B^2 - 4AC)) / (2A); then
//
//   mu = (1 + xbar2) / (sigma xbar4 - xbar3).
//
// Structural variants: fixed mu, fixed sigma, and sigma = g(mu) links, all
// from the same five averages. Failures are values, not exceptions: the
// Monte Carlo harness counts them per replication.

#include <optional>
#include <span>
#include <string>

#include "expfam/statistics.hpp"

namespace expfam {

enum class Method {
  closed_form,
  closed_form_power,
  fixed_mu,
  fixed_sigma,
  linked,
  map_numeric,
  ml_numeric,
};

enum class Failure {
  none,
  negative_discriminant,
  nonpositive_root,
  zero_quadratic_coefficient,
  degenerate_denominator,
  nonpositive_estimate,
  zero_xbar4,
  zero_xbar3,
  no_bracket,
  non_convergence,
  numeric_range,
};

const char* method_name(Method m);
const char* failure_name(Failure f);

struct Diagnostics {
  std::optional<double> discriminant;   // B^2 - 4AC when the quadratic ran
  std::optional<double> residual_sigma_eq;  // d log posterior / d sigma at the estimate
  std::optional<double> residual_mu_eq;     // p-equation residual at the estimate
};

struct Estimate {
  std::optional<double> mu_hat;
  std::optional<double> sigma_hat;
  Method method = Method::closed_form;
  Diagnostics diagnostics;
  Failure failure = Failure::none;
  bool ok() const { return failure == Failure::none; }
};

struct ScalarResult {
  std::optional<double> value;
  Failure failure = Failure::none;
  std::optional<double> discriminant;
  bool ok() const { return failure == Failure::none; }
};

// sigma from the quadratic; exact linear limit C/B when beta2 < 1e-14.
ScalarResult estimate_sigma(const SampleStats& stats, const SigmaPrior& prior);

// mu = (1 + xbar2) / (sigma xbar4 - xbar3); requires a positive denominator.
ScalarResult mu_of_sigma(const SampleStats& stats, double sigma);

// Fixed-mu variant: sigma = [(1 + xbar2)/mu0 + xbar3] / xbar4.
ScalarResult estimate_sigma_fixed_mu(const SampleStats& stats, double mu0);

// Fixed-sigma variant: mu = (1 + xbar2) / (sigma0 xbar4 - xbar3).
ScalarResult estimate_mu_fixed_sigma(const SampleStats& stats, double sigma0);

// Linked variant sigma = g(mu): solves mu [g(mu) xbar4 - xbar3] = 1 + xbar2.
// Reciprocal links g = c/mu are closed-form; general links bisect over
// mu in [1e-8, 1e8].
ScalarResult estimate_mu_linked(const SampleStats& stats, const SigmaLink& link);

// Proposition-style power path: stats from T = x^{-s}, then the same core.
Estimate estimate_power(std::span<const double> sample, double s, const SigmaPrior& prior);

// Full driver: dispatches on the spec's fixed/linked structure, fills
// diagnostics. Fixed parameters are reported absent (they are not estimates).
Estimate estimate_closed_form(const DistributionSpec& spec,
                              std::span<const double> sample, const SigmaPrior& prior);

// n (1 + xbar2 - mu (sigma xbar4 - xbar3)): the flat-prior-limit mu equation.
double p_equation_residual(const SampleStats& stats, double mu, double sigma);

// n mu / sigma - mu n xbar1 + (alpha2 - 1)/sigma - beta2: d log posterior / d sigma.
double sigma_equation_residual(const SampleStats& stats, const SigmaPrior& prior,
                               double mu, double sigma);

// Residual of the exact stationarity equation in mu (digamma form):
//   n [log(mu sigma) + 1 - psi(mu)] + n mean_log_T - sigma n mean_T
//     + (alpha1 - 1)/mu - beta1.
// Reported as a diagnostic for fixed-sigma fits; never enforced. (mean_log_T
// equals xbar3 only for pure-power generators, hence the explicit argument.)
double digamma_residual(std::size_t n, double mean_T, double mean_log_T,
                        double alpha1, double beta1, double mu, double sigma);

}  // namespace expfam
