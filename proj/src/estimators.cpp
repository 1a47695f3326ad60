#include "expfam/estimators.hpp"

#include <cmath>

#include "expfam/special_functions.hpp"

namespace expfam {

namespace {

ScalarResult fail(Failure f, std::optional<double> disc = std::nullopt) {
  ScalarResult r;
  r.failure = f;
  r.discriminant = disc;
  return r;
}

ScalarResult ok(double v, std::optional<double> disc = std::nullopt) {
  ScalarResult r;
  r.value = v;
  r.discriminant = disc;
  return r;
}

}  // namespace

const char* method_name(Method m) {
  switch (m) {
    case Method::closed_form: return "closed_form";
    case Method::closed_form_power: return "closed_form_power";
    case Method::fixed_mu: return "fixed_mu";
    case Method::fixed_sigma: return "fixed_sigma";
    case Method::linked: return "linked";
    case Method::map_numeric: return "map_numeric";
    case Method::ml_numeric: return "ml_numeric";
  }
  return "unknown";
}

const char* failure_name(Failure f) {
  switch (f) {
    case Failure::none: return "none";
    case Failure::negative_discriminant: return "negative_discriminant";
    case Failure::nonpositive_root: return "nonpositive_root";
    case Failure::zero_quadratic_coefficient: return "zero_quadratic_coefficient";
    case Failure::degenerate_denominator: return "degenerate_denominator";
    case Failure::nonpositive_estimate: return "nonpositive_estimate";
    case Failure::zero_xbar4: return "zero_xbar4";
    case Failure::zero_xbar3: return "zero_xbar3";
    case Failure::no_bracket: return "no_bracket";
    case Failure::non_convergence: return "non_convergence";
    case Failure::numeric_range: return "numeric_range";
  }
  return "unknown";
}

ScalarResult estimate_sigma(const SampleStats& stats, const SigmaPrior& prior) {
  const double n = static_cast<double>(stats.n);
  const double w = 1.0 + stats.xbar2;
  const double A = prior.beta2 / n * stats.xbar4;
  const double B = stats.xbar5 / n - w * stats.xbar1;
  const double C = (prior.alpha2 - 1.0) / n * stats.xbar3 - w;
  if (stats.xbar4 == 0.0) return fail(Failure::zero_quadratic_coefficient);
  const double disc = B * B - 4.0 * A * C;

  if (prior.beta2 < 1e-14 || A == 0.0) {
    // Exact linear limit of the quadratic: -B sigma + C = 0.
    if (B == 0.0) return fail(Failure::zero_quadratic_coefficient, disc);
    const double sigma = C / B;
    if (!(sigma > 0.0) || !std::isfinite(sigma))
      return fail(Failure::nonpositive_root, disc);
    return ok(sigma, disc);
  }

  if (disc < 0.0) return fail(Failure::negative_discriminant, disc);
  const double sq = std::sqrt(disc);
  // "+" root; the B < 0 branch is the same root written without cancellation.
  double sigma;
  if (B >= 0.0) sigma = (B + sq) / (2.0 * A);
  else if (B - sq != 0.0) sigma = 2.0 * C / (B - sq);
  else sigma = (B + sq) / (2.0 * A);
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    return fail(Failure::nonpositive_root, disc);
  return ok(sigma, disc);
}

ScalarResult mu_of_sigma(const SampleStats& stats, double sigma) {
  const double den = sigma * stats.xbar4 - stats.xbar3;
  if (!(den > 0.0) || !std::isfinite(den)) return fail(Failure::degenerate_denominator);
  const double mu = (1.0 + stats.xbar2) / den;
  if (!(mu > 0.0) || !std::isfinite(mu)) return fail(Failure::nonpositive_estimate);
  return ok(mu);
}

ScalarResult estimate_sigma_fixed_mu(const SampleStats& stats, double mu0) {
  if (!(mu0 > 0.0)) throw std::invalid_argument("estimate_sigma_fixed_mu: mu0 must be positive");
  if (stats.xbar4 == 0.0) return fail(Failure::zero_xbar4);
  const double sigma = ((1.0 + stats.xbar2) / mu0 + stats.xbar3) / stats.xbar4;
  if (!(sigma > 0.0) || !std::isfinite(sigma)) return fail(Failure::nonpositive_estimate);
  return ok(sigma);
}

ScalarResult estimate_mu_fixed_sigma(const SampleStats& stats, double sigma0) {
  if (!(sigma0 > 0.0)) throw std::invalid_argument("estimate_mu_fixed_sigma: sigma0 must be positive");
  return mu_of_sigma(stats, sigma0);
}

ScalarResult estimate_mu_linked(const SampleStats& stats, const SigmaLink& link) {
  if (link.reciprocal) {
    // mu [ (c/mu) xbar4 - xbar3 ] = 1 + xbar2  =>  mu = (c xbar4 - (1+xbar2)) / xbar3.
    if (stats.xbar3 == 0.0) return fail(Failure::zero_xbar3);
    const double mu = (link.c * stats.xbar4 - (1.0 + stats.xbar2)) / stats.xbar3;
    if (!(mu > 0.0) || !std::isfinite(mu)) return fail(Failure::nonpositive_estimate);
    return ok(mu);
  }
  if (!link.g) throw std::invalid_argument("estimate_mu_linked: general link requires g");
  const double w = 1.0 + stats.xbar2;
  auto phi = [&](double mu) { return mu * (link.g(mu) * stats.xbar4 - stats.xbar3) - w; };
  double lo = 1e-8, hi = 1e8;
  double flo = phi(lo), fhi = phi(hi);
  if (!std::isfinite(flo) || !std::isfinite(fhi)) return fail(Failure::numeric_range);
  if (flo == 0.0) return ok(lo);
  if (fhi == 0.0) return ok(hi);
  if ((flo < 0.0) == (fhi < 0.0)) return fail(Failure::no_bracket);
  double llo = std::log(lo), lhi = std::log(hi);
  const bool rising = flo < 0.0;
  double mu = std::exp(0.5 * (llo + lhi));
  for (int i = 0; i < 200 && lhi - llo > 4e-16; ++i) {
    const double mid = 0.5 * (llo + lhi);
    mu = std::exp(mid);
    const double fm = phi(mu);
    if (fm == 0.0) return ok(mu);
    if ((fm < 0.0) == rising) llo = mid; else lhi = mid;
  }
  mu = std::exp(0.5 * (llo + lhi));
  if (!(mu > 0.0) || !std::isfinite(mu)) return fail(Failure::nonpositive_estimate);
  return ok(mu);
}

double p_equation_residual(const SampleStats& stats, double mu, double sigma) {
  return static_cast<double>(stats.n) *
         (1.0 + stats.xbar2 - mu * (sigma * stats.xbar4 - stats.xbar3));
}

double sigma_equation_residual(const SampleStats& stats, const SigmaPrior& prior,
                               double mu, double sigma) {
  const double n = static_cast<double>(stats.n);
  return n * mu / sigma - mu * n * stats.xbar1 + (prior.alpha2 - 1.0) / sigma - prior.beta2;
}

double digamma_residual(std::size_t n, double mean_T, double mean_log_T,
                        double alpha1, double beta1, double mu, double sigma) {
  const double dn = static_cast<double>(n);
  return dn * (std::log(mu * sigma) + 1.0 - digamma(mu)) + dn * mean_log_T -
         sigma * dn * mean_T + (alpha1 - 1.0) / mu - beta1;
}

Estimate estimate_power(std::span<const double> sample, double s, const SigmaPrior& prior) {
  const SampleStats stats = compute_power_stats(sample, s, prior);
  Estimate est;
  est.method = Method::closed_form_power;
  const ScalarResult sig = estimate_sigma(stats, prior);
  est.diagnostics.discriminant = sig.discriminant;
  if (!sig.ok()) {
    est.failure = sig.failure;
    return est;
  }
  est.sigma_hat = sig.value;
  const ScalarResult mu = mu_of_sigma(stats, *sig.value);
  if (!mu.ok()) {
    est.failure = mu.failure;
  } else {
    est.mu_hat = mu.value;
    est.diagnostics.residual_sigma_eq =
        sigma_equation_residual(stats, prior, *mu.value, *sig.value);
    est.diagnostics.residual_mu_eq = p_equation_residual(stats, *mu.value, *sig.value);
  }
  return est;
}

Estimate estimate_closed_form(const DistributionSpec& spec,
                              std::span<const double> sample, const SigmaPrior& prior) {
  const SampleStats stats = compute_stats(spec.generator, sample, prior);
  Estimate est;

  if (spec.sigma_link) {
    est.method = Method::linked;
    const ScalarResult mu = estimate_mu_linked(stats, *spec.sigma_link);
    if (!mu.ok()) {
      est.failure = mu.failure;
      return est;
    }
    est.mu_hat = mu.value;
    const double sigma = spec.sigma_link->reciprocal ? spec.sigma_link->c / *mu.value
                                                     : spec.sigma_link->g(*mu.value);
    est.sigma_hat = sigma;
    est.diagnostics.residual_mu_eq = p_equation_residual(stats, *mu.value, sigma);
    est.diagnostics.residual_sigma_eq =
        sigma_equation_residual(stats, prior, *mu.value, sigma);
    return est;
  }

  if (spec.mu_fixed) {
    est.method = Method::fixed_mu;
    const ScalarResult sig = estimate_sigma_fixed_mu(stats, *spec.mu_fixed);
    if (!sig.ok()) {
      est.failure = sig.failure;
      return est;
    }
    est.sigma_hat = sig.value;
    est.diagnostics.residual_mu_eq =
        p_equation_residual(stats, *spec.mu_fixed, *sig.value);
    est.diagnostics.residual_sigma_eq =
        sigma_equation_residual(stats, prior, *spec.mu_fixed, *sig.value);
    return est;
  }

  if (spec.sigma_fixed) {
    est.method = Method::fixed_sigma;
    const ScalarResult mu = estimate_mu_fixed_sigma(stats, *spec.sigma_fixed);
    if (!mu.ok()) {
      est.failure = mu.failure;
      return est;
    }
    est.mu_hat = mu.value;
    est.diagnostics.residual_mu_eq =
        p_equation_residual(stats, *mu.value, *spec.sigma_fixed);
    est.diagnostics.residual_sigma_eq =
        sigma_equation_residual(stats, prior, *mu.value, *spec.sigma_fixed);
    return est;
  }

  est.method = spec.generator.is_power ? Method::closed_form_power : Method::closed_form;
  const ScalarResult sig = estimate_sigma(stats, prior);
  est.diagnostics.discriminant = sig.discriminant;
  if (!sig.ok()) {
    est.failure = sig.failure;
    return est;
  }
  est.sigma_hat = sig.value;
  const ScalarResult mu = mu_of_sigma(stats, *sig.value);
  if (!mu.ok()) {
    est.failure = mu.failure;
    return est;
  }
  est.mu_hat = mu.value;
  est.diagnostics.residual_sigma_eq =
      sigma_equation_residual(stats, prior, *mu.value, *sig.value);
  est.diagnostics.residual_mu_eq = p_equation_residual(stats, *mu.value, *sig.value);
  return est;
}

}  // namespace expfam
