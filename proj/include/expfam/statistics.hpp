#pragma once

// The five sample averages the closed-form estimators consume.
//
// Per observation, with T the generator:
//   h1 = T(x)
//   h2 = log x + [T''/T' - T'/T] x log x
//   h3 = (T'/T) x log x
//   h4 = T'(x) x log x
//   h5 = beta2 h3 + (alpha2 - 1) h4
//
// For a pure power T = x^p these collapse exactly: h2 = 0, h3 = p log x,
// h4 = T(x) p log x; the implementation short-circuits that case so the
// power-law identities hold bitwise, not just to rounding.

#include <cstddef>
#include <span>
#include <stdexcept>

#include "expfam/generators.hpp"

namespace expfam {

// Independent gamma priors mu ~ Gamma(alpha1, beta1), sigma ~ Gamma(alpha2, beta2).
struct HyperParams {
  double alpha1 = 0.01;
  double beta1 = 0.01;
  double alpha2 = 0.01;
  double beta2 = 0.01;
};

// The closed-form estimators depend on the prior only through (alpha2, beta2);
// taking this reduced view makes that independence structural.
struct SigmaPrior {
  double alpha2 = 0.01;
  double beta2 = 0.01;
  SigmaPrior() = default;
  SigmaPrior(double a2, double b2) : alpha2(a2), beta2(b2) {}
  SigmaPrior(const HyperParams& hp) : alpha2(hp.alpha2), beta2(hp.beta2) {}
};

struct HValues {
  double h1 = 0.0, h2 = 0.0, h3 = 0.0, h4 = 0.0;
};

struct SampleStats {
  std::size_t n = 0;
  double xbar1 = 0.0;  // mean h1
  double xbar2 = 0.0;  // mean h2
  double xbar3 = 0.0;  // mean h3
  double xbar4 = 0.0;  // mean h4
  double xbar5 = 0.0;  // beta2 * xbar3 + (alpha2 - 1) * xbar4, by identity
};

// Thrown by compute_stats when one observation is unusable; carries its index.
struct SampleDomainError : std::domain_error {
  std::size_t index;
  SampleDomainError(std::size_t i, const std::string& msg)
      : std::domain_error(msg), index(i) {}
};

// Requires x in (0, inf) and finite h-values; NumericRangeError otherwise.
HValues h_values(const Generator& g, double x);

// Kahan-compensated, summed left to right. Empty sample -> invalid_argument.
SampleStats compute_stats(const Generator& g, std::span<const double> sample,
                          const SigmaPrior& prior);

// Power-path stats per the s-convention: T = x^{-s}, i.e. xbar1 = mean x^{-s},
// xbar3 = mean log(x^{-s}), xbar4 = mean x^{-s} log(x^{-s}), xbar2 = 0.
SampleStats compute_power_stats(std::span<const double> sample, double s,
                                const SigmaPrior& prior);

}  // namespace expfam
