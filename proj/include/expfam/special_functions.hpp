#pragma once

// Self-contained real-argument special functions for positive arguments.
// Everything downstream (likelihoods, scores, gamma-CDF checks) funnels
// through these four kernels, so they carry tight accuracy contracts:
//
//   ln_gamma   : |rel err| <= 1e-12 on [1e-6, 1e6]
//   digamma    : |abs err| <= 1e-10 on [1e-6, 1e6]
//   trigamma   : |abs err| <= 1e-8  on [1e-6, 1e6]
//   reg_lower_gamma : P(a, x), regularized lower incomplete gamma

namespace expfam {

// Lanczos approximation (g = 7, 9 terms, Godfrey coefficients).
double ln_gamma(double x);

// Upward recurrence to x >= 10, then the Bernoulli asymptotic series.
double digamma(double x);
double trigamma(double x);

// Series for x < a + 1, modified Lentz continued fraction otherwise.
double reg_lower_gamma(double a, double x);

}
