#include "expfam/special_functions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace expfam {

namespace {

constexpr double half_log_two_pi = 0.91893853320467274178;  // log(2*pi)/2

// Godfrey's coefficients for the Lanczos approximation, g = 7.
constexpr double lanczos_g = 7.0;
constexpr double lanczos_c[9] = {
    0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,    12.507343278686905,
    -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7,
};

}  // namespace

double ln_gamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("ln_gamma: requires x > 0");
  // Shift tiny arguments up one: evaluating the Lanczos sum at x near 0
  // cancels badly, while lnGamma(x + 1) - log x does not.
  if (x < 0.5) return ln_gamma(x + 1.0) - std::log(x);
  double a = lanczos_c[0];
  for (int i = 1; i < 9; ++i) a += lanczos_c[i] / (x - 1.0 + i);
  const double t = x + lanczos_g - 0.5;
  return half_log_two_pi + (x - 0.5) * std::log(t) - t + std::log(a);
}

double digamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("digamma: requires x > 0");
  // psi(x) = psi(x + 1) - 1/x, applied until the asymptotic tail is below 1 ulp.
  double acc = 0.0;
  while (x < 10.0) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  const double r = 1.0 / x;
  const double r2 = r * r;
  // log x - 1/(2x) - sum B_{2k} / (2k x^{2k}), through k = 7.
  const double series = r2 * (1.0 / 12.0 +
                        r2 * (-1.0 / 120.0 +
                        r2 * (1.0 / 252.0 +
                        r2 * (-1.0 / 240.0 +
                        r2 * (1.0 / 132.0 +
                        r2 * (-691.0 / 32760.0 +
                        r2 * (1.0 / 12.0)))))));
  return acc + std::log(x) - 0.5 * r - series;
}

double trigamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("trigamma: requires x > 0");
  // psi'(x) = psi'(x + 1) + 1/x^2.
  double acc = 0.0;
  while (x < 10.0) {
    acc += 1.0 / (x * x);
    x += 1.0;
  }
  const double r = 1.0 / x;
  const double r2 = r * r;
  // 1/x + 1/(2x^2) + sum B_{2k} / x^{2k+1}, through k = 7.
  const double series = r * r2 * (1.0 / 6.0 +
                        r2 * (-1.0 / 30.0 +
                        r2 * (1.0 / 42.0 +
                        r2 * (-1.0 / 30.0 +
                        r2 * (5.0 / 66.0 +
                        r2 * (-691.0 / 2730.0 +
                        r2 * (7.0 / 6.0)))))));
  return acc + r + 0.5 * r2 + series;
}

double reg_lower_gamma(double a, double x) {
  if (!(a > 0.0)) throw std::domain_error("reg_lower_gamma: requires a > 0");
  if (x < 0.0) throw std::domain_error("reg_lower_gamma: requires x >= 0");
  if (x == 0.0) return 0.0;

  constexpr int max_iter = 500;
  constexpr double eps = 1e-15;
  const double log_prefactor = a * std::log(x) - x - ln_gamma(a);

  if (x < a + 1.0) {
    // Lower series: P(a,x) = x^a e^{-x} / Gamma(a) * sum x^n / (a(a+1)...(a+n)).
    double ap = a;
    double term = 1.0 / a;
    double sum = term;
    for (int i = 0; i < max_iter; ++i) {
      ap += 1.0;
      term *= x / ap;
      sum += term;
      if (std::fabs(term) < std::fabs(sum) * eps)
        return sum * std::exp(log_prefactor);
    }
    throw std::runtime_error("reg_lower_gamma: series failed to converge");
  }

  // Upper continued fraction (modified Lentz), then P = 1 - Q.
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= max_iter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < eps)
      return 1.0 - std::exp(log_prefactor) * h;
  }
  throw std::runtime_error("reg_lower_gamma: continued fraction failed to converge");
}

}  // namespace expfam
