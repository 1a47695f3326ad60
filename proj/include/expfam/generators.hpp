#pragma once

// Generator catalog for the T-parameterized family
//
//   f(x; mu, sigma) = (mu sigma)^mu / Gamma(mu) * |T'(x)| * T(x)^{mu-1}
//                     * exp(-mu sigma T(x)),    x in (0, inf),
//
// where T is smooth, strictly monotone, and maps (0, inf) onto (0, inf).
// Each named conventional distribution is one choice of T plus a mapping
// from its conventional parameters to the canonical pair (mu, sigma).

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace expfam {

// Thrown when an evaluation leaves the representable/positive range.
struct NumericRangeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when a bisection inverse cannot trap a sign change.
struct BracketError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CanonicalParams {
  double mu = 0.0;
  double sigma = 0.0;
};

struct Generator {
  std::string name;
  std::vector<std::pair<std::string, double>> shape_params;
  bool increasing = true;
  // Pure-power rows (T = x^power) get exact short-circuit treatment in the
  // h-statistics; `power` is meaningful only when is_power is true.
  bool is_power = false;
  double power = 0.0;

  std::function<double(double)> value;    // T(x)
  std::function<double(double)> deriv;    // T'(x), signed
  std::function<double(double)> deriv2;   // T''(x)
  std::function<double(double)> inverse;  // T^{-1}(u), u > 0
};

// sigma = g(mu) structural link (chi-squared, delta-gamma, ...).
struct SigmaLink {
  bool reciprocal = false;            // g(mu) = c / mu
  double c = 0.0;                     // only for reciprocal form
  std::function<double(double)> g;    // always callable
};

struct DistributionSpec {
  std::string name;                                            // registry key
  std::vector<std::pair<std::string, double>> conventional;    // as given
  Generator generator;
  CanonicalParams canonical;
  std::optional<double> mu_fixed;      // structurally pinned mu (e.g. 1, 3/2)
  std::optional<double> sigma_fixed;   // structurally pinned sigma
  std::optional<SigmaLink> sigma_link; // sigma tied to mu
};

// Checked evaluation: x must be in (0, inf); non-finite results raise
// NumericRangeError with the offending argument in the message.
double eval_T(const Generator& g, double x);
double eval_T_prime(const Generator& g, double x);
double eval_T_second(const Generator& g, double x);

// Checked inverse: u must be positive; |T(x) - u| <= 1e-12 * u on return.
double eval_T_inverse(const Generator& g, double u);

// Build just the generator (T and friends) from its shape constants.
// Unknown name or out-of-range constants -> std::invalid_argument.
Generator make_generator(const std::string& name,
                         std::span<const std::pair<std::string, double>> shape_params);

// Anonymous pure-power generator T(x) = x^p, p != 0.
Generator make_power_generator(double p);

// Full catalog row: conventional-parameter validation, (mu, sigma) mapping,
// and fixed/linked classification.
DistributionSpec registry_lookup(const std::string& name,
                                 std::span<const std::pair<std::string, double>> conventional);

// Names accepted by make_generator / registry_lookup, in catalog order.
std::vector<std::string> registry_names();

}  // namespace expfam
