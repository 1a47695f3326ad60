#include "expfam/generators.hpp"

#include <cmath>
#include <initializer_list>
#include <sstream>

namespace expfam {

namespace {

using Params = std::span<const std::pair<std::string, double>>;
using ParamVec = std::vector<std::pair<std::string, double>>;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

double need(Params ps, const char* key, const std::string& dist) {
  for (const auto& [k, v] : ps)
    if (k == key) {
      if (!std::isfinite(v))
        throw std::invalid_argument(dist + ": parameter '" + key + "' must be finite");
      return v;
    }
  throw std::invalid_argument(dist + ": missing parameter '" + key + "'");
}

void require_known(Params ps, std::initializer_list<const char*> keys, const std::string& dist) {
  for (const auto& [k, v] : ps) {
    bool ok = false;
    for (const char* key : keys)
      if (k == key) { ok = true; break; }
    if (!ok) throw std::invalid_argument(dist + ": unknown parameter '" + k + "'");
  }
}

void require_positive(double v, const char* key, const std::string& dist) {
  if (!(v > 0.0))
    throw std::invalid_argument(dist + ": parameter '" + key + "' must be positive");
}

// ---------------------------------------------------------------------------
// Builders

Generator power_generator(std::string name, double p, ParamVec sp) {
  Generator g;
  g.name = std::move(name);
  g.shape_params = std::move(sp);
  g.is_power = true;
  g.power = p;
  g.increasing = p > 0.0;
  // Exact forms for the exponents that appear with fixed value in the catalog;
  // they also make pow-vs-arithmetic comparisons bit-stable in tests.
  if (p == 1.0) {
    g.value = [](double x) { return x; };
    g.deriv = [](double) { return 1.0; };
    g.deriv2 = [](double) { return 0.0; };
    g.inverse = [](double u) { return u; };
  } else if (p == 2.0) {
    g.value = [](double x) { return x * x; };
    g.deriv = [](double x) { return 2.0 * x; };
    g.deriv2 = [](double) { return 2.0; };
    g.inverse = [](double u) { return std::sqrt(u); };
  } else if (p == -1.0) {
    g.value = [](double x) { return 1.0 / x; };
    g.deriv = [](double x) { return -1.0 / (x * x); };
    g.deriv2 = [](double x) { return 2.0 / (x * x * x); };
    g.inverse = [](double u) { return 1.0 / u; };
  } else {
    g.value = [p](double x) { return std::pow(x, p); };
    g.deriv = [p](double x) { return p * std::pow(x, p - 1.0); };
    g.deriv2 = [p](double x) { return p * (p - 1.0) * std::pow(x, p - 2.0); };
    g.inverse = [p](double u) { return std::pow(u, 1.0 / p); };
  }
  return g;
}

// Monotone inner function with analytic (or bisected) inverse; T = f(x)^q.
struct Inner {
  std::function<double(double)> f, d1, d2, inv;
};

Generator powered_inner(std::string name, const Inner& in, double q, bool increasing,
                        ParamVec sp) {
  Generator g;
  g.name = std::move(name);
  g.shape_params = std::move(sp);
  g.increasing = increasing;
  if (q == 1.0) {
    g.value = in.f;
    g.deriv = in.d1;
    g.deriv2 = in.d2;
    g.inverse = in.inv;
  } else {
    auto f = in.f, d1 = in.d1, d2 = in.d2, inv = in.inv;
    g.value = [f, q](double x) { return std::pow(f(x), q); };
    g.deriv = [f, d1, q](double x) {
      return q * std::pow(f(x), q - 1.0) * d1(x);
    };
    g.deriv2 = [f, d1, d2, q](double x) {
      const double fx = f(x), dx = d1(x);
      return q * std::pow(fx, q - 2.0) * ((q - 1.0) * dx * dx + fx * d2(x));
    };
    g.inverse = [inv, q](double u) { return inv(std::pow(u, 1.0 / q)); };
  }
  return g;
}

// Log-domain bisection for monotone f on (0, inf); bracket starts at
// [1e-12, 1e12] and expands a few decades before giving up.
double bisect_monotone(const std::function<double(double)>& f, double target,
                       bool increasing, const std::string& what) {
  double lo = 1e-12, hi = 1e12;
  auto below = [&](double fv) { return increasing ? fv < target : fv > target; };
  for (int i = 0; i < 6; ++i) {
    const double flo = f(lo), fhi = f(hi);
    if (below(flo) != below(fhi)) break;
    lo *= 1e-3;
    hi *= 1e3;
    if (i == 5)
      throw BracketError(what + ": no bracket for inverse at u = " + fmt(target));
  }
  double llo = std::log(lo), lhi = std::log(hi);
  double x = std::exp(0.5 * (llo + lhi));
  for (int i = 0; i < 200 && lhi - llo > 4e-16; ++i) {
    const double mid = 0.5 * (llo + lhi);
    x = std::exp(mid);
    const double fx = f(x);
    if (fx == target) return x;
    (below(fx) ? llo : lhi) = mid;
  }
  return std::exp(0.5 * (llo + lhi));
}

Inner expm1_inner() {
  return {[](double x) { return std::expm1(x); },
          [](double x) { return std::exp(x); },
          [](double x) { return std::exp(x); },
          [](double v) { return std::log1p(v); }};
}

Inner expm1_recip_inner() {
  return {[](double x) { return std::expm1(1.0 / x); },
          [](double x) { return -std::exp(1.0 / x) / (x * x); },
          [](double x) { return std::exp(1.0 / x) * (1.0 + 2.0 * x) / (x * x * x * x); },
          [](double v) { return 1.0 / std::log1p(v); }};
}

Inner log1p_inner() {
  return {[](double x) { return std::log1p(x); },
          [](double x) { return 1.0 / (1.0 + x); },
          [](double x) { return -1.0 / ((1.0 + x) * (1.0 + x)); },
          [](double v) { return std::expm1(v); }};
}

Inner log1p_recip_inner() {
  return {[](double x) { return std::log1p(1.0 / x); },
          [](double x) { return -1.0 / (x * (x + 1.0)); },
          [](double x) {
            const double w = x * (x + 1.0);
            return (2.0 * x + 1.0) / (w * w);
          },
          [](double v) { return 1.0 / std::expm1(v); }};
}

Inner x_expm1_inner() {
  return {[](double x) { return x * std::expm1(x); },
          [](double x) { return std::expm1(x) + x * std::exp(x); },
          [](double x) { return (2.0 + x) * std::exp(x); },
          [](double v) {
            return bisect_monotone([](double x) { return x * std::expm1(x); }, v,
                                   true, "extended_log_generalized_gamma");
          }};
}

Generator build_generator(const std::string& name, Params sp) {
  if (name == "nakagami" || name == "maxwell_boltzmann" || name == "rayleigh") {
    require_known(sp, {}, name);
    return power_generator(name, 2.0, {});
  }
  if (name == "gamma" || name == "chi_squared") {
    require_known(sp, {}, name);
    return power_generator(name, 1.0, {});
  }
  if (name == "inverse_gamma" || name == "scaled_inverse_chi_squared") {
    require_known(sp, {}, name);
    return power_generator(name, -1.0, {});
  }
  if (name == "delta_gamma" || name == "weibull" || name == "generalized_gamma") {
    require_known(sp, {"delta"}, name);
    const double d = need(sp, "delta", name);
    require_positive(d, "delta", name);
    return power_generator(name, d, {{"delta", d}});
  }
  if (name == "inverse_weibull" || name == "generalized_inverse_gamma") {
    require_known(sp, {"delta"}, name);
    const double d = need(sp, "delta", name);
    require_positive(d, "delta", name);
    return power_generator(name, -d, {{"delta", d}});
  }
  if (name == "log_generalized_gamma" || name == "log_generalized_inverse_gamma" ||
      name == "exponentiated_generalized_gamma" ||
      name == "exponentiated_generalized_inverse_gamma" ||
      name == "extended_log_generalized_gamma") {
    require_known(sp, {"delta"}, name);
    const double d = need(sp, "delta", name);
    require_positive(d, "delta", name);
    Inner in;
    bool inc = true;
    if (name == "log_generalized_gamma") in = expm1_inner();
    else if (name == "log_generalized_inverse_gamma") { in = expm1_recip_inner(); inc = false; }
    else if (name == "exponentiated_generalized_gamma") in = log1p_inner();
    else if (name == "exponentiated_generalized_inverse_gamma") { in = log1p_recip_inner(); inc = false; }
    else in = x_expm1_inner();
    return powered_inner(name, in, d, inc, {{"delta", d}});
  }
  if (name == "modified_log_generalized_gamma") {
    require_known(sp, {"delta"}, name);
    const double d = need(sp, "delta", name);
    require_positive(d, "delta", name);
    Generator g;
    g.name = name;
    g.shape_params = {{"delta", d}};
    g.value = [d](double x) { return std::exp(d * (x - 1.0 / x)); };
    g.deriv = [d](double x) {
      const double gp = d * (1.0 + 1.0 / (x * x));
      return gp * std::exp(d * (x - 1.0 / x));
    };
    g.deriv2 = [d](double x) {
      const double gp = d * (1.0 + 1.0 / (x * x));
      const double gpp = -2.0 * d / (x * x * x);
      return (gp * gp + gpp) * std::exp(d * (x - 1.0 / x));
    };
    g.inverse = [d](double u) {
      // x - 1/x = w  =>  x = (w + sqrt(w^2 + 4)) / 2; rationalized for w < 0.
      const double w = std::log(u) / d;
      const double r = std::sqrt(w * w + 4.0);
      return w >= 0.0 ? 0.5 * (w + r) : 2.0 / (r - w);
    };
    return g;
  }
  if (name == "gompertz") {
    require_known(sp, {"delta"}, name);
    const double d = need(sp, "delta", name);
    require_positive(d, "delta", name);
    Generator g;
    g.name = name;
    g.shape_params = {{"delta", d}};
    g.value = [d](double x) { return std::expm1(d * x); };
    g.deriv = [d](double x) { return d * std::exp(d * x); };
    g.deriv2 = [d](double x) { return d * d * std::exp(d * x); };
    g.inverse = [d](double u) { return std::log1p(u) / d; };
    return g;
  }
  if (name == "modified_weibull_extension") {
    require_known(sp, {"alpha", "beta"}, name);
    const double a = need(sp, "alpha", name), b = need(sp, "beta", name);
    require_positive(a, "alpha", name);
    require_positive(b, "beta", name);
    Generator g;
    g.name = name;
    g.shape_params = {{"alpha", a}, {"beta", b}};
    g.value = [a, b](double x) { return std::expm1(std::pow(x / a, b)); };
    g.deriv = [a, b](double x) {
      const double w = std::pow(x / a, b);
      return std::exp(w) * (b / a) * std::pow(x / a, b - 1.0);
    };
    g.deriv2 = [a, b](double x) {
      const double w = std::pow(x / a, b);
      const double w1 = (b / a) * std::pow(x / a, b - 1.0);
      const double w2 = (b * (b - 1.0) / (a * a)) * std::pow(x / a, b - 2.0);
      return std::exp(w) * (w1 * w1 + w2);
    };
    g.inverse = [a, b](double u) { return a * std::pow(std::log1p(u), 1.0 / b); };
    return g;
  }
  if (name == "traditional_weibull") {
    require_known(sp, {"b", "c", "d"}, name);
    const double b = need(sp, "b", name), c = need(sp, "c", name), d = need(sp, "d", name);
    require_positive(b, "b", name);
    require_positive(c, "c", name);
    require_positive(d, "d", name);
    Generator g;
    g.name = name;
    g.shape_params = {{"b", b}, {"c", c}, {"d", d}};
    auto value = [b, c, d](double x) { return std::pow(x, b) * std::expm1(c * std::pow(x, d)); };
    g.value = value;
    g.deriv = [b, c, d](double x) {
      const double e = std::expm1(c * std::pow(x, d));
      const double e1 = c * d * std::pow(x, d - 1.0) * std::exp(c * std::pow(x, d));
      return b * std::pow(x, b - 1.0) * e + std::pow(x, b) * e1;
    };
    g.deriv2 = [b, c, d](double x) {
      const double w = c * std::pow(x, d);
      const double ew = std::exp(w);
      const double e = std::expm1(w);
      const double e1 = c * d * std::pow(x, d - 1.0) * ew;
      const double e2 = c * d * (d - 1.0) * std::pow(x, d - 2.0) * ew +
                        c * c * d * d * std::pow(x, 2.0 * d - 2.0) * ew;
      return b * (b - 1.0) * std::pow(x, b - 2.0) * e +
             2.0 * b * std::pow(x, b - 1.0) * e1 + std::pow(x, b) * e2;
    };
    g.inverse = [value](double u) {
      return bisect_monotone(value, u, true, "traditional_weibull");
    };
    return g;
  }
  if (name == "flexible_weibull") {
    require_known(sp, {"b", "c"}, name);
    const double b = need(sp, "b", name), c = need(sp, "c", name);
    require_positive(b, "b", name);
    require_positive(c, "c", name);
    Generator g;
    g.name = name;
    g.shape_params = {{"b", b}, {"c", c}};
    auto value = [b, c](double x) { return std::exp(b * x - c / x); };
    g.value = value;
    g.deriv = [b, c, value](double x) { return (b + c / (x * x)) * value(x); };
    g.deriv2 = [b, c, value](double x) {
      const double s = b + c / (x * x);
      return (s * s - 2.0 * c / (x * x * x)) * value(x);
    };
    g.inverse = [value](double u) {
      return bisect_monotone(value, u, true, "flexible_weibull");
    };
    return g;
  }
  if (name == "burr_xii") {
    require_known(sp, {"c"}, name);
    const double c = need(sp, "c", name);
    require_positive(c, "c", name);
    Generator g;
    g.name = name;
    g.shape_params = {{"c", c}};
    g.value = [c](double x) { return std::log1p(std::pow(x, c)); };
    g.deriv = [c](double x) {
      return c * std::pow(x, c - 1.0) / (1.0 + std::pow(x, c));
    };
    g.deriv2 = [c](double x) {
      const double xc = std::pow(x, c);
      const double den = 1.0 + xc;
      return c * std::pow(x, c - 2.0) * ((c - 1.0) - xc) / (den * den);
    };
    g.inverse = [c](double u) { return std::pow(std::expm1(u), 1.0 / c); };
    return g;
  }
  if (name == "dagum") {
    require_known(sp, {"c"}, name);
    const double c = need(sp, "c", name);
    require_positive(c, "c", name);
    Generator g;
    g.name = name;
    g.shape_params = {{"c", c}};
    g.increasing = false;
    g.value = [c](double x) { return std::log1p(std::pow(x, -c)); };
    g.deriv = [c](double x) { return -c / (x * (1.0 + std::pow(x, c))); };
    g.deriv2 = [c](double x) {
      const double xc = std::pow(x, c);
      const double den = x * (1.0 + xc);
      return c * (1.0 + (c + 1.0) * xc) / (den * den);
    };
    g.inverse = [c](double u) { return std::pow(std::expm1(u), -1.0 / c); };
    return g;
  }
  throw std::invalid_argument("unknown distribution '" + name + "'");
}

}  // namespace

double eval_T(const Generator& g, double x) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw std::domain_error(g.name + ": argument must be in (0, inf), got " + fmt(x));
  const double t = g.value(x);
  if (!std::isfinite(t) || !(t > 0.0))
    throw NumericRangeError(g.name + ": T(" + fmt(x) + ") = " + fmt(t) + " out of range");
  return t;
}

double eval_T_prime(const Generator& g, double x) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw std::domain_error(g.name + ": argument must be in (0, inf), got " + fmt(x));
  const double d = g.deriv(x);
  if (!std::isfinite(d) || d == 0.0)
    throw NumericRangeError(g.name + ": T'(" + fmt(x) + ") = " + fmt(d) + " out of range");
  return d;
}

double eval_T_second(const Generator& g, double x) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw std::domain_error(g.name + ": argument must be in (0, inf), got " + fmt(x));
  const double d = g.deriv2(x);
  if (!std::isfinite(d))
    throw NumericRangeError(g.name + ": T''(" + fmt(x) + ") = " + fmt(d) + " out of range");
  return d;
}

double eval_T_inverse(const Generator& g, double u) {
  if (!(u > 0.0) || !std::isfinite(u))
    throw std::domain_error(g.name + ": inverse argument must be in (0, inf), got " + fmt(u));
  double x = g.inverse(u);
  if (!std::isfinite(x) || !(x > 0.0))
    throw NumericRangeError(g.name + ": T^{-1}(" + fmt(u) + ") = " + fmt(x) + " out of range");
  // Residual contract: |T(x) - u| <= 1e-12 u. Polish with Newton if an
  // analytically-inverted or bisected root landed wide of that.
  double t = g.value(x);
  for (int i = 0; i < 4 && std::fabs(t - u) > 1e-12 * u; ++i) {
    const double d = g.deriv(x);
    if (!std::isfinite(d) || d == 0.0) break;
    const double step = (t - u) / d;
    double xn = x - step;
    if (!(xn > 0.0) || !std::isfinite(xn)) break;
    x = xn;
    t = g.value(x);
  }
  if (!std::isfinite(t) || std::fabs(t - u) > 1e-12 * u)
    throw NumericRangeError(g.name + ": inverse residual too large at u = " + fmt(u));
  return x;
}

Generator make_generator(const std::string& name, Params shape_params) {
  return build_generator(name, shape_params);
}

Generator make_power_generator(double p) {
  if (p == 0.0 || !std::isfinite(p))
    throw std::invalid_argument("make_power_generator: p must be finite and nonzero");
  return power_generator("power", p, {});
}

DistributionSpec registry_lookup(const std::string& name, Params conv) {
  DistributionSpec spec;
  spec.name = name;
  spec.conventional.assign(conv.begin(), conv.end());

  auto finish = [&](Generator g, double mu, double sigma) {
    spec.generator = std::move(g);
    spec.canonical = {mu, sigma};
  };

  if (name == "nakagami") {
    require_known(conv, {"m", "omega"}, name);
    const double m = need(conv, "m", name), omega = need(conv, "omega", name);
    if (!(m >= 0.5)) throw std::invalid_argument("nakagami: requires m >= 1/2");
    require_positive(omega, "omega", name);
    finish(build_generator(name, {}), m, 1.0 / omega);
  } else if (name == "maxwell_boltzmann") {
    require_known(conv, {"beta"}, name);
    const double b = need(conv, "beta", name);
    require_positive(b, "beta", name);
    finish(build_generator(name, {}), 1.5, 1.0 / (3.0 * b * b));
    spec.mu_fixed = 1.5;
  } else if (name == "rayleigh") {
    require_known(conv, {"beta"}, name);
    const double b = need(conv, "beta", name);
    require_positive(b, "beta", name);
    finish(build_generator(name, {}), 1.0, 1.0 / (2.0 * b * b));
    spec.mu_fixed = 1.0;
  } else if (name == "gamma" || name == "inverse_gamma") {
    require_known(conv, {"alpha", "beta"}, name);
    const double a = need(conv, "alpha", name), b = need(conv, "beta", name);
    require_positive(a, "alpha", name);
    require_positive(b, "beta", name);
    finish(build_generator(name, {}), a, 1.0 / (a * b));
  } else if (name == "delta_gamma") {
    require_known(conv, {"beta", "delta"}, name);
    const double b = need(conv, "beta", name), d = need(conv, "delta", name);
    require_positive(b, "beta", name);
    require_positive(d, "delta", name);
    ParamVec sp{{"delta", d}};
    finish(build_generator(name, sp), b / d, 1.0 / b);
    const double c = 1.0 / d;
    spec.sigma_link = SigmaLink{true, c, [c](double m) { return c / m; }};
  } else if (name == "weibull" || name == "inverse_weibull") {
    require_known(conv, {"beta", "delta"}, name);
    const double b = need(conv, "beta", name), d = need(conv, "delta", name);
    require_positive(b, "beta", name);
    require_positive(d, "delta", name);
    ParamVec sp{{"delta", d}};
    finish(build_generator(name, sp), 1.0, std::pow(b, -d));
    spec.mu_fixed = 1.0;
  } else if (name == "generalized_gamma" || name == "generalized_inverse_gamma" ||
             name == "log_generalized_gamma" || name == "log_generalized_inverse_gamma" ||
             name == "exponentiated_generalized_gamma" ||
             name == "exponentiated_generalized_inverse_gamma" ||
             name == "modified_log_generalized_gamma" ||
             name == "extended_log_generalized_gamma") {
    require_known(conv, {"alpha", "beta", "delta"}, name);
    const double a = need(conv, "alpha", name), b = need(conv, "beta", name),
                 d = need(conv, "delta", name);
    require_positive(a, "alpha", name);
    require_positive(b, "beta", name);
    require_positive(d, "delta", name);
    ParamVec sp{{"delta", d}};
    finish(build_generator(name, sp), a / d, d * std::pow(b, -d) / a);
  } else if (name == "chi_squared") {
    require_known(conv, {"nu"}, name);
    const double nu = need(conv, "nu", name);
    require_positive(nu, "nu", name);
    finish(build_generator(name, {}), nu / 2.0, 1.0 / nu);
    spec.sigma_link = SigmaLink{true, 0.5, [](double m) { return 0.5 / m; }};
  } else if (name == "scaled_inverse_chi_squared") {
    require_known(conv, {"nu", "tau2"}, name);
    const double nu = need(conv, "nu", name), t2 = need(conv, "tau2", name);
    require_positive(nu, "nu", name);
    require_positive(t2, "tau2", name);
    finish(build_generator(name, {}), nu / 2.0, t2);
  } else if (name == "gompertz") {
    require_known(conv, {"alpha", "delta"}, name);
    const double a = need(conv, "alpha", name), d = need(conv, "delta", name);
    require_positive(a, "alpha", name);
    require_positive(d, "delta", name);
    ParamVec sp{{"delta", d}};
    finish(build_generator(name, sp), 1.0, a);
    spec.mu_fixed = 1.0;
  } else if (name == "modified_weibull_extension") {
    require_known(conv, {"lambda", "alpha", "beta"}, name);
    const double l = need(conv, "lambda", name), a = need(conv, "alpha", name),
                 b = need(conv, "beta", name);
    require_positive(l, "lambda", name);
    require_positive(a, "alpha", name);
    require_positive(b, "beta", name);
    ParamVec sp{{"alpha", a}, {"beta", b}};
    finish(build_generator(name, sp), l * a, 1.0);
    spec.sigma_fixed = 1.0;
  } else if (name == "traditional_weibull") {
    require_known(conv, {"a", "b", "c", "d"}, name);
    const double a = need(conv, "a", name), b = need(conv, "b", name),
                 c = need(conv, "c", name), d = need(conv, "d", name);
    require_positive(a, "a", name);
    require_positive(b, "b", name);
    require_positive(c, "c", name);
    require_positive(d, "d", name);
    ParamVec sp{{"b", b}, {"c", c}, {"d", d}};
    finish(build_generator(name, sp), 1.0, a);
    spec.mu_fixed = 1.0;
  } else if (name == "flexible_weibull") {
    require_known(conv, {"a", "b", "c"}, name);
    const double a = need(conv, "a", name), b = need(conv, "b", name),
                 c = need(conv, "c", name);
    require_positive(a, "a", name);
    require_positive(b, "b", name);
    require_positive(c, "c", name);
    ParamVec sp{{"b", b}, {"c", c}};
    finish(build_generator(name, sp), 1.0, a);
    spec.mu_fixed = 1.0;
  } else if (name == "burr_xii" || name == "dagum") {
    require_known(conv, {"k", "c"}, name);
    const double k = need(conv, "k", name), c = need(conv, "c", name);
    require_positive(k, "k", name);
    require_positive(c, "c", name);
    ParamVec sp{{"c", c}};
    finish(build_generator(name, sp), 1.0, k);
    spec.mu_fixed = 1.0;
  } else {
    throw std::invalid_argument("unknown distribution '" + name + "'");
  }
  return spec;
}

std::vector<std::string> registry_names() {
  return {"nakagami",
          "maxwell_boltzmann",
          "rayleigh",
          "gamma",
          "inverse_gamma",
          "delta_gamma",
          "weibull",
          "inverse_weibull",
          "generalized_gamma",
          "generalized_inverse_gamma",
          "log_generalized_gamma",
          "log_generalized_inverse_gamma",
          "exponentiated_generalized_gamma",
          "exponentiated_generalized_inverse_gamma",
          "modified_log_generalized_gamma",
          "extended_log_generalized_gamma",
          "chi_squared",
          "scaled_inverse_chi_squared",
          "gompertz",
          "modified_weibull_extension",
          "traditional_weibull",
          "flexible_weibull",
          "burr_xii",
          "dagum"};
}

}  // namespace expfam
