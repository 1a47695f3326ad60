#include "expfam/baselines.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "expfam/special_functions.hpp"

namespace expfam {

namespace {

constexpr double grad_tol = 1e-8;
constexpr int max_total_iter = 500;

struct KahanSum {
  double s = 0.0, c = 0.0;
  void add(double v) {
    const double y = v - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
};

struct LikSummary {
  double n = 0.0;
  double sum_T = 0.0;
  double sum_log_T = 0.0;
  double sum_log_abs_T1 = 0.0;
  double sum_T2 = 0.0;  // moment init only
};

LikSummary lik_summary(const Generator& g, std::span<const double> sample) {
  if (sample.empty()) throw std::invalid_argument("baselines: empty sample");
  KahanSum st, slt, slt1, st2;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    try {
      const double t = eval_T(g, sample[i]);
      const double t1 = eval_T_prime(g, sample[i]);
      st.add(t);
      slt.add(std::log(t));
      slt1.add(std::log(std::fabs(t1)));
      st2.add(t * t);
    } catch (const std::exception& e) {
      throw SampleDomainError(i, "observation " + std::to_string(i) + ": " + e.what());
    }
  }
  LikSummary s;
  s.n = static_cast<double>(sample.size());
  s.sum_T = st.s;
  s.sum_log_T = slt.s;
  s.sum_log_abs_T1 = slt1.s;
  s.sum_T2 = st2.s;
  if (!std::isfinite(s.sum_T) || !std::isfinite(s.sum_log_T) || !std::isfinite(s.sum_log_abs_T1))
    throw NumericRangeError("baselines: non-finite sufficient sums");
  return s;
}

double lp_from(const LikSummary& s, double mu, double sigma, const HyperParams& hp) {
  if (!(mu > 0.0) || !(sigma > 0.0)) return -std::numeric_limits<double>::infinity();
  const double ll = s.n * (mu * std::log(mu * sigma) - ln_gamma(mu)) + s.sum_log_abs_T1 +
                    (mu - 1.0) * s.sum_log_T - mu * sigma * s.sum_T;
  return ll + (hp.alpha1 - 1.0) * std::log(mu) - hp.beta1 * mu +
         (hp.alpha2 - 1.0) * std::log(sigma) - hp.beta2 * sigma;
}

Score score_from(const LikSummary& s, double mu, double sigma, const HyperParams& hp) {
  Score g;
  g.d_mu = s.n * (std::log(mu * sigma) + 1.0 - digamma(mu)) + s.sum_log_T -
           sigma * s.sum_T + (hp.alpha1 - 1.0) / mu - hp.beta1;
  g.d_sigma = s.n * mu / sigma - mu * s.sum_T + (hp.alpha2 - 1.0) / sigma - hp.beta2;
  return g;
}

double norm2(const Score& g) { return std::hypot(g.d_mu, g.d_sigma); }

struct Point {
  double mu, sigma;
};

// Newton on the analytic score with a central-difference Hessian and
// backtracking on the posterior value. Returns iterations used.
int newton_polish(const LikSummary& s, const HyperParams& hp, Point& p, int max_iter,
                  double& gnorm) {
  int used = 0;
  for (; used < max_iter; ++used) {
    const Score g = score_from(s, p.mu, p.sigma, hp);
    gnorm = norm2(g);
    if (!(gnorm > grad_tol)) return used;  // also catches NaN -> bail via stall below
    if (!std::isfinite(gnorm)) return used;
    const double hm = std::max(1e-7 * p.mu, 1e-12);
    const double hs = std::max(1e-7 * p.sigma, 1e-12);
    const Score gp = score_from(s, p.mu + hm, p.sigma, hp);
    const Score gm = score_from(s, p.mu - hm, p.sigma, hp);
    const Score sp = score_from(s, p.mu, p.sigma + hs, hp);
    const Score sm = score_from(s, p.mu, p.sigma - hs, hp);
    const double h00 = (gp.d_mu - gm.d_mu) / (2.0 * hm);
    const double h10 = (gp.d_sigma - gm.d_sigma) / (2.0 * hm);
    const double h01 = (sp.d_mu - sm.d_mu) / (2.0 * hs);
    const double h11 = (sp.d_sigma - sm.d_sigma) / (2.0 * hs);
    const double hx = 0.5 * (h01 + h10);
    const double det = h00 * h11 - hx * hx;
    if (!std::isfinite(det) || std::fabs(det) < 1e-300) return used;
    const double dmu = -(h11 * g.d_mu - hx * g.d_sigma) / det;
    const double dsg = -(h00 * g.d_sigma - hx * g.d_mu) / det;
    const double lp0 = lp_from(s, p.mu, p.sigma, hp);
    double lam = 1.0;
    bool stepped = false;
    for (int k = 0; k < 40; ++k, lam *= 0.5) {
      const double nmu = p.mu + lam * dmu;
      const double nsg = p.sigma + lam * dsg;
      if (!(nmu > 0.0) || !(nsg > 0.0)) continue;
      const double lp1 = lp_from(s, nmu, nsg, hp);
      if (std::isfinite(lp1) && lp1 >= lp0 - 1e-13 * (1.0 + std::fabs(lp0))) {
        p = {nmu, nsg};
        stepped = true;
        break;
      }
    }
    if (!stepped) return used;
  }
  const Score g = score_from(s, p.mu, p.sigma, hp);
  gnorm = norm2(g);
  return used;
}

// Log-space Nelder-Mead fallback; returns iterations used.
int nelder_mead(const LikSummary& s, const HyperParams& hp, Point& p, int max_iter) {
  using Vert = std::array<double, 2>;
  auto f = [&](const Vert& t) {
    const double v = lp_from(s, std::exp(t[0]), std::exp(t[1]), hp);
    return std::isfinite(v) ? -v : std::numeric_limits<double>::infinity();
  };
  std::array<Vert, 3> v;
  v[0] = {std::log(p.mu), std::log(p.sigma)};
  v[1] = {v[0][0] + 0.05, v[0][1]};
  v[2] = {v[0][0], v[0][1] + 0.05};
  std::array<double, 3> fv{f(v[0]), f(v[1]), f(v[2])};
  int used = 0;
  for (; used < max_iter; ++used) {
    // order best..worst
    std::array<int, 3> idx{0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fv[a] < fv[b]; });
    const int b = idx[0], m = idx[1], w = idx[2];
    if (fv[w] - fv[b] <= 1e-12 * (1.0 + std::fabs(fv[b]))) break;
    const Vert cen{0.5 * (v[b][0] + v[m][0]), 0.5 * (v[b][1] + v[m][1])};
    auto blend = [&](double c) {
      return Vert{cen[0] + c * (cen[0] - v[w][0]), cen[1] + c * (cen[1] - v[w][1])};
    };
    const Vert xr = blend(1.0);
    const double fr = f(xr);
    if (fr < fv[b]) {
      const Vert xe = blend(2.0);
      const double fe = f(xe);
      if (fe < fr) { v[w] = xe; fv[w] = fe; } else { v[w] = xr; fv[w] = fr; }
    } else if (fr < fv[m]) {
      v[w] = xr;
      fv[w] = fr;
    } else {
      const Vert xc = fr < fv[w] ? blend(0.5) : blend(-0.5);
      const double fc = f(xc);
      if (fc < std::min(fr, fv[w])) {
        v[w] = xc;
        fv[w] = fc;
      } else {
        for (int i : {m, w}) {
          v[i] = {v[b][0] + 0.5 * (v[i][0] - v[b][0]), v[b][1] + 0.5 * (v[i][1] - v[b][1])};
          fv[i] = f(v[i]);
        }
      }
    }
  }
  const int best =
      static_cast<int>(std::min_element(fv.begin(), fv.end()) - fv.begin());
  p = {std::exp(v[best][0]), std::exp(v[best][1])};
  return used;
}

// Safeguarded 1-d root solve of a monotone-ish derivative function on mu > 0:
// geometric bracket expansion, then Newton (finite-difference slope) with
// bisection fallback. Returns true on |d| <= grad_tol.
bool solve_scalar_root(const std::function<double(double)>& d, double init, double& root,
                       double& resid, int& iters) {
  double lo = init, hi = init;
  double dlo = d(lo), dhi = dlo;
  for (int k = 0; k < 120 && (dlo < 0.0) == (dhi < 0.0); ++k) {
    if (k % 2 == 0) {
      lo /= 4.0;
      dlo = d(lo);
    } else {
      hi *= 4.0;
      dhi = d(hi);
    }
    ++iters;
    if (!std::isfinite(dlo) || !std::isfinite(dhi)) return false;
  }
  if ((dlo < 0.0) == (dhi < 0.0)) return false;
  const bool rising = dhi > dlo;
  double x = std::sqrt(lo * hi);
  for (int k = 0; k < 200; ++k) {
    const double dx = d(x);
    ++iters;
    resid = dx;
    root = x;
    if (std::fabs(dx) <= grad_tol) return true;
    if ((dx < 0.0) == rising) lo = x; else hi = x;
    // FD Newton proposal, kept only inside the bracket.
    const double h = std::max(1e-7 * x, 1e-13);
    const double slope = (d(x + h) - d(x - h)) / (2.0 * h);
    double xn = slope != 0.0 ? x - dx / slope : 0.0;
    if (!(xn > lo) || !(xn < hi) || !std::isfinite(xn)) xn = std::sqrt(lo * hi);
    x = xn;
  }
  return false;
}

NumericFit fit_posterior(const DistributionSpec& spec, std::span<const double> sample,
                         const HyperParams& hp, std::optional<CanonicalParams> init,
                         Method tag) {
  if (sample.size() < 2)
    throw std::invalid_argument("numeric fit requires sample size >= 2");
  const LikSummary s = lik_summary(spec.generator, sample);
  NumericFit fit;
  fit.estimate.method = tag;

  auto finish = [&](double mu, double sigma, bool mu_est, bool sigma_est, bool converged,
                    int iters, double gnorm) {
    fit.report.converged = converged;
    fit.report.iterations = iters;
    fit.report.final_gradient_norm = gnorm;
    fit.report.objective = lp_from(s, mu, sigma, hp);
    const Score g = score_from(s, mu, sigma, hp);
    fit.estimate.diagnostics.residual_mu_eq = g.d_mu;
    fit.estimate.diagnostics.residual_sigma_eq = g.d_sigma;
    if (converged) {
      if (mu_est) fit.estimate.mu_hat = mu;
      if (sigma_est) fit.estimate.sigma_hat = sigma;
    } else {
      fit.estimate.failure = Failure::non_convergence;
    }
  };

  if (spec.mu_fixed) {
    // Conditional posterior in sigma is gamma-shaped; its mode is closed-form.
    const double mu0 = *spec.mu_fixed;
    const double sigma = (s.n * mu0 + hp.alpha2 - 1.0) / (mu0 * s.sum_T + hp.beta2);
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
      fit.estimate.failure = Failure::nonpositive_estimate;
      fit.report.final_gradient_norm = std::numeric_limits<double>::quiet_NaN();
      return fit;
    }
    const double resid = score_from(s, mu0, sigma, hp).d_sigma;
    finish(mu0, sigma, false, true, std::fabs(resid) <= grad_tol, 0, std::fabs(resid));
    return fit;
  }

  if (spec.sigma_fixed) {
    const double sigma0 = *spec.sigma_fixed;
    auto dmu = [&](double m) { return score_from(s, m, sigma0, hp).d_mu; };
    double mu0 = 1.0;
    if (init && init->mu > 0.0) mu0 = init->mu;
    double root = mu0, resid = dmu(mu0);
    int iters = 0;
    const bool okroot = solve_scalar_root(dmu, mu0, root, resid, iters);
    if (!okroot) {
      fit.estimate.failure = Failure::non_convergence;
      fit.report.iterations = iters;
      fit.report.final_gradient_norm = std::fabs(resid);
      fit.report.objective = lp_from(s, root, sigma0, hp);
      return fit;
    }
    finish(root, sigma0, true, false, true, iters, std::fabs(resid));
    return fit;
  }

  if (spec.sigma_link) {
    const SigmaLink& link = *spec.sigma_link;
    auto gof = [&](double m) { return link.reciprocal ? link.c / m : link.g(m); };
    auto dprofile = [&](double m) {
      const double sg = gof(m);
      const Score g = score_from(s, m, sg, hp);
      double gp;
      if (link.reciprocal) {
        gp = -link.c / (m * m);
      } else {
        const double h = std::max(1e-6 * m, 1e-12);
        gp = (gof(m + h) - gof(m - h)) / (2.0 * h);
      }
      return g.d_mu + g.d_sigma * gp;
    };
    double mu0 = init && init->mu > 0.0 ? init->mu : 1.0;
    double root = mu0, resid = dprofile(mu0);
    int iters = 0;
    const bool okroot = solve_scalar_root(dprofile, mu0, root, resid, iters);
    const double sg = gof(root);
    if (!okroot || !(sg > 0.0)) {
      fit.estimate.failure = Failure::non_convergence;
      fit.report.iterations = iters;
      fit.report.final_gradient_norm = std::fabs(resid);
      fit.report.objective = lp_from(s, root, sg, hp);
      return fit;
    }
    finish(root, sg, true, true, true, iters, std::fabs(resid));
    return fit;
  }

  // Free 2-d fit.
  Point p{1.0, 1.0};
  if (init && init->mu > 0.0 && init->sigma > 0.0) {
    p = {init->mu, init->sigma};
  } else {
    bool seeded = false;
    try {
      const Estimate cf = estimate_closed_form(spec, sample, SigmaPrior(hp));
      if (cf.ok() && cf.mu_hat && cf.sigma_hat) {
        p = {*cf.mu_hat, *cf.sigma_hat};
        seeded = true;
      }
    } catch (const std::exception&) {
    }
    if (!seeded) {
      // Moment heuristics: E T = 1/sigma, Var T = 1/(mu sigma^2).
      const double mean_T = s.sum_T / s.n;
      const double var_T = std::max(s.sum_T2 / s.n - mean_T * mean_T, 1e-300);
      const double sg = 1.0 / mean_T;
      const double mu = std::clamp(mean_T * mean_T / var_T, 1e-3, 1e3);
      p = {mu, sg};
    }
  }

  double gnorm = norm2(score_from(s, p.mu, p.sigma, hp));
  if (gnorm <= grad_tol) {
    finish(p.mu, p.sigma, true, true, true, 0, gnorm);
    return fit;
  }
  int iters = newton_polish(s, hp, p, 60, gnorm);
  if (gnorm > grad_tol && iters < max_total_iter) {
    iters += nelder_mead(s, hp, p, std::min(300, max_total_iter - iters));
    iters += newton_polish(s, hp, p, std::min(60, std::max(0, max_total_iter - iters)), gnorm);
  }
  finish(p.mu, p.sigma, true, true, gnorm <= grad_tol, iters, gnorm);
  return fit;
}

}  // namespace

double log_likelihood(const DistributionSpec& spec, std::span<const double> sample,
                      double mu, double sigma) {
  if (!(mu > 0.0) || !(sigma > 0.0))
    throw std::domain_error("log_likelihood: mu and sigma must be positive");
  const double v = lp_from(lik_summary(spec.generator, sample), mu, sigma, flat_hyper);
  if (!std::isfinite(v)) throw NumericRangeError("log_likelihood: non-finite value");
  return v;
}

double log_posterior(const DistributionSpec& spec, std::span<const double> sample,
                     double mu, double sigma, const HyperParams& hp) {
  if (!(mu > 0.0) || !(sigma > 0.0))
    throw std::domain_error("log_posterior: mu and sigma must be positive");
  const double v = lp_from(lik_summary(spec.generator, sample), mu, sigma, hp);
  if (!std::isfinite(v)) throw NumericRangeError("log_posterior: non-finite value");
  return v;
}

Score score(const DistributionSpec& spec, std::span<const double> sample, double mu,
            double sigma, const HyperParams& hp) {
  if (!(mu > 0.0) || !(sigma > 0.0))
    throw std::domain_error("score: mu and sigma must be positive");
  return score_from(lik_summary(spec.generator, sample), mu, sigma, hp);
}

NumericFit fit_map_numeric(const DistributionSpec& spec, std::span<const double> sample,
                           const HyperParams& hp, std::optional<CanonicalParams> init) {
  return fit_posterior(spec, sample, hp, init, Method::map_numeric);
}

NumericFit fit_ml_numeric(const DistributionSpec& spec, std::span<const double> sample,
                          std::optional<CanonicalParams> init) {
  return fit_posterior(spec, sample, flat_hyper, init, Method::ml_numeric);
}

}  // namespace expfam
