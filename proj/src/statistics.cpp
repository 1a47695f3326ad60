#include "expfam/statistics.hpp"

#include <cmath>
#include <string>

namespace expfam {

namespace {

struct KahanSum {
  double s = 0.0, c = 0.0;
  void add(double v) {
    const double y = v - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
};

SampleStats finish_stats(std::size_t n, const KahanSum& s1, const KahanSum& s2,
                         const KahanSum& s3, const KahanSum& s4, const SigmaPrior& prior) {
  SampleStats st;
  st.n = n;
  const double dn = static_cast<double>(n);
  st.xbar1 = s1.s / dn;
  st.xbar2 = s2.s / dn;
  st.xbar3 = s3.s / dn;
  st.xbar4 = s4.s / dn;
  // Definitional identity, kept bit-for-bit so downstream equalities are exact.
  st.xbar5 = prior.beta2 * st.xbar3 + (prior.alpha2 - 1.0) * st.xbar4;
  return st;
}

}  // namespace

HValues h_values(const Generator& g, double x) {
  if (g.is_power) {
    const double t = eval_T(g, x);
    const double h3 = g.power * std::log(x);
    return {t, 0.0, h3, t * h3};
  }
  const double t = eval_T(g, x);
  const double t1 = eval_T_prime(g, x);
  const double t2 = eval_T_second(g, x);
  const double lx = std::log(x);
  const double xlx = x * lx;
  HValues h;
  h.h1 = t;
  h.h2 = lx + (t2 / t1 - t1 / t) * xlx;
  h.h3 = (t1 / t) * xlx;
  h.h4 = t1 * xlx;
  if (!std::isfinite(h.h2) || !std::isfinite(h.h3) || !std::isfinite(h.h4))
    throw NumericRangeError(g.name + ": h-values overflow at x = " + std::to_string(x));
  return h;
}

SampleStats compute_stats(const Generator& g, std::span<const double> sample,
                          const SigmaPrior& prior) {
  if (sample.empty()) throw std::invalid_argument("compute_stats: empty sample");
  KahanSum s1, s2, s3, s4;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    try {
      const HValues h = h_values(g, sample[i]);
      s1.add(h.h1);
      s2.add(h.h2);
      s3.add(h.h3);
      s4.add(h.h4);
    } catch (const std::exception& e) {
      throw SampleDomainError(i, "observation " + std::to_string(i) + ": " + e.what());
    }
  }
  return finish_stats(sample.size(), s1, s2, s3, s4, prior);
}

SampleStats compute_power_stats(std::span<const double> sample, double s,
                                const SigmaPrior& prior) {
  if (!(s != 0.0) || !std::isfinite(s))
    throw std::invalid_argument("compute_power_stats: s must be finite and nonzero");
  // Same code path as compute_stats on the power generator T = x^{-s}, so the
  // two agree bitwise on pure-power rows.
  return compute_stats(make_power_generator(-s), sample, prior);
}

}  // namespace expfam
