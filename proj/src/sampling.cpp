#include "expfam/sampling.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace expfam {

namespace {

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

std::uint64_t mix64(std::uint64_t z) {
  // splitmix64 finalizer (Steele, Lea, Flood 2014).
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id) {
  // Two avalanche rounds decorrelate (seed, stream) lattices before filling
  // the xoshiro state with successive splitmix64 outputs.
  std::uint64_t z = mix64(seed ^ mix64(stream_id ^ 0x5851f42d4c957f2dull));
  for (auto& w : s_) {
    z += 0x9e3779b97f4a7c15ull;
    std::uint64_t t = z;
    t = (t ^ (t >> 30)) * 0xbf58476d1ce4e5b9ull;
    t = (t ^ (t >> 27)) * 0x94d049bb133111ebull;
    w = t ^ (t >> 31);
  }
  if (s_[0] == 0 && s_[1] == 0 && s_[2] == 0 && s_[3] == 0) s_[0] = 1;
}

std::uint64_t RngStream::next_u64() {
  // xoshiro256++ (Blackman & Vigna 2019).
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double RngStream::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::next_open_double() {
  double u;
  do {
    u = next_double();
  } while (u == 0.0);
  return u;
}

double RngStream::next_normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * next_double() - 1.0;
    v = 2.0 * next_double() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double m = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * m;
  has_spare_ = true;
  return u * m;
}

double RngStream::next_gamma(double shape, double rate) {
  if (!(shape > 0.0) || !(rate > 0.0))
    throw std::domain_error("next_gamma: shape and rate must be positive");
  if (shape < 1.0) {
    const double u = next_open_double();
    return next_gamma(shape + 1.0, rate) * std::pow(u, 1.0 / shape);
  }
  // Marsaglia & Tsang (2000), squeeze then log acceptance.
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = next_normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = next_open_double();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v / rate;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v / rate;
  }
}

double sample_gamma(RngStream& rng, double shape, double rate) {
  return rng.next_gamma(shape, rate);
}

std::vector<double> sample_family(RngStream& rng, const DistributionSpec& spec,
                                  std::size_t n) {
  const double mu = spec.canonical.mu, sigma = spec.canonical.sigma;
  if (!(mu > 0.0) || !(sigma > 0.0))
    throw std::invalid_argument("sample_family: canonical (mu, sigma) must be positive");
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.next_gamma(mu, mu * sigma);
    try {
      out.push_back(eval_T_inverse(spec.generator, u));
    } catch (const std::exception& e) {
      throw NumericRangeError("draw " + std::to_string(i) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace expfam
