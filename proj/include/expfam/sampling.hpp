#pragma once

// Exact sampling for the family: if X has density
// (mu sigma)^mu / Gamma(mu) |T'| T^{mu-1} exp(-mu sigma T), then
// U = T(X) ~ Gamma(shape mu, rate mu sigma), so X = T^{-1}(U).
//
// Streams are independent xoshiro256++ generators keyed by (seed, stream_id)
// through a splitmix64 avalanche, so replication r of any Monte Carlo cell
// can be re-drawn in isolation and results do not depend on thread count.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "expfam/generators.hpp"

namespace expfam {

class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t next_u64();
  double next_double();       // uniform [0, 1), 53-bit
  double next_open_double();  // uniform (0, 1)
  double next_normal();       // standard normal, Marsaglia polar
  // Marsaglia-Tsang for shape >= 1; shape < 1 boosted via Gamma(shape+1) U^{1/shape}.
  double next_gamma(double shape, double rate);

 private:
  std::array<std::uint64_t, 4> s_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// 64-bit avalanche used for stream and cell seeding (splitmix64 finalizer).
std::uint64_t mix64(std::uint64_t z);

double sample_gamma(RngStream& rng, double shape, double rate);

// n draws of X = T^{-1}(U); SampleDomainError-style index context on failure.
std::vector<double> sample_family(RngStream& rng, const DistributionSpec& spec,
                                  std::size_t n);

}  // namespace expfam
