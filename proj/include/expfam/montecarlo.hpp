#pragma once

// Bias/MSE simulation harness over distribution x method x n grids.
//
// Determinism contract: replication i of a cell draws from its own RNG
// stream (cell_seed, i+1), results are reduced in replication-index order,
// and failed replications are counted per parameter — so output bytes are
// identical for any worker count.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "expfam/baselines.hpp"
#include "expfam/sampling.hpp"

namespace expfam {

// One simulation target: generator shape constants only — the sampling truth
// (mu, sigma) comes from the config, not from a conventional-parameter row.
struct SimDist {
  std::string name;
  std::vector<std::pair<std::string, double>> params;
  std::optional<double> s;  // power-path exponent for the closed-form method
};

struct SimConfig {
  std::vector<SimDist> distributions;
  double true_mu = 2.0;
  double true_sigma = 1.0;
  std::vector<int> n_grid;
  int replications = 0;
  HyperParams hp;
  std::vector<Method> methods;  // subset of closed_form/map_numeric/ml_numeric
  std::uint64_t seed = 0;
};

struct MetricRow {
  std::string distribution;
  Method method = Method::closed_form;
  std::string parameter;  // "mu" | "sigma"
  int n = 0;
  double rel_bias = 0.0;   // mean |(est - truth)/truth| over successes
  double mc_se_bias = 0.0;
  double mse = 0.0;
  double mc_se_mse = 0.0;
  std::int64_t failures = 0;
  std::uint64_t seed = 0;  // the cell seed this row was drawn from
};

struct GridResult {
  std::vector<MetricRow> rows;
  std::vector<std::string> errors;  // one entry per cell that produced no rows
};

// Mean absolute relative deviation (the paper's "relative bias").
double relative_bias(std::span<const double> estimates, double truth);
double mse(std::span<const double> estimates, double truth);

// Stable 64-bit mix of (seed, distribution index, method index, n).
std::uint64_t cell_seed(std::uint64_t seed, std::size_t dist_index,
                        std::size_t method_index, int n);

void validate(const SimConfig& config);  // throws std::invalid_argument

// Two rows: parameter "mu" then "sigma". Throws when every replication
// failed for either parameter.
std::array<MetricRow, 2> run_cell(const SimDist& dist, Method method, int n, int N,
                                  CanonicalParams truth, const HyperParams& hp,
                                  std::uint64_t seed, int workers);

// Full Cartesian product; cell errors are collected, not rethrown.
GridResult run_grid(const SimConfig& config, int workers);

}  // namespace expfam
