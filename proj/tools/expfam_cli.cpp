// expfam: fit / simulate / plot front end.
//
// Exit codes: 0 ok; 2 config error; 3 data error; 4 estimation failure;
// 5 simulation grid completed partially (results written, errors in manifest).

#include <cerrno>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "expfam/baselines.hpp"
#include "expfam/report.hpp"
#include "expfam/version.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_data = 3;
constexpr int exit_estimation = 4;
constexpr int exit_partial = 5;

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& tok, const std::string& what) {
  char* end = nullptr;
  const std::string t = trim(tok);
  errno = 0;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size())
    throw std::invalid_argument(what + ": bad number '" + t + "'");
  return v;
}

std::vector<std::pair<std::string, double>> parse_kv_pairs(
    const std::vector<std::string>& items, const std::string& what) {
  std::vector<std::pair<std::string, double>> out;
  for (const auto& item : items) {
    std::istringstream is(item);
    std::string piece;
    while (std::getline(is, piece, ',')) {
      piece = trim(piece);
      if (piece.empty()) continue;
      const auto eq = piece.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument(what + ": expected k=v, got '" + piece + "'");
      out.emplace_back(trim(piece.substr(0, eq)),
                       parse_double(piece.substr(eq + 1), what));
    }
  }
  return out;
}

// One positive real per line; # starts a comment.
std::vector<double> parse_data(std::istream& in, const std::string& origin) {
  std::vector<double> xs;
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(line.c_str(), &end);
    if (end != line.c_str() + line.size())
      throw DataError(origin + " line " + std::to_string(lineno) + ": bad value '" + line + "'");
    if (!std::isfinite(v) || !(v > 0.0))
      throw DataError(origin + " line " + std::to_string(lineno) +
                      ": values must be positive reals");
    xs.push_back(v);
  }
  if (xs.empty()) throw DataError(origin + ": no data values");
  return xs;
}

std::string f17(double v) { return expfam::format_double_17g(v); }

void print_estimate_block(std::ostream& os, const std::string& label,
                          const expfam::DistributionSpec& spec, const expfam::Estimate& est,
                          const expfam::OptimizerReport* report,
                          std::optional<double> digamma_resid) {
  os << "method: " << label << "\n";
  if (est.mu_hat) os << "  mu_hat: " << f17(*est.mu_hat) << "\n";
  else if (spec.mu_fixed) os << "  mu: " << f17(*spec.mu_fixed) << " (fixed)\n";
  if (est.sigma_hat) os << "  sigma_hat: " << f17(*est.sigma_hat) << "\n";
  else if (spec.sigma_fixed && est.ok())
    os << "  sigma: " << f17(*spec.sigma_fixed) << " (fixed)\n";
  if (!est.ok()) os << "  failure: " << expfam::failure_name(est.failure) << "\n";
  if (est.diagnostics.discriminant)
    os << "  discriminant: " << f17(*est.diagnostics.discriminant) << "\n";
  if (est.diagnostics.residual_sigma_eq)
    os << "  residual_sigma_eq: " << f17(*est.diagnostics.residual_sigma_eq) << "\n";
  if (est.diagnostics.residual_mu_eq)
    os << "  residual_mu_eq: " << f17(*est.diagnostics.residual_mu_eq) << "\n";
  if (digamma_resid) os << "  digamma_residual: " << f17(*digamma_resid) << "\n";
  if (report) {
    os << "  converged: " << (report->converged ? "true" : "false") << "\n";
    os << "  iterations: " << report->iterations << "\n";
    os << "  final_gradient_norm: " << f17(report->final_gradient_norm) << "\n";
    os << "  objective: " << f17(report->objective) << "\n";
  }
}

nlohmann::json estimate_to_json(const expfam::DistributionSpec& spec,
                                const expfam::Estimate& est,
                                const expfam::OptimizerReport* report,
                                std::optional<double> digamma_resid) {
  nlohmann::json j;
  if (est.mu_hat) j["mu"] = *est.mu_hat;
  if (est.sigma_hat) j["sigma"] = *est.sigma_hat;
  nlohmann::json fixed = nlohmann::json::object();
  if (spec.mu_fixed && !est.mu_hat) fixed["mu"] = *spec.mu_fixed;
  if (spec.sigma_fixed && !est.sigma_hat && est.ok()) fixed["sigma"] = *spec.sigma_fixed;
  if (!fixed.empty()) j["fixed"] = fixed;
  j["failure"] = expfam::failure_name(est.failure);
  nlohmann::json diag = nlohmann::json::object();
  if (est.diagnostics.discriminant) diag["discriminant"] = *est.diagnostics.discriminant;
  if (est.diagnostics.residual_sigma_eq)
    diag["residual_sigma_eq"] = *est.diagnostics.residual_sigma_eq;
  if (est.diagnostics.residual_mu_eq) diag["residual_mu_eq"] = *est.diagnostics.residual_mu_eq;
  if (digamma_resid) diag["digamma_residual"] = *digamma_resid;
  j["diagnostics"] = diag;
  if (report) {
    j["report"] = {{"converged", report->converged},
                   {"iterations", report->iterations},
                   {"final_gradient_norm", report->final_gradient_norm},
                   {"objective", report->objective}};
  }
  return j;
}

int resolve_workers() {
  const char* env = std::getenv("EXPFAM_THREADS");
  if (env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1)
      throw std::invalid_argument(std::string("EXPFAM_THREADS: bad value '") + env + "'");
    return static_cast<int>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

int cmd_fit(const std::string& dist, const std::vector<std::string>& params_raw,
            const std::string& data_path, bool use_stdin, const std::string& method,
            const std::vector<std::string>& hp_raw, bool json_out) {
  expfam::DistributionSpec spec;
  expfam::HyperParams hp;
  bool want_closed = false, want_map = false, want_ml = false;
  try {
    const auto params = parse_kv_pairs(params_raw, "--params");
    spec = expfam::registry_lookup(dist, params);
    for (const auto& [k, v] : parse_kv_pairs(hp_raw, "--hp")) {
      if (k == "alpha1") hp.alpha1 = v;
      else if (k == "beta1") hp.beta1 = v;
      else if (k == "alpha2") hp.alpha2 = v;
      else if (k == "beta2") hp.beta2 = v;
      else throw std::invalid_argument("--hp: unknown key '" + k + "'");
    }
    if (method == "closed") want_closed = true;
    else if (method == "map") want_map = true;
    else if (method == "ml") want_ml = true;
    else if (method == "all") want_closed = want_map = want_ml = true;
    else throw std::invalid_argument("--method must be closed, map, ml, or all");
    if (use_stdin == !data_path.empty())
      throw std::invalid_argument("exactly one of --data or --stdin is required");
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config;
  }

  std::vector<double> xs;
  try {
    if (use_stdin) {
      xs = parse_data(std::cin, "stdin");
    } else {
      std::ifstream in(data_path);
      if (!in) throw DataError("cannot open '" + data_path + "'");
      xs = parse_data(in, data_path);
    }
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return exit_data;
  }

  nlohmann::json out = nlohmann::json::object();
  std::ostringstream human;
  bool any_failed = false;
  std::string failure_reason;

  auto digamma_diag = [&](const expfam::Estimate& est) -> std::optional<double> {
    // Exact d/d(mu) stationarity residual, reported for fixed-sigma rows.
    if (!spec.sigma_fixed || !est.ok() || !est.mu_hat) return std::nullopt;
    return expfam::score(spec, xs, *est.mu_hat, *spec.sigma_fixed, hp).d_mu;
  };

  try {
    if (want_closed) {
      const expfam::Estimate est = expfam::estimate_closed_form(spec, xs, expfam::SigmaPrior(hp));
      print_estimate_block(human, "closed_form", spec, est, nullptr, digamma_diag(est));
      out["closed_form"] = estimate_to_json(spec, est, nullptr, digamma_diag(est));
      if (!est.ok()) { any_failed = true; failure_reason = expfam::failure_name(est.failure); }
    }
    if (want_map) {
      const expfam::NumericFit fit = expfam::fit_map_numeric(spec, xs, hp);
      print_estimate_block(human, "map_numeric", spec, fit.estimate, &fit.report, std::nullopt);
      out["map_numeric"] = estimate_to_json(spec, fit.estimate, &fit.report, std::nullopt);
      if (!fit.estimate.ok()) { any_failed = true; failure_reason = expfam::failure_name(fit.estimate.failure); }
    }
    if (want_ml) {
      const expfam::NumericFit fit = expfam::fit_ml_numeric(spec, xs);
      print_estimate_block(human, "ml_numeric", spec, fit.estimate, &fit.report, std::nullopt);
      out["ml_numeric"] = estimate_to_json(spec, fit.estimate, &fit.report, std::nullopt);
      if (!fit.estimate.ok()) { any_failed = true; failure_reason = expfam::failure_name(fit.estimate.failure); }
    }
  } catch (const expfam::SampleDomainError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return exit_data;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config;
  }

  if (json_out) std::cout << out.dump(2) << "\n";
  else std::cout << human.str();
  if (any_failed) {
    std::cerr << "estimation failure: " << failure_reason << "\n";
    return exit_estimation;
  }
  return exit_ok;
}

int cmd_simulate(const std::string& config_path, const std::string& n_grid_override,
                 int reps_override, const std::string& seed_override,
                 const std::string& out_dir) {
  expfam::SimConfig config;
  int workers = 1;
  try {
    config = expfam::load_config_file(config_path);
    if (!n_grid_override.empty()) {
      config.n_grid.clear();
      std::istringstream is(n_grid_override);
      std::string tok;
      while (std::getline(is, tok, ','))
        config.n_grid.push_back(static_cast<int>(parse_double(tok, "--n-grid")));
    }
    if (reps_override > 0) config.replications = reps_override;
    if (!seed_override.empty()) {
      char* end = nullptr;
      config.seed = std::strtoull(seed_override.c_str(), &end, 10);
      if (end != seed_override.c_str() + seed_override.size())
        throw std::invalid_argument("--seed: bad value '" + seed_override + "'");
    }
    expfam::validate(config);
    workers = resolve_workers();
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config;
  } catch (const std::runtime_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config;
  }

  const std::string started = expfam::iso8601_utc_now();
  const expfam::GridResult result = expfam::run_grid(config, workers);
  const std::string finished = expfam::iso8601_utc_now();

  try {
    std::filesystem::create_directories(out_dir);
    const std::string csv_path = out_dir + "/results.csv";
    const std::string manifest_path = out_dir + "/manifest.json";
    expfam::write_text_file(csv_path, expfam::render_results_csv(result.rows));
    expfam::write_text_file(manifest_path,
                            expfam::render_manifest_json(config, result, started, finished));
    std::cout << "wrote " << csv_path << " (" << result.rows.size() << " rows)\n";
    std::cout << "wrote " << manifest_path << "\n";
  } catch (const std::exception& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return exit_data;
  }

  if (!result.errors.empty()) {
    for (const auto& err : result.errors) std::cerr << "cell error: " << err << "\n";
    return exit_partial;
  }
  return exit_ok;
}

int cmd_plot(const std::string& in_path, const std::string& out_dir) {
  std::vector<expfam::MetricRow> rows;
  try {
    rows = expfam::parse_results_csv(expfam::read_text_file(in_path));
  } catch (const std::exception& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return exit_data;
  }
  try {
    std::filesystem::create_directories(out_dir);
    for (const auto& group : expfam::group_for_plots(rows)) {
      const std::string base = out_dir + "/" + group.distribution + "_" + group.parameter;
      expfam::write_text_file(base + ".svg", expfam::render_plot_svg(group));
      expfam::write_text_file(base + ".dat", expfam::render_plot_dat(group));
      std::cout << "wrote " << base << ".svg and .dat\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return exit_data;
  }
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Closed-form and numeric MAP/ML estimation for generator-defined "
               "exponential families, with a Monte Carlo bias/MSE harness"};
  app.set_version_flag("--version", expfam::version);
  app.require_subcommand(1);

  auto* fit = app.add_subcommand("fit", "Estimate (mu, sigma) from a data file");
  std::string dist;
  std::vector<std::string> params_raw, hp_raw;
  std::string data_path, method = "all";
  bool use_stdin = false, json_out = false;
  fit->add_option("--dist", dist, "registry distribution name")->required();
  fit->add_option("--params", params_raw, "conventional parameters, k=v");
  fit->add_option("--data", data_path, "data file, one positive real per line");
  fit->add_flag("--stdin", use_stdin, "read data from stdin");
  fit->add_option("--method", method, "closed | map | ml | all (default all)");
  fit->add_option("--hp", hp_raw, "hyperparameters alpha1=..,beta1=..,alpha2=..,beta2=..");
  fit->add_flag("--json", json_out, "emit a single JSON object");

  auto* sim = app.add_subcommand("simulate", "Run a Monte Carlo bias/MSE grid");
  std::string config_path, n_grid_override, seed_override, out_dir = ".";
  int reps_override = 0;
  sim->add_option("--config", config_path, "key=value or JSON config file")->required();
  sim->add_option("--n-grid", n_grid_override, "override n grid, comma-separated");
  sim->add_option("--reps", reps_override, "override replication count");
  sim->add_option("--seed", seed_override, "override seed");
  sim->add_option("--out", out_dir, "output directory (default .)");

  auto* plot = app.add_subcommand("plot", "Render SVG/.dat plots from results.csv");
  std::string in_path, plot_out = ".";
  plot->add_option("--in", in_path, "results.csv path")->required();
  plot->add_option("--out", plot_out, "output directory (default .)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_config;
  }

  try {
    if (fit->parsed())
      return cmd_fit(dist, params_raw, data_path, use_stdin, method, hp_raw, json_out);
    if (sim->parsed())
      return cmd_simulate(config_path, n_grid_override, reps_override, seed_override, out_dir);
    return cmd_plot(in_path, plot_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_config;
  }
}
