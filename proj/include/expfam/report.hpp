#pragma once

// Config parsing and result serialization for the CLI.
//
// results.csv schema (frozen):
//   distribution,method,parameter,n,rel_bias,mc_se_bias,mse,mc_se_mse,failures,seed
// with doubles rendered to 17 significant digits (round-trip exact).
//
// Config files: flat key=value text (distribution lines repeatable) or a JSON
// object mirroring SimConfig. Both map onto the same struct; # starts a
// comment in text configs and data files.

#include <span>
#include <string>
#include <vector>

#include "expfam/montecarlo.hpp"

namespace expfam {

// Accepts closed_form / map_numeric / ml_numeric.
Method method_from_name(const std::string& name);

SimConfig parse_config_text(const std::string& text);
SimConfig parse_config_json(const std::string& text);
// Dispatches on leading '{'. Parse problems -> std::invalid_argument.
SimConfig load_config_file(const std::string& path);

std::string render_results_csv(std::span<const MetricRow> rows);
// Strict: exact header, 10 fields per row, fully-consumed numerics.
// Malformed input -> std::runtime_error with the offending line number.
std::vector<MetricRow> parse_results_csv(const std::string& content);

std::string render_manifest_json(const SimConfig& config, const GridResult& result,
                                 const std::string& started, const std::string& finished);

// One plot group per (distribution, parameter); one series per method.
struct PlotSeries {
  std::string method;
  std::vector<int> n;
  std::vector<double> rel_bias, rel_bias_se, mse_value, mse_se;
};
struct PlotGroup {
  std::string distribution;
  std::string parameter;
  std::vector<PlotSeries> series;
};

std::vector<PlotGroup> group_for_plots(std::span<const MetricRow> rows);
// Minimal hand-written SVG: two panels (rel_bias, MSE) against log-x n.
std::string render_plot_svg(const PlotGroup& group);
// Gnuplot-style blocks: "# <dist> <param> <method> <metric>" then n\tvalue\tse.
std::string render_plot_dat(const PlotGroup& group);

std::string iso8601_utc_now();
std::string format_double_17g(double v);

std::string read_text_file(const std::string& path);   // std::runtime_error on failure
void write_text_file(const std::string& path, const std::string& content);

}  // namespace expfam
