#include "expfam/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

#include "expfam/version.hpp"

namespace expfam {

namespace {

constexpr const char* csv_header =
    "distribution,method,parameter,n,rel_bias,mc_se_bias,mse,mc_se_mse,failures,seed";

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_double_strict(const std::string& tok, const std::string& what) {
  char* end = nullptr;
  const std::string t = trim(tok);
  if (t.empty()) throw std::runtime_error(what + ": empty number");
  errno = 0;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size())
    throw std::runtime_error(what + ": bad number '" + t + "'");
  return v;
}

long long parse_int_strict(const std::string& tok, const std::string& what) {
  char* end = nullptr;
  const std::string t = trim(tok);
  if (t.empty()) throw std::runtime_error(what + ": empty integer");
  const long long v = std::strtoll(t.c_str(), &end, 10);
  if (end != t.c_str() + t.size())
    throw std::runtime_error(what + ": bad integer '" + t + "'");
  return v;
}

std::uint64_t parse_u64_strict(const std::string& tok, const std::string& what) {
  char* end = nullptr;
  const std::string t = trim(tok);
  if (t.empty() || t[0] == '-') throw std::runtime_error(what + ": bad unsigned '" + t + "'");
  const unsigned long long v = std::strtoull(t.c_str(), &end, 10);
  if (end != t.c_str() + t.size())
    throw std::runtime_error(what + ": bad unsigned '" + t + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

Method method_from_name(const std::string& name) {
  if (name == "closed_form") return Method::closed_form;
  if (name == "map_numeric") return Method::map_numeric;
  if (name == "ml_numeric") return Method::ml_numeric;
  throw std::invalid_argument("unknown method '" + name + "'");
}

std::string format_double_17g(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

SimConfig parse_config_text(const std::string& text) {
  SimConfig c;
  bool saw_reps = false;
  std::istringstream is(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(is, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    const std::string where = "config line " + std::to_string(lineno) + " (" + key + ")";
    try {
      if (key == "distribution") {
        const auto toks = split_ws(val);
        if (toks.empty()) throw std::invalid_argument("missing distribution name");
        SimDist d;
        d.name = toks[0];
        for (std::size_t i = 1; i < toks.size(); ++i) {
          const auto peq = toks[i].find('=');
          if (peq == std::string::npos)
            throw std::invalid_argument("expected k=v, got '" + toks[i] + "'");
          const std::string pk = toks[i].substr(0, peq);
          const double pv = parse_double_strict(toks[i].substr(peq + 1), where);
          if (pk == "s") d.s = pv;
          else d.params.emplace_back(pk, pv);
        }
        c.distributions.push_back(std::move(d));
      } else if (key == "true_mu") {
        c.true_mu = parse_double_strict(val, where);
      } else if (key == "true_sigma") {
        c.true_sigma = parse_double_strict(val, where);
      } else if (key == "n_grid") {
        c.n_grid.clear();
        for (const auto& tok : split(val, ','))
          c.n_grid.push_back(static_cast<int>(parse_int_strict(tok, where)));
      } else if (key == "replications") {
        c.replications = static_cast<int>(parse_int_strict(val, where));
        saw_reps = true;
      } else if (key == "methods") {
        c.methods.clear();
        for (const auto& tok : split(val, ','))
          c.methods.push_back(method_from_name(trim(tok)));
      } else if (key == "alpha1") {
        c.hp.alpha1 = parse_double_strict(val, where);
      } else if (key == "beta1") {
        c.hp.beta1 = parse_double_strict(val, where);
      } else if (key == "alpha2") {
        c.hp.alpha2 = parse_double_strict(val, where);
      } else if (key == "beta2") {
        c.hp.beta2 = parse_double_strict(val, where);
      } else if (key == "seed") {
        c.seed = parse_u64_strict(val, where);
      } else {
        throw std::invalid_argument("unknown key");
      }
    } catch (const std::runtime_error& e) {
      throw std::invalid_argument(e.what());
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(where + ": " + e.what());
    }
  }
  if (!saw_reps) throw std::invalid_argument("config: replications is required");
  return c;
}

SimConfig parse_config_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("config JSON parse error: ") + e.what());
  }
  try {
    SimConfig c;
    for (const auto& d : j.at("distributions")) {
      SimDist sd;
      sd.name = d.at("name").get<std::string>();
      if (d.contains("params"))
        for (const auto& [k, v] : d.at("params").items())
          sd.params.emplace_back(k, v.get<double>());
      if (d.contains("s")) sd.s = d.at("s").get<double>();
      c.distributions.push_back(std::move(sd));
    }
    c.true_mu = j.value("true_mu", 2.0);
    c.true_sigma = j.value("true_sigma", 1.0);
    c.n_grid = j.at("n_grid").get<std::vector<int>>();
    c.replications = j.at("replications").get<int>();
    if (j.contains("hp")) {
      const auto& h = j.at("hp");
      c.hp.alpha1 = h.value("alpha1", 0.01);
      c.hp.beta1 = h.value("beta1", 0.01);
      c.hp.alpha2 = h.value("alpha2", 0.01);
      c.hp.beta2 = h.value("beta2", 0.01);
    }
    for (const auto& m : j.at("methods"))
      c.methods.push_back(method_from_name(m.get<std::string>()));
    c.seed = j.value("seed", std::uint64_t{0});
    return c;
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("config JSON: ") + e.what());
  }
}

SimConfig load_config_file(const std::string& path) {
  const std::string text = read_text_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return parse_config_json(text);
  return parse_config_text(text);
}

std::string render_results_csv(std::span<const MetricRow> rows) {
  std::string out = csv_header;
  out += '\n';
  for (const auto& r : rows) {
    out += r.distribution;
    out += ',';
    out += method_name(r.method);
    out += ',';
    out += r.parameter;
    out += ',';
    out += std::to_string(r.n);
    out += ',';
    out += format_double_17g(r.rel_bias);
    out += ',';
    out += format_double_17g(r.mc_se_bias);
    out += ',';
    out += format_double_17g(r.mse);
    out += ',';
    out += format_double_17g(r.mc_se_mse);
    out += ',';
    out += std::to_string(r.failures);
    out += ',';
    out += std::to_string(r.seed);
    out += '\n';
  }
  return out;
}

std::vector<MetricRow> parse_results_csv(const std::string& content) {
  std::istringstream is(content);
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("results.csv: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != csv_header)
    throw std::runtime_error("results.csv: unexpected header '" + line + "'");
  std::vector<MetricRow> rows;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto f = split(line, ',');
    const std::string where = "results.csv line " + std::to_string(lineno);
    if (f.size() != 10) throw std::runtime_error(where + ": expected 10 fields");
    MetricRow r;
    r.distribution = trim(f[0]);
    try {
      r.method = method_from_name(trim(f[1]));
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error(where + ": " + e.what());
    }
    r.parameter = trim(f[2]);
    if (r.parameter != "mu" && r.parameter != "sigma")
      throw std::runtime_error(where + ": parameter must be mu or sigma");
    r.n = static_cast<int>(parse_int_strict(f[3], where));
    if (r.n < 1) throw std::runtime_error(where + ": n must be positive");
    r.rel_bias = parse_double_strict(f[4], where);
    r.mc_se_bias = parse_double_strict(f[5], where);
    r.mse = parse_double_strict(f[6], where);
    r.mc_se_mse = parse_double_strict(f[7], where);
    r.failures = parse_int_strict(f[8], where);
    if (r.failures < 0) throw std::runtime_error(where + ": failures must be >= 0");
    r.seed = parse_u64_strict(f[9], where);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string render_manifest_json(const SimConfig& config, const GridResult& result,
                                 const std::string& started, const std::string& finished) {
  nlohmann::json j;
  j["version"] = version;
  j["seed"] = config.seed;
  j["started"] = started;
  j["finished"] = finished;

  nlohmann::json cfg;
  cfg["true_mu"] = config.true_mu;
  cfg["true_sigma"] = config.true_sigma;
  cfg["n_grid"] = config.n_grid;
  cfg["replications"] = config.replications;
  cfg["hp"] = {{"alpha1", config.hp.alpha1},
               {"beta1", config.hp.beta1},
               {"alpha2", config.hp.alpha2},
               {"beta2", config.hp.beta2}};
  cfg["seed"] = config.seed;
  cfg["methods"] = nlohmann::json::array();
  for (Method m : config.methods) cfg["methods"].push_back(method_name(m));
  cfg["distributions"] = nlohmann::json::array();
  for (const auto& d : config.distributions) {
    nlohmann::json jd;
    jd["name"] = d.name;
    nlohmann::json params = nlohmann::json::object();
    for (const auto& [k, v] : d.params) params[k] = v;
    jd["params"] = params;
    if (d.s) jd["s"] = *d.s;
    cfg["distributions"].push_back(jd);
  }
  j["config"] = cfg;

  // Pair the two parameter rows of each cell into one failure record.
  std::map<std::tuple<std::string, std::string, int>, nlohmann::json> cells;
  for (const auto& r : result.rows) {
    auto key = std::make_tuple(r.distribution, std::string(method_name(r.method)), r.n);
    auto& cell = cells[key];
    if (cell.is_null()) {
      cell["distribution"] = r.distribution;
      cell["method"] = method_name(r.method);
      cell["n"] = r.n;
      cell["seed"] = r.seed;
      cell["failures"] = nlohmann::json::object();
    }
    cell["failures"][r.parameter] = r.failures;
  }
  j["cells"] = nlohmann::json::array();
  for (auto& [key, cell] : cells) j["cells"].push_back(std::move(cell));
  j["errors"] = result.errors;
  return j.dump(2) + "\n";
}

std::vector<PlotGroup> group_for_plots(std::span<const MetricRow> rows) {
  std::map<std::pair<std::string, std::string>, std::map<std::string, PlotSeries>> acc;
  for (const auto& r : rows) {
    auto& series = acc[{r.distribution, r.parameter}][method_name(r.method)];
    series.method = method_name(r.method);
    series.n.push_back(r.n);
    series.rel_bias.push_back(r.rel_bias);
    series.rel_bias_se.push_back(r.mc_se_bias);
    series.mse_value.push_back(r.mse);
    series.mse_se.push_back(r.mc_se_mse);
  }
  std::vector<PlotGroup> out;
  for (auto& [key, methods] : acc) {
    PlotGroup g;
    g.distribution = key.first;
    g.parameter = key.second;
    for (auto& [mname, s] : methods) {
      // sort points by n
      std::vector<std::size_t> idx(s.n.size());
      for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
      std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return s.n[a] < s.n[b]; });
      PlotSeries sorted;
      sorted.method = s.method;
      for (std::size_t i : idx) {
        sorted.n.push_back(s.n[i]);
        sorted.rel_bias.push_back(s.rel_bias[i]);
        sorted.rel_bias_se.push_back(s.rel_bias_se[i]);
        sorted.mse_value.push_back(s.mse_value[i]);
        sorted.mse_se.push_back(s.mse_se[i]);
      }
      g.series.push_back(std::move(sorted));
    }
    out.push_back(std::move(g));
  }
  return out;
}

namespace {

constexpr const char* palette[] = {"#1b6ca8", "#d1495b", "#3a7d44", "#8d6a9f"};

std::string svg_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

// One panel: series of (n, value, se) with log-x, linear-y from zero.
void render_panel(std::string& svg, const PlotGroup& g, bool use_mse, double x0, double y0,
                  double w, double h, const std::string& title) {
  double xmin = 1e300, xmax = -1e300, ymax = 0.0;
  for (const auto& s : g.series)
    for (std::size_t i = 0; i < s.n.size(); ++i) {
      const double lx = std::log10(static_cast<double>(s.n[i]));
      xmin = std::min(xmin, lx);
      xmax = std::max(xmax, lx);
      const double v = use_mse ? s.mse_value[i] : s.rel_bias[i];
      const double se = use_mse ? s.mse_se[i] : s.rel_bias_se[i];
      ymax = std::max(ymax, v + se);
    }
  if (xmax <= xmin) xmax = xmin + 1.0;
  if (ymax <= 0.0) ymax = 1.0;
  ymax *= 1.08;
  auto X = [&](double n) { return x0 + (std::log10(n) - xmin) / (xmax - xmin) * w; };
  auto Y = [&](double v) { return y0 + h - v / ymax * h; };

  svg += "<rect x=\"" + svg_num(x0) + "\" y=\"" + svg_num(y0) + "\" width=\"" + svg_num(w) +
         "\" height=\"" + svg_num(h) + "\" fill=\"none\" stroke=\"#888\"/>\n";
  svg += "<text x=\"" + svg_num(x0 + w / 2) + "\" y=\"" + svg_num(y0 - 8) +
         "\" text-anchor=\"middle\" font-size=\"12\">" + xml_escape(title) + "</text>\n";

  // y ticks
  for (int k = 0; k <= 4; ++k) {
    const double v = ymax * k / 4.0;
    const double y = Y(v);
    char lbl[32];
    std::snprintf(lbl, sizeof lbl, "%.3g", v);
    svg += "<line x1=\"" + svg_num(x0 - 3) + "\" y1=\"" + svg_num(y) + "\" x2=\"" +
           svg_num(x0) + "\" y2=\"" + svg_num(y) + "\" stroke=\"#888\"/>\n";
    svg += "<text x=\"" + svg_num(x0 - 6) + "\" y=\"" + svg_num(y + 3.5) +
           "\" text-anchor=\"end\" font-size=\"10\">" + lbl + "</text>\n";
  }
  // x ticks at observed n
  std::vector<int> ns;
  for (const auto& s : g.series) ns.insert(ns.end(), s.n.begin(), s.n.end());
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  for (int n : ns) {
    const double x = X(n);
    svg += "<line x1=\"" + svg_num(x) + "\" y1=\"" + svg_num(y0 + h) + "\" x2=\"" +
           svg_num(x) + "\" y2=\"" + svg_num(y0 + h + 3) + "\" stroke=\"#888\"/>\n";
    svg += "<text x=\"" + svg_num(x) + "\" y=\"" + svg_num(y0 + h + 14) +
           "\" text-anchor=\"middle\" font-size=\"10\">" + std::to_string(n) + "</text>\n";
  }

  int ci = 0;
  for (const auto& s : g.series) {
    const std::string color = palette[ci % 4];
    std::string pts;
    for (std::size_t i = 0; i < s.n.size(); ++i) {
      const double v = use_mse ? s.mse_value[i] : s.rel_bias[i];
      pts += svg_num(X(s.n[i])) + "," + svg_num(Y(v)) + " ";
    }
    svg += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + color +
           "\" stroke-width=\"1.5\"/>\n";
    for (std::size_t i = 0; i < s.n.size(); ++i) {
      const double v = use_mse ? s.mse_value[i] : s.rel_bias[i];
      const double se = use_mse ? s.mse_se[i] : s.rel_bias_se[i];
      svg += "<circle cx=\"" + svg_num(X(s.n[i])) + "\" cy=\"" + svg_num(Y(v)) +
             "\" r=\"2.2\" fill=\"" + color + "\"/>\n";
      if (se > 0.0) {
        svg += "<line x1=\"" + svg_num(X(s.n[i])) + "\" y1=\"" + svg_num(Y(v - se)) +
               "\" x2=\"" + svg_num(X(s.n[i])) + "\" y2=\"" + svg_num(Y(v + se)) +
               "\" stroke=\"" + color + "\" stroke-width=\"1\"/>\n";
      }
    }
    ++ci;
  }
}

}  // namespace

std::string render_plot_svg(const PlotGroup& g) {
  const double W = 760, H = 320;
  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + svg_num(W) +
                    "\" height=\"" + svg_num(H) + "\" viewBox=\"0 0 " + svg_num(W) + " " +
                    svg_num(H) + "\" font-family=\"sans-serif\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + svg_num(W / 2) + "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" +
         xml_escape(g.distribution + " - " + g.parameter) + "</text>\n";
  render_panel(svg, g, false, 55, 50, 280, 210, "relative bias");
  render_panel(svg, g, true, 430, 50, 280, 210, "MSE");
  // legend
  double lx = 55, ly = H - 18;
  int ci = 0;
  for (const auto& s : g.series) {
    const std::string color = palette[ci % 4];
    svg += "<line x1=\"" + svg_num(lx) + "\" y1=\"" + svg_num(ly - 4) + "\" x2=\"" +
           svg_num(lx + 22) + "\" y2=\"" + svg_num(ly - 4) + "\" stroke=\"" + color +
           "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + svg_num(lx + 27) + "\" y=\"" + svg_num(ly) +
           "\" font-size=\"11\">" + xml_escape(s.method) + "</text>\n";
    lx += 40.0 + 7.0 * static_cast<double>(s.method.size());
    ++ci;
  }
  svg += "<text x=\"" + svg_num(W - 20) + "\" y=\"" + svg_num(H - 18) +
         "\" text-anchor=\"end\" font-size=\"10\" fill=\"#666\">n (log scale)</text>\n";
  svg += "</svg>\n";
  return svg;
}

std::string render_plot_dat(const PlotGroup& g) {
  std::string out;
  for (const auto& s : g.series) {
    for (int metric = 0; metric < 2; ++metric) {
      out += "# " + g.distribution + " " + g.parameter + " " + s.method + " " +
             (metric == 0 ? "rel_bias" : "mse") + "\n";
      for (std::size_t i = 0; i < s.n.size(); ++i) {
        const double v = metric == 0 ? s.rel_bias[i] : s.mse_value[i];
        const double se = metric == 0 ? s.rel_bias_se[i] : s.mse_se[i];
        out += std::to_string(s.n[i]) + "\t" + format_double_17g(v) + "\t" +
               format_double_17g(se) + "\n";
      }
      out += "\n";
    }
  }
  return out;
}

std::string iso8601_utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace expfam
