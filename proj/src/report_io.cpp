#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "dragmc/errors.hpp"
#include "dragmc/harness.hpp"
#include "json.hpp"

using nlohmann::json;

namespace dragmc {

void to_json(json& j, const ExperimentConfig& c) {
  j = json{{"problem", c.problem},   {"method", to_string(c.method)},
           {"n", c.n},               {"outer_sd", c.outer_sd},
           {"inner_sd", c.inner_sd}, {"iterations", c.iterations},
           {"burnin", c.burnin},     {"seed", c.seed},
           {"max_lag", c.max_lag},   {"out_dir", c.out_dir},
           {"slow_delay_us", c.slow_delay_us}};
}

void from_json(const json& j, ExperimentConfig& c) {
  auto get = [&](const char* key, auto& field) {
    if (!j.contains(key)) return;
    try {
      j.at(key).get_to(field);
    } catch (const json::exception&) {
      throw ConfigError(std::string(key) + ": wrong type in config file");
    }
  };
  get("problem", c.problem);
  if (j.contains("method")) {
    std::string m;
    get("method", m);
    c.method = parse_method(m);
  }
  get("n", c.n);
  get("outer_sd", c.outer_sd);
  get("inner_sd", c.inner_sd);
  get("iterations", c.iterations);
  get("burnin", c.burnin);
  get("seed", c.seed);
  get("max_lag", c.max_lag);
  get("out_dir", c.out_dir);
  get("slow_delay_us", c.slow_delay_us);
}

void to_json(json& j, const KernelStats& s) {
  j = json{{"outer_proposals", s.outer_proposals},
           {"outer_accepts", s.outer_accepts},
           {"inner_proposals", s.inner_proposals},
           {"inner_accepts", s.inner_accepts}};
}

void from_json(const json& j, KernelStats& s) {
  j.at("outer_proposals").get_to(s.outer_proposals);
  j.at("outer_accepts").get_to(s.outer_accepts);
  j.at("inner_proposals").get_to(s.inner_proposals);
  j.at("inner_accepts").get_to(s.inner_accepts);
}

void to_json(json& j, const EvalCounts& e) {
  j = json{{"slow_preparations", e.slow_preparations}, {"fast_evaluations", e.fast_evaluations}};
}

void from_json(const json& j, EvalCounts& e) {
  j.at("slow_preparations").get_to(e.slow_preparations);
  j.at("fast_evaluations").get_to(e.fast_evaluations);
}

void to_json(json& j, const ChainSummary& s) {
  j = json{{"length", s.length},
           {"mean", s.mean},
           {"variance", s.variance},
           {"acf", s.acf.values},
           {"iat", s.iat},
           {"iat_window30", s.iat_window30},
           {"rejection_rates", s.rejection_rates}};
}

void from_json(const json& j, ChainSummary& s) {
  j.at("length").get_to(s.length);
  j.at("mean").get_to(s.mean);
  j.at("variance").get_to(s.variance);
  j.at("acf").get_to(s.acf.values);
  j.at("iat").get_to(s.iat);
  j.at("iat_window30").get_to(s.iat_window30);
  j.at("rejection_rates").get_to(s.rejection_rates);
}

void to_json(json& j, const ExperimentReport& r) {
  j = json{{"config", r.config},
           {"x_summary", r.x_summary},
           {"stats", r.stats},
           {"eval_counts", r.eval_counts},
           {"wall_seconds", r.wall_seconds},
           {"simulated_cost_seconds", r.simulated_cost_seconds}};
}

void from_json(const json& j, ExperimentReport& r) {
  r.config = j.at("config").get<ExperimentConfig>();
  j.at("x_summary").get_to(r.x_summary);
  j.at("stats").get_to(r.stats);
  j.at("eval_counts").get_to(r.eval_counts);
  j.at("wall_seconds").get_to(r.wall_seconds);
  j.at("simulated_cost_seconds").get_to(r.simulated_cost_seconds);
}

std::string report_to_json(const ExperimentReport& r) { return json(r).dump(2); }

ExperimentReport report_from_json(const std::string& s) {
  try {
    return json::parse(s).get<ExperimentReport>();
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed report JSON: ") + e.what());
  }
}

std::string config_to_json(const ExperimentConfig& c) { return json(c).dump(2); }

ExperimentConfig config_from_json(const std::string& s, ExperimentConfig base) {
  json j;
  try {
    j = json::parse(s);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  from_json(j, base);
  return base;
}

namespace {

// %.17g round-trips every double exactly.
std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_chain_csv(std::ostream& os, const ChainTrace& chain) {
  os << "iter";
  for (std::size_t i = 0; i < chain.slow_dim; ++i) os << ",x" << i;
  for (std::size_t i = 0; i < chain.fast_dim; ++i) os << ",y" << i;
  os << ",accepted\n";
  for (std::size_t r = 0; r < chain.rows(); ++r) {
    os << chain.first_iter + static_cast<long>(r);
    for (std::size_t i = 0; i < chain.slow_dim; ++i) os << ',' << num(chain.x[r * chain.slow_dim + i]);
    for (std::size_t i = 0; i < chain.fast_dim; ++i) os << ',' << num(chain.y[r * chain.fast_dim + i]);
    os << ',' << static_cast<int>(chain.accepted[r]) << '\n';
  }
}

void write_figure1_csv(std::ostream& os, const std::vector<std::pair<double, double>>& points) {
  os << "x,y\n";
  for (const auto& [x, y] : points) os << num(x) << ',' << num(y) << '\n';
}

void write_acf_csv(std::ostream& os, const AcfComparison& cmp) {
  os << "problem,method,lag,acf\n";
  for (std::size_t m = 0; m < cmp.methods.size(); ++m) {
    const auto& acf = cmp.reports[m].x_summary.acf.values;
    for (std::size_t k = 0; k < acf.size(); ++k) {
      os << cmp.problem << ',' << cmp.methods[m].label() << ',' << k << ',' << num(acf[k]) << '\n';
    }
  }
}

void write_summary_csv(std::ostream& os, const AcfComparison& cmp) {
  os << "problem,method,iterations,iat,iat_window30,outer_rejection,inner_rejection,"
        "slow_preparations,fast_evaluations,wall_seconds\n";
  for (std::size_t m = 0; m < cmp.methods.size(); ++m) {
    const auto& r = cmp.reports[m];
    const auto& rates = r.x_summary.rejection_rates;
    auto rate = [&](std::initializer_list<const char*> keys) -> std::string {
      for (const char* k : keys) {
        if (auto it = rates.find(k); it != rates.end()) return num(it->second);
      }
      return "";
    };
    os << cmp.problem << ',' << cmp.methods[m].label() << ',' << r.config.iterations << ','
       << num(r.x_summary.iat) << ',' << num(r.x_summary.iat_window30) << ','
       << rate({"outer", "x"}) << ',' << rate({"inner", "y"}) << ','
       << r.eval_counts.slow_preparations << ',' << r.eval_counts.fast_evaluations << ','
       << num(r.wall_seconds) << '\n';
  }
}

void write_acf_svg(std::ostream& os, const AcfComparison& cmp) {
  constexpr double width = 640, height = 400, left = 60, right = 150, top = 30, bottom = 50;
  constexpr double y_min = -0.2, y_max = 1.0;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;
  std::size_t max_lag = 1;
  for (const auto& r : cmp.reports) max_lag = std::max(max_lag, r.x_summary.acf.max_lag());
  auto px = [&](double lag) { return left + plot_w * lag / static_cast<double>(max_lag); };
  auto py = [&](double v) { return top + plot_h * (y_max - v) / (y_max - y_min); };
  static const char* colors[] = {"#000000", "#1f77b4", "#ff7f0e", "#2ca02c",
                                 "#d62728", "#9467bd", "#8c564b", "#e377c2"};

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << left << "\" y=\"18\">Autocorrelation of x, " << cmp.problem << "</text>\n";
  // Axes and gridlines.
  for (double v = y_min; v <= y_max + 1e-9; v += 0.2) {
    os << "<line x1=\"" << left << "\" x2=\"" << left + plot_w << "\" y1=\"" << py(v) << "\" y2=\""
       << py(v) << "\" stroke=\"" << (std::abs(v) < 1e-9 ? "#888" : "#eee") << "\"/>\n";
    os << "<text x=\"" << left - 8 << "\" y=\"" << py(v) + 4 << "\" text-anchor=\"end\">"
       << num(std::round(v * 10) / 10) << "</text>\n";
  }
  for (std::size_t lag = 0; lag <= max_lag; lag += 5) {
    os << "<text x=\"" << px(static_cast<double>(lag)) << "\" y=\"" << top + plot_h + 18
       << "\" text-anchor=\"middle\">" << lag << "</text>\n";
  }
  os << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 10
     << "\" text-anchor=\"middle\">lag</text>\n";
  for (std::size_t m = 0; m < cmp.reports.size(); ++m) {
    const auto& acf = cmp.reports[m].x_summary.acf.values;
    const char* color = colors[m % std::size(colors)];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < acf.size(); ++k) {
      os << px(static_cast<double>(k)) << ',' << py(std::clamp(acf[k], y_min, y_max)) << ' ';
    }
    os << "\"/>\n";
    const double ly = top + 16.0 * static_cast<double>(m) + 8;
    os << "<line x1=\"" << width - right + 10 << "\" x2=\"" << width - right + 30 << "\" y1=\"" << ly
       << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << width - right + 36 << "\" y=\"" << ly + 4 << "\">" << cmp.methods[m].label()
       << "</text>\n";
  }
  os << "</svg>\n";
}

}  // namespace dragmc
