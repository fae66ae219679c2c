// dragmc: run the test experiments for the dragging Metropolis sampler.
//
// Exit status: 0 success, 2 configuration error, 1 runtime error.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "dragmc/errors.hpp"
#include "dragmc/harness.hpp"
#include "dragmc/testbed.hpp"

namespace {

using dragmc::ExperimentConfig;

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;
constexpr double kDetailedBalanceTolerance = 1e-12;

/// Raw flag values; applied on top of an optional JSON config file.
struct Flags {
  std::string config_file;
  std::string problem;
  std::string method;
  int n = 0;
  std::vector<double> outer_sd;
  std::vector<double> inner_sd;
  long iters = 0;
  double burnin = 0.0;
  std::uint64_t seed = 0;
  long max_lag = 0;
  std::string out;
  long slow_delay_us = 0;
};

struct FlagOptions {
  CLI::Option* problem = nullptr;
  CLI::Option* method = nullptr;
  CLI::Option* n = nullptr;
  CLI::Option* outer_sd = nullptr;
  CLI::Option* inner_sd = nullptr;
  CLI::Option* iters = nullptr;
  CLI::Option* burnin = nullptr;
  CLI::Option* seed = nullptr;
  CLI::Option* max_lag = nullptr;
  CLI::Option* out = nullptr;
  CLI::Option* slow_delay = nullptr;
};

FlagOptions add_run_flags(CLI::App* app, Flags& f, bool with_method) {
  FlagOptions o;
  app->add_option("--config", f.config_file, "JSON config file; flags override its fields");
  o.problem = app->add_option("--problem", f.problem, "test1 | test2");
  if (with_method) {
    o.method = app->add_option("--method", f.method, "joint | single | marginal | drag");
    o.n = app->add_option("--n", f.n, "ladder segments (drag only)");
    o.outer_sd = app->add_option("--outer-sd", f.outer_sd, "proposal sd(s) for the slow variables");
    o.inner_sd = app->add_option("--inner-sd", f.inner_sd, "proposal sd(s) for the fast variables");
  }
  o.iters = app->add_option("--iters", f.iters, "iterations");
  o.burnin = app->add_option("--burnin", f.burnin, "burn-in fraction (default 0.1)");
  o.seed = app->add_option("--seed", f.seed, "RNG seed");
  o.max_lag = app->add_option("--max-lag", f.max_lag, "largest ACF lag reported (default 30)");
  o.out = app->add_option("--out", f.out, "output directory");
  o.slow_delay = app->add_option("--slow-delay-us", f.slow_delay_us,
                                 "artificial cost added to each slow preparation");
  return o;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw dragmc::ConfigError("config: cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig build_config(const Flags& f, const FlagOptions& o, const std::string& default_out) {
  ExperimentConfig c;
  c.out_dir = default_out;
  if (!f.config_file.empty()) c = dragmc::config_from_json(read_file(f.config_file), c);
  auto given = [](const CLI::Option* opt) { return opt != nullptr && opt->count() > 0; };
  if (given(o.problem)) c.problem = f.problem;
  if (given(o.method)) c.method = dragmc::parse_method(f.method);
  if (given(o.n)) c.n = f.n;
  if (given(o.outer_sd)) c.outer_sd = f.outer_sd;
  if (given(o.inner_sd)) c.inner_sd = f.inner_sd;
  if (given(o.iters)) c.iterations = f.iters;
  if (given(o.burnin)) c.burnin = f.burnin;
  if (given(o.seed)) c.seed = f.seed;
  if (given(o.max_lag)) c.max_lag = f.max_lag;
  if (given(o.out)) c.out_dir = f.out;
  if (given(o.slow_delay)) c.slow_delay_us = f.slow_delay_us;
  return c;
}

void print_report(const dragmc::ExperimentReport& r) {
  const auto& s = r.x_summary;
  std::cout << std::fixed << std::setprecision(4);
  std::cout << r.config.problem << " " << to_string(r.config.method);
  if (r.config.method == dragmc::Method::drag) std::cout << " n=" << r.config.n;
  std::cout << "  iters=" << r.config.iterations << " seed=" << r.config.seed << "\n";
  std::cout << "  x mean " << s.mean << "  var " << s.variance << "\n";
  std::cout << "  IAT " << s.iat << "  (window 30: " << s.iat_window30 << ")\n";
  for (const auto& [name, rate] : s.rejection_rates) {
    std::cout << "  rejection[" << name << "] " << rate << "\n";
  }
  std::cout << "  slow preparations " << r.eval_counts.slow_preparations << ", fast evaluations "
            << r.eval_counts.fast_evaluations << "\n";
  std::cout << "  wall " << r.wall_seconds << " s, simulated cost " << r.simulated_cost_seconds
            << " s\n";
}

int cmd_db_check(const std::vector<int>& ns) {
  const auto dm = dragmc::DiscreteModel::standard();
  bool ok = true;
  std::cout << "discrete model: " << dm.x_grid.size() << " x values, " << dm.y_grid.size()
            << " y values\n";
  for (int n : ns) {
    const auto p = dragmc::discrete_drag_transition_matrix(dm, n);
    const auto r = dragmc::check_detailed_balance(dm, p, n);
    const bool pass = r.max_violation < kDetailedBalanceTolerance;
    ok = ok && pass;
    std::cout << std::scientific << std::setprecision(3) << "n=" << n
              << "  max|pi_u P_uv - pi_v P_vu| = " << r.max_violation
              << "  max row-sum error = " << r.max_row_sum_error
              << "  max |piP - pi| = " << r.max_stationarity_error << "  "
              << (pass ? "PASS" : "FAIL") << "\n";
  }
  return ok ? 0 : kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dragging fast variables: Metropolis samplers for fast/slow models"};
  app.require_subcommand(1);

  Flags run_flags, fig_flags, acf_flags;
  auto* run = app.add_subcommand("run", "run one chain and write chain.csv + report.json");
  const FlagOptions run_opts = add_run_flags(run, run_flags, true);

  auto* fig1 = app.add_subcommand("fig1", "1000-point scatter sample from test1 (figure1.csv)");
  const FlagOptions fig_opts = add_run_flags(fig1, fig_flags, false);

  auto* acf = app.add_subcommand("acf-compare", "ACF curves for the six methods (acf.csv, summary.csv)");
  const FlagOptions acf_opts = add_run_flags(acf, acf_flags, false);
  std::string methods = "marginal,joint,single,drag:20,drag:100,drag:500";
  acf->add_option("--methods", methods, "comma list, e.g. marginal,joint,drag:500");
  bool svg = false;
  acf->add_flag("--svg", svg, "also write acf.svg");

  auto* db = app.add_subcommand("db-check", "exhaustive detailed-balance check on the discrete model");
  std::vector<int> db_ns{1, 2, 3};
  db->add_option("--n", db_ns, "ladder sizes to check (1..4)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*run) {
      ExperimentConfig c = build_config(run_flags, run_opts, "dragmc-out").with_defaults();
      const auto report = dragmc::run_experiment(c);
      print_report(report);
      std::cout << "wrote " << c.out_dir << "/chain.csv and report.json\n";
    } else if (*fig1) {
      ExperimentConfig c = build_config(fig_flags, fig_opts, "dragmc-out");
      dragmc::emit_figure1(c);
      std::cout << "wrote " << c.out_dir << "/figure1.csv\n";
    } else if (*acf) {
      ExperimentConfig c = build_config(acf_flags, acf_opts, "dragmc-out");
      const auto cmp = dragmc::emit_acf_comparison(c.problem, dragmc::parse_method_list(methods), c, svg);
      for (const auto& r : cmp.reports) print_report(r);
      std::cout << "wrote " << c.out_dir << "/acf.csv and summary.csv" << (svg ? " and acf.svg" : "")
                << "\n";
    } else if (*db) {
      return cmd_db_check(db_ns);
    }
  } catch (const dragmc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const dragmc::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
