#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dragmc/diagnostics.hpp"
#include "dragmc/kernels.hpp"
#include "dragmc/model.hpp"
#include "dragmc/testbed.hpp"

namespace dragmc {

enum class Method { joint, single, marginal, drag };

std::string to_string(Method m);
/// Throws ConfigError naming the "method" field for unknown names.
Method parse_method(const std::string& s);

/// One chain run. Fields left at their zero value are "unset";
/// with_defaults() fills them with the standard experiment settings.
struct ExperimentConfig {
  std::string problem = "test1";
  Method method = Method::drag;
  int n = 0;                      ///< drag only
  std::vector<double> outer_sd;   ///< sds for the slow variables
  std::vector<double> inner_sd;   ///< sds for the fast variables (not used by marginal)
  long iterations = 0;
  double burnin = 0.1;            ///< fraction of iterations discarded
  std::uint64_t seed = 1;
  long max_lag = 30;
  std::string out_dir;            ///< empty: write nothing
  long slow_delay_us = 0;

  /// Proposal widths and run length used for the test problems:
  /// joint 0.5 (0.3 on test2), single 0.25, marginal 1.0, drag 1.0 outer /
  /// 0.2 inner; 1e5 iterations, or 2e4 for drag with n > 100.
  ExperimentConfig with_defaults() const;

  /// Throws ConfigError whose message names the offending field.
  void validate() const;

  bool operator==(const ExperimentConfig&) const = default;
};

struct ExperimentReport {
  ExperimentConfig config;
  ChainSummary x_summary;  ///< diagnostics of the first slow coordinate
  KernelStats stats;
  EvalCounts eval_counts;
  double wall_seconds = 0.0;
  /// Wall time with the busy-wait replaced by its nominal cost
  /// slow_preparations * slow_delay_us.
  double simulated_cost_seconds = 0.0;

  bool operator==(const ExperimentReport&) const = default;
};

/// Post-burn-in chain, row-major.
struct ChainTrace {
  std::size_t slow_dim = 0;
  std::size_t fast_dim = 0;  ///< 0 for marginal runs
  long first_iter = 0;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<std::uint8_t> accepted;

  std::size_t rows() const { return accepted.size(); }
  /// Column c of the slow variables.
  std::vector<double> x_column(std::size_t c = 0) const;
};

struct ExperimentResult {
  ExperimentReport report;
  ChainTrace chain;
};

/// Runs the chain and computes diagnostics; no file output. Deterministic
/// given the seed (apart from timing fields).
ExperimentResult run_chain(const ExperimentConfig& cfg);

/// run_chain, then writes chain.csv and report.json to cfg.out_dir when set.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

/// Runs independent configurations concurrently.
std::vector<ExperimentResult> run_batch(const std::vector<ExperimentConfig>& cfgs);

namespace reference {
std::vector<ExperimentResult> run_batch(const std::vector<ExperimentConfig>& cfgs);
}  // namespace reference

// ---------------------------------------------------------------------------
// Figures

/// 1000 (x, y) points from test 1: x from a marginal Metropolis chain thinned
/// by 20, y drawn from the conditional given x.
std::vector<std::pair<double, double>> emit_figure1(const ExperimentConfig& cfg);

struct MethodSpec {
  Method method = Method::marginal;
  int n = 0;

  std::string label() const;  ///< "marginal", "joint", "single", "drag-500", ...
  bool operator==(const MethodSpec&) const = default;
};

/// marginal, joint, single, drag-20, drag-100, drag-500.
std::vector<MethodSpec> default_methods();
/// Parses "marginal,joint,drag:20" style lists.
std::vector<MethodSpec> parse_method_list(const std::string& s);

struct AcfComparison {
  std::string problem;
  std::vector<MethodSpec> methods;
  std::vector<ExperimentReport> reports;  ///< same order as methods
};

/// Runs every method on one problem with shared seed/burn-in/max_lag (and
/// iterations, if set in shared; otherwise per-method defaults). Writes
/// acf.csv, summary.csv, and optionally acf.svg to shared.out_dir.
AcfComparison emit_acf_comparison(const std::string& problem, const std::vector<MethodSpec>& methods,
                                  const ExperimentConfig& shared, bool write_svg = false);

// ---------------------------------------------------------------------------
// Serialization

std::string report_to_json(const ExperimentReport& r);
ExperimentReport report_from_json(const std::string& s);

std::string config_to_json(const ExperimentConfig& c);
/// Fields absent from the document keep the values in base.
ExperimentConfig config_from_json(const std::string& s, ExperimentConfig base = {});

void write_chain_csv(std::ostream& os, const ChainTrace& chain);
void write_figure1_csv(std::ostream& os, const std::vector<std::pair<double, double>>& points);
void write_acf_csv(std::ostream& os, const AcfComparison& cmp);
void write_summary_csv(std::ostream& os, const AcfComparison& cmp);
void write_acf_svg(std::ostream& os, const AcfComparison& cmp);

}  // namespace dragmc
