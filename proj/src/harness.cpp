#include "dragmc/harness.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "dragmc/errors.hpp"

namespace dragmc {

namespace {

constexpr long kMinIterations = 1000;
constexpr std::size_t kFigure1Points = 1000;
constexpr std::size_t kFigure1Thin = 20;

std::vector<double> broadcast(const std::vector<double>& sds, std::size_t dim,
                              const std::string& field) {
  if (sds.size() == dim) return sds;
  if (sds.size() == 1) return std::vector<double>(dim, sds.front());
  throw ConfigError(field + ": expected 1 or " + std::to_string(dim) + " values, got " +
                    std::to_string(sds.size()));
}

GaussianWalkProposal make_proposal(const std::vector<double>& sds, std::size_t dim,
                                   const std::string& field) {
  try {
    return GaussianWalkProposal(broadcast(sds, dim, field));
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    if (what.rfind(field, 0) == 0) throw;
    throw ConfigError(field + ": " + what);
  }
}

long burnin_rows(const ExperimentConfig& cfg) {
  return static_cast<long>(std::floor(static_cast<double>(cfg.iterations) * cfg.burnin));
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + dir + "': " + ec.message());
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream os(p);
  if (!os) throw std::runtime_error("cannot open '" + p.string() + "' for writing");
  return os;
}

}  // namespace

std::string to_string(Method m) {
  switch (m) {
    case Method::joint: return "joint";
    case Method::single: return "single";
    case Method::marginal: return "marginal";
    case Method::drag: return "drag";
  }
  return "?";
}

Method parse_method(const std::string& s) {
  if (s == "joint") return Method::joint;
  if (s == "single") return Method::single;
  if (s == "marginal") return Method::marginal;
  if (s == "drag") return Method::drag;
  throw ConfigError("method: unknown method '" + s + "' (expected joint|single|marginal|drag)");
}

ExperimentConfig ExperimentConfig::with_defaults() const {
  ExperimentConfig c = *this;
  if (c.outer_sd.empty()) {
    switch (c.method) {
      case Method::joint: c.outer_sd = {c.problem == "test2" ? 0.3 : 0.5}; break;
      case Method::single: c.outer_sd = {0.25}; break;
      case Method::marginal:
      case Method::drag: c.outer_sd = {1.0}; break;
    }
  }
  if (c.inner_sd.empty()) {
    switch (c.method) {
      case Method::joint: c.inner_sd = {c.problem == "test2" ? 0.3 : 0.5}; break;
      case Method::single: c.inner_sd = {0.25}; break;
      case Method::drag: c.inner_sd = {0.2}; break;
      case Method::marginal: break;
    }
  }
  if (c.iterations == 0) c.iterations = (c.method == Method::drag && c.n > 100) ? 20000 : 100000;
  return c;
}

void ExperimentConfig::validate() const {
  const auto model = make_problem(problem);  // throws for unknown problems
  if (method == Method::drag) {
    if (n < 1) throw ConfigError("n: required and >= 1 for method drag");
  } else if (n != 0) {
    throw ConfigError("n: only valid for method drag");
  }
  if (outer_sd.empty()) throw ConfigError("outer_sd: not set");
  make_proposal(outer_sd, model->slow_dim(), "outer_sd");
  if (method == Method::marginal) {
    if (!inner_sd.empty()) throw ConfigError("inner_sd: not used by method marginal");
  } else {
    if (inner_sd.empty()) throw ConfigError("inner_sd: not set");
    make_proposal(inner_sd, model->fast_dim(), "inner_sd");
  }
  if (iterations < kMinIterations) {
    throw ConfigError("iterations: must be >= " + std::to_string(kMinIterations));
  }
  if (!(burnin >= 0.0 && burnin <= 0.9)) throw ConfigError("burnin: must be in [0, 0.9]");
  if (max_lag < 0 || max_lag >= iterations - burnin_rows(*this)) {
    throw ConfigError("max_lag: must be in [0, post-burn-in length)");
  }
  if (slow_delay_us < 0) throw ConfigError("slow_delay_us: must be >= 0");
}

std::vector<double> ChainTrace::x_column(std::size_t c) const {
  std::vector<double> out(rows());
  for (std::size_t r = 0; r < out.size(); ++r) out[r] = x[r * slow_dim + c];
  return out;
}

ExperimentResult run_chain(const ExperimentConfig& cfg) {
  cfg.validate();
  auto model = make_problem(cfg.problem);
  model->set_slow_delay(std::chrono::microseconds(cfg.slow_delay_us));
  const std::size_t dx = model->slow_dim();
  const std::size_t dy = model->fast_dim();

  Rng rng(cfg.seed);
  KernelStats stats;
  const long burn = burnin_rows(cfg);

  ExperimentResult result;
  ChainTrace& chain = result.chain;
  chain.slow_dim = dx;
  chain.fast_dim = cfg.method == Method::marginal ? 0 : dy;
  chain.first_iter = burn;
  const auto rows = static_cast<std::size_t>(cfg.iterations - burn);
  chain.x.reserve(rows * dx);
  chain.y.reserve(rows * chain.fast_dim);
  chain.accepted.reserve(rows);

  auto record = [&](long it, const SlowVector& x, const FastVector* y, bool accepted) {
    if (it < burn) return;
    chain.x.insert(chain.x.end(), x.values.begin(), x.values.end());
    if (y) chain.y.insert(chain.y.end(), y->values.begin(), y->values.end());
    chain.accepted.push_back(accepted ? 1 : 0);
  };

  const auto start = std::chrono::steady_clock::now();
  const GaussianWalkProposal outer = make_proposal(cfg.outer_sd, dx, "outer_sd");
  if (cfg.method == Method::marginal) {
    const MarginalEnergy marginal = [](const SlowVector& x) {
      double e = 0.0;
      for (double v : x.values) e += test1_marginal_energy(v);
      return e;
    };
    MarginalState state{SlowVector{std::vector<double>(dx, 0.0)}, 0.0};
    state.energy = marginal(state.x);
    for (long it = 0; it < cfg.iterations; ++it) {
      const bool acc = marginal_step(state, marginal, outer, rng, stats);
      record(it, state.x, nullptr, acc);
    }
  } else {
    const GaussianWalkProposal inner = make_proposal(cfg.inner_sd, dy, "inner_sd");
    // Start at the conditional mode for x = 0.
    ChainState state =
        make_state(*model, SlowVector{std::vector<double>(dx, 0.0)}, FastVector{std::vector<double>(dy, 0.0)});
    std::vector<double> joint_sds = outer.sds();
    joint_sds.insert(joint_sds.end(), inner.sds().begin(), inner.sds().end());
    const GaussianWalkProposal joint(joint_sds);
    const DragConfig drag{cfg.n, inner, 1};

    for (long it = 0; it < cfg.iterations; ++it) {
      bool acc = false;
      switch (cfg.method) {
        case Method::joint: acc = joint_step(state, joint, *model, rng, stats); break;
        case Method::single: acc = single_var_step(state, outer, inner, *model, rng, stats); break;
        case Method::drag: acc = drag_step(state, outer, drag, *model, rng, stats); break;
        case Method::marginal: break;
      }
      record(it, state.x, &state.y, acc);
    }
  }
  const auto stop = std::chrono::steady_clock::now();

  ExperimentReport& rep = result.report;
  rep.config = cfg;
  rep.stats = stats;
  rep.eval_counts = model->eval_counts();
  rep.wall_seconds = std::chrono::duration<double>(stop - start).count();
  rep.simulated_cost_seconds =
      rep.wall_seconds - std::chrono::duration<double>(model->delay_spent()).count() +
      static_cast<double>(rep.eval_counts.slow_preparations) * static_cast<double>(cfg.slow_delay_us) * 1e-6;

  rep.x_summary = summarize_chain(chain.x_column(0), cfg.max_lag);
  auto& rates = rep.x_summary.rejection_rates;
  switch (cfg.method) {
    case Method::single:
      rates["x"] = rejection_rate(stats, CounterPair::outer);
      rates["y"] = rejection_rate(stats, CounterPair::inner);
      break;
    case Method::drag:
      rates["outer"] = rejection_rate(stats, CounterPair::outer);
      if (stats.inner_proposals > 0) rates["inner"] = rejection_rate(stats, CounterPair::inner);
      break;
    case Method::joint:
    case Method::marginal:
      rates["outer"] = rejection_rate(stats, CounterPair::outer);
      break;
  }
  return result;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  ExperimentResult res = run_chain(cfg);
  if (!cfg.out_dir.empty()) {
    ensure_dir(cfg.out_dir);
    const std::filesystem::path dir(cfg.out_dir);
    auto csv = open_out(dir / "chain.csv");
    write_chain_csv(csv, res.chain);
    auto json = open_out(dir / "report.json");
    json << report_to_json(res.report) << '\n';
  }
  return res.report;
}

std::vector<ExperimentResult> run_batch(const std::vector<ExperimentConfig>& cfgs) {
  for (const auto& c : cfgs) c.validate();
  std::vector<ExperimentResult> out(cfgs.size());
  const auto count = static_cast<long>(cfgs.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < count; ++i) {
    out[static_cast<std::size_t>(i)] = run_chain(cfgs[static_cast<std::size_t>(i)]);
  }
  return out;
}

namespace reference {

std::vector<ExperimentResult> run_batch(const std::vector<ExperimentConfig>& cfgs) {
  std::vector<ExperimentResult> out;
  out.reserve(cfgs.size());
  for (const auto& c : cfgs) out.push_back(run_chain(c));
  return out;
}

}  // namespace reference

std::vector<std::pair<double, double>> emit_figure1(const ExperimentConfig& cfg) {
  if (cfg.problem != "test1") throw ConfigError("problem: figure 1 is defined for test1 only");
  ExperimentConfig c = cfg;
  c.method = Method::marginal;
  c.n = 0;
  c.inner_sd.clear();
  c.out_dir.clear();
  c = c.with_defaults();
  const auto needed = static_cast<long>(kFigure1Points * kFigure1Thin);
  while (c.iterations - burnin_rows(c) < needed) c.iterations += needed;

  const ExperimentResult res = run_chain(c);
  const std::vector<double> xs = res.chain.x_column(0);
  Rng fill(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<std::pair<double, double>> points;
  points.reserve(kFigure1Points);
  for (std::size_t r = 0; points.size() < kFigure1Points; r += kFigure1Thin) {
    points.emplace_back(xs[r], test1_conditional_sample(xs[r], fill));
  }
  if (!cfg.out_dir.empty()) {
    ensure_dir(cfg.out_dir);
    auto os = open_out(std::filesystem::path(cfg.out_dir) / "figure1.csv");
    write_figure1_csv(os, points);
  }
  return points;
}

std::string MethodSpec::label() const {
  if (method == Method::drag) return "drag-" + std::to_string(n);
  return to_string(method);
}

std::vector<MethodSpec> default_methods() {
  return {{Method::marginal, 0}, {Method::joint, 0},    {Method::single, 0},
          {Method::drag, 20},    {Method::drag, 100},   {Method::drag, 500}};
}

std::vector<MethodSpec> parse_method_list(const std::string& s) {
  std::vector<MethodSpec> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto colon = item.find(':');
    MethodSpec m{parse_method(item.substr(0, colon)), 0};
    if (colon != std::string::npos) {
      try {
        m.n = std::stoi(item.substr(colon + 1));
      } catch (const std::exception&) {
        throw ConfigError("methods: bad ladder size in '" + item + "'");
      }
    }
    if ((m.method == Method::drag) != (m.n > 0)) {
      throw ConfigError("methods: '" + item + "' (drag needs drag:<n>, others take no n)");
    }
    out.push_back(m);
  }
  if (out.empty()) throw ConfigError("methods: empty method list");
  return out;
}

AcfComparison emit_acf_comparison(const std::string& problem, const std::vector<MethodSpec>& methods,
                                  const ExperimentConfig& shared, bool write_svg) {
  std::vector<ExperimentConfig> cfgs;
  for (const auto& m : methods) {
    ExperimentConfig c = shared;
    c.problem = problem;
    c.method = m.method;
    c.n = m.n;
    c.outer_sd.clear();
    c.inner_sd.clear();
    c.out_dir.clear();
    cfgs.push_back(c.with_defaults());
  }
  AcfComparison cmp{problem, methods, {}};
  for (auto& r : run_batch(cfgs)) cmp.reports.push_back(std::move(r.report));

  if (!shared.out_dir.empty()) {
    ensure_dir(shared.out_dir);
    const std::filesystem::path dir(shared.out_dir);
    auto acf = open_out(dir / "acf.csv");
    write_acf_csv(acf, cmp);
    auto summary = open_out(dir / "summary.csv");
    write_summary_csv(summary, cmp);
    if (write_svg) {
      auto svg = open_out(dir / "acf.svg");
      write_acf_svg(svg, cmp);
    }
  }
  return cmp;
}

}  // namespace dragmc
