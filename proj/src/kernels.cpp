#include "dragmc/kernels.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "dragmc/errors.hpp"

namespace dragmc {

GaussianWalkProposal::GaussianWalkProposal(std::vector<double> sds) : sds_(std::move(sds)) {
  if (sds_.empty()) throw ConfigError("proposal needs at least one standard deviation");
  for (double sd : sds_) {
    if (!(sd > 0.0) || !std::isfinite(sd)) {
      throw ConfigError("proposal standard deviations must be finite and > 0, got " +
                        std::to_string(sd));
    }
  }
}

void DragConfig::validate(std::size_t fast_dim) const {
  if (n < 1) throw ConfigError("drag n must be >= 1, got " + std::to_string(n));
  if (inner_steps_per_level < 1) throw ConfigError("inner_steps_per_level must be >= 1");
  if (inner_proposal.dim() != fast_dim) {
    throw ConfigError("inner proposal has dimension " + std::to_string(inner_proposal.dim()) +
                      ", model has " + std::to_string(fast_dim) + " fast variables");
  }
}

std::vector<double> propose_walk(std::span<const double> current,
                                 const GaussianWalkProposal& proposal, Rng& rng) {
  std::vector<double> out(current.size());
  propose_walk_into(current, proposal, rng, out);
  return out;
}

void propose_walk_into(std::span<const double> current, const GaussianWalkProposal& proposal,
                       Rng& rng, std::span<double> out) {
  if (current.size() != proposal.dim() || out.size() != current.size()) {
    throw ConfigError("proposal dimension " + std::to_string(proposal.dim()) +
                      " does not match state dimension " + std::to_string(current.size()));
  }
  const auto& sds = proposal.sds();
  for (std::size_t i = 0; i < current.size(); ++i) out[i] = current[i] + sds[i] * rng.normal();
}

bool metropolis_accept(double log_ratio, Rng& rng) {
  if (std::isnan(log_ratio)) throw ModelError("NaN log acceptance ratio");
  return std::log(rng.uniform_open()) < log_ratio;
}

double log_rho_i(int i, int n, double e_x, double e_xstar) {
  if (n < 1 || i < 0 || i > n) {
    throw InputError("ladder index " + std::to_string(i) + " outside 0.." + std::to_string(n));
  }
  // Integer weights keep the expression exactly symmetric under
  // (i, e_x, e_xstar) -> (n - i, e_xstar, e_x).
  const double wx = static_cast<double>(n - i);
  const double wxs = static_cast<double>(i);
  return -(wx * e_x + wxs * e_xstar) / static_cast<double>(n);
}

double drag_log_accept_ratio(std::span<const double> e_x, std::span<const double> e_xstar) {
  if (e_x.size() != e_xstar.size() || e_x.empty()) {
    throw InputError("energy lists must be non-empty and of equal length");
  }
  double diff = 0.0;
  for (std::size_t i = 0; i < e_x.size(); ++i) diff += e_x[i] - e_xstar[i];
  return diff / static_cast<double>(e_x.size());
}

namespace {

void inner_transition_impl(int i, int n, LadderPoint& point, FastVector& scratch,
                           const SlowContext& ctx_x, const SlowContext& ctx_xstar,
                           const DragConfig& cfg, EnergyModel& model, Rng& rng,
                           KernelStats& stats) {
  if (i < 1 || i > n - 1) {
    throw InputError("inner transition level " + std::to_string(i) + " outside 1.." +
                     std::to_string(n - 1));
  }
  scratch.values.resize(point.y.size());
  for (int step = 0; step < cfg.inner_steps_per_level; ++step) {
    propose_walk_into(point.y.values, cfg.inner_proposal, rng, scratch.values);
    const double e_x = model.energy(ctx_x, scratch);
    const double e_xstar = model.energy(ctx_xstar, scratch);
    const double log_ratio =
        log_rho_i(i, n, e_x, e_xstar) - log_rho_i(i, n, point.e_x, point.e_xstar);
    ++stats.inner_proposals;
    if (metropolis_accept(log_ratio, rng)) {
      std::swap(point.y, scratch);
      point.e_x = e_x;
      point.e_xstar = e_xstar;
      ++stats.inner_accepts;
    }
  }
}

}  // namespace

void inner_transition(int i, int n, LadderPoint& point, const SlowContext& ctx_x,
                      const SlowContext& ctx_xstar, const DragConfig& cfg, EnergyModel& model,
                      Rng& rng, KernelStats& stats) {
  FastVector scratch;
  inner_transition_impl(i, n, point, scratch, ctx_x, ctx_xstar, cfg, model, rng, stats);
}

FastVector inner_transition(int i, int n, const FastVector& y, const SlowContext& ctx_x,
                            const SlowContext& ctx_xstar, const DragConfig& cfg,
                            EnergyModel& model, Rng& rng, KernelStats& stats) {
  LadderPoint point{y, model.energy(ctx_x, y), model.energy(ctx_xstar, y)};
  inner_transition(i, n, point, ctx_x, ctx_xstar, cfg, model, rng, stats);
  return std::move(point.y);
}

bool drag_step(ChainState& state, const GaussianWalkProposal& outer, const DragConfig& cfg,
               EnergyModel& model, Rng& rng, KernelStats& stats, DragTrace* trace) {
  cfg.validate(state.y.size());
  const int n = cfg.n;

  SlowVector xstar{propose_walk(state.x.values, outer, rng)};
  SlowContext ctx_star = model.prepare_slow(xstar);
  ++stats.outer_proposals;

  // E(x, y_0) is already cached in the state; only E(x*, y_0) is new.
  LadderPoint point{state.y, state.energy, model.energy(ctx_star, state.y)};
  std::vector<double> e_x(static_cast<std::size_t>(n));
  std::vector<double> e_xstar(static_cast<std::size_t>(n));
  e_x[0] = point.e_x;
  e_xstar[0] = point.e_xstar;
  if (trace) {
    trace->path.assign(1, point.y);
  }

  FastVector scratch;
  for (int i = 1; i < n; ++i) {
    inner_transition_impl(i, n, point, scratch, state.ctx, ctx_star, cfg, model, rng, stats);
    e_x[static_cast<std::size_t>(i)] = point.e_x;
    e_xstar[static_cast<std::size_t>(i)] = point.e_xstar;
    if (trace) trace->path.push_back(point.y);
  }

  const double log_ratio = drag_log_accept_ratio(e_x, e_xstar);
  const bool accepted = metropolis_accept(log_ratio, rng);
  if (trace) {
    trace->xstar = xstar;
    trace->e_x = e_x;
    trace->e_xstar = e_xstar;
    trace->log_ratio = log_ratio;
    trace->accepted = accepted;
  }
  if (accepted) {
    state.x = std::move(xstar);
    state.y = std::move(point.y);
    state.ctx = std::move(ctx_star);
    state.energy = point.e_xstar;
    ++stats.outer_accepts;
  }
  return accepted;
}

bool joint_step(ChainState& state, const GaussianWalkProposal& joint, EnergyModel& model,
                Rng& rng, KernelStats& stats) {
  const std::size_t dx = state.x.size();
  const std::size_t dy = state.y.size();
  std::vector<double> current;
  current.reserve(dx + dy);
  current.insert(current.end(), state.x.values.begin(), state.x.values.end());
  current.insert(current.end(), state.y.values.begin(), state.y.values.end());
  const std::vector<double> proposed = propose_walk(current, joint, rng);

  SlowVector xstar{{proposed.begin(), proposed.begin() + static_cast<std::ptrdiff_t>(dx)}};
  FastVector ystar{{proposed.begin() + static_cast<std::ptrdiff_t>(dx), proposed.end()}};
  SlowContext ctx_star = model.prepare_slow(xstar);
  const double e_star = model.energy(ctx_star, ystar);
  ++stats.outer_proposals;

  if (!metropolis_accept(state.energy - e_star, rng)) return false;
  state.x = std::move(xstar);
  state.y = std::move(ystar);
  state.ctx = std::move(ctx_star);
  state.energy = e_star;
  ++stats.outer_accepts;
  return true;
}

bool single_var_step(ChainState& state, const GaussianWalkProposal& x_proposal,
                     const GaussianWalkProposal& y_proposal, EnergyModel& model, Rng& rng,
                     KernelStats& stats) {
  if (y_proposal.dim() != state.y.size()) {
    throw ConfigError("fast-variable proposal dimension does not match the model");
  }

  SlowVector xstar{propose_walk(state.x.values, x_proposal, rng)};
  SlowContext ctx_star = model.prepare_slow(xstar);
  const double e_x = model.energy(ctx_star, state.y);
  ++stats.outer_proposals;
  const bool x_accepted = metropolis_accept(state.energy - e_x, rng);
  if (x_accepted) {
    state.x = std::move(xstar);
    state.ctx = std::move(ctx_star);
    state.energy = e_x;
    ++stats.outer_accepts;
  }

  FastVector ystar{propose_walk(state.y.values, y_proposal, rng)};
  const double e_y = model.energy(state.ctx, ystar);
  ++stats.inner_proposals;
  if (metropolis_accept(state.energy - e_y, rng)) {
    state.y = std::move(ystar);
    state.energy = e_y;
    ++stats.inner_accepts;
  }
  return x_accepted;
}

bool marginal_step(MarginalState& state, const MarginalEnergy& marginal_energy,
                   const GaussianWalkProposal& proposal, Rng& rng, KernelStats& stats) {
  SlowVector xstar{propose_walk(state.x.values, proposal, rng)};
  const double e_star = marginal_energy(xstar);
  ++stats.outer_proposals;
  if (!metropolis_accept(state.energy - e_star, rng)) return false;
  state.x = std::move(xstar);
  state.energy = e_star;
  ++stats.outer_accepts;
  return true;
}

}  // namespace dragmc
