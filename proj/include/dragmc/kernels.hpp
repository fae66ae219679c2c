#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "dragmc/model.hpp"
#include "dragmc/rng.hpp"

namespace dragmc {

/// Symmetric Gaussian random walk with per-coordinate standard deviations.
/// Because the walk is symmetric the Hastings correction S(x|x*)/S(x*|x)
/// is identically 1 and none of the kernels below carry it.
class GaussianWalkProposal {
 public:
  /// Throws ConfigError unless every sd is finite and > 0.
  explicit GaussianWalkProposal(std::vector<double> sds);

  std::size_t dim() const { return sds_.size(); }
  const std::vector<double>& sds() const { return sds_; }

 private:
  std::vector<double> sds_;
};

/// Proposal/acceptance counters. Each kernel documents which pair it uses.
struct KernelStats {
  std::uint64_t outer_proposals = 0;
  std::uint64_t outer_accepts = 0;
  std::uint64_t inner_proposals = 0;
  std::uint64_t inner_accepts = 0;

  bool operator==(const KernelStats&) const = default;
};

struct DragConfig {
  int n = 1;  ///< ladder segments; n - 1 intermediate distributions
  GaussianWalkProposal inner_proposal;
  int inner_steps_per_level = 1;

  /// Throws ConfigError on n < 1 or inner_steps_per_level < 1.
  void validate(std::size_t fast_dim) const;
};

/// current + N(0, sd_i^2) per coordinate. Consumes exactly dim() normal draws.
std::vector<double> propose_walk(std::span<const double> current,
                                 const GaussianWalkProposal& proposal, Rng& rng);

/// Allocation-free variant of propose_walk; out must have current's size.
void propose_walk_into(std::span<const double> current, const GaussianWalkProposal& proposal,
                       Rng& rng, std::span<double> out);

/// Accepts with probability min(1, exp(log_ratio)) by testing log(u) < log_ratio.
/// Always consumes one uniform draw. Throws ModelError on NaN.
bool metropolis_accept(double log_ratio, Rng& rng);

/// Unnormalized log density of the i-th ladder distribution at a point y,
/// given e_x = E(x, y) and e_xstar = E(x*, y):
///   -((1 - i/n) e_x + (i/n) e_xstar).
/// Written so that log_rho_i(i, n, a, b) == log_rho_i(n - i, n, b, a) exactly.
double log_rho_i(int i, int n, double e_x, double e_xstar);

/// Log acceptance ratio of a dragged proposal:
///   (1/n) sum_i e_x[i] - (1/n) sum_i e_xstar[i],  i = 0..n-1
/// where entry i holds E(x, y_i) and E(x*, y_i).
double drag_log_accept_ratio(std::span<const double> e_x, std::span<const double> e_xstar);

/// A point on the ladder together with both endpoint energies at it.
struct LadderPoint {
  FastVector y;
  double e_x = 0.0;      ///< E(x, y)
  double e_xstar = 0.0;  ///< E(x*, y)
};

/// Metropolis updates of y targeting rho_i, with the cached endpoint energies
/// carried along. Each step costs two fast evaluations and draws
/// (fast_dim normals, 1 uniform). Updates the inner counters.
void inner_transition(int i, int n, LadderPoint& point, const SlowContext& ctx_x,
                      const SlowContext& ctx_xstar, const DragConfig& cfg, EnergyModel& model,
                      Rng& rng, KernelStats& stats);

/// Convenience overload that evaluates the energies at y first.
FastVector inner_transition(int i, int n, const FastVector& y, const SlowContext& ctx_x,
                            const SlowContext& ctx_xstar, const DragConfig& cfg,
                            EnergyModel& model, Rng& rng, KernelStats& stats);

/// Optional record of one drag_step, for tests and diagnostics.
struct DragTrace {
  SlowVector xstar;
  std::vector<FastVector> path;  ///< y_0 .. y_{n-1}
  std::vector<double> e_x;       ///< E(x, y_i)
  std::vector<double> e_xstar;   ///< E(x*, y_i)
  double log_ratio = 0.0;
  bool accepted = false;
};

/// One dragging update.
///
/// Proposes x* with the outer walk, prepares x* once, drags y through
/// rho_1 .. rho_{n-1} and accepts (x*, y_{n-1}) using the averaged-energy
/// ratio. Draw order: outer proposal, then each level's inner draws in
/// ladder order, then the final accept draw. Updates outer and inner
/// counters. Returns whether the proposal was accepted.
bool drag_step(ChainState& state, const GaussianWalkProposal& outer, const DragConfig& cfg,
               EnergyModel& model, Rng& rng, KernelStats& stats, DragTrace* trace = nullptr);

/// Joint Metropolis: the proposal covers (x, y) concatenated, slow
/// coordinates first. One slow preparation per call; outer counters only.
bool joint_step(ChainState& state, const GaussianWalkProposal& joint, EnergyModel& model,
                Rng& rng, KernelStats& stats);

/// Single-variable Metropolis: one update of x with y held fixed (outer
/// counters, one slow preparation), then one update of the fast vector with
/// x held fixed (inner counters, one fast evaluation). Returns whether the x
/// update was accepted.
bool single_var_step(ChainState& state, const GaussianWalkProposal& x_proposal,
                     const GaussianWalkProposal& y_proposal, EnergyModel& model, Rng& rng,
                     KernelStats& stats);

using MarginalEnergy = std::function<double(const SlowVector&)>;

struct MarginalState {
  SlowVector x;
  double energy = 0.0;
};

/// Metropolis on x alone under a closed-form marginal energy.
/// Never touches a joint model. Outer counters only.
bool marginal_step(MarginalState& state, const MarginalEnergy& marginal_energy,
                   const GaussianWalkProposal& proposal, Rng& rng, KernelStats& stats);

}  // namespace dragmc
