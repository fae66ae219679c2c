#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "dragmc/model.hpp"
#include "dragmc/rng.hpp"

namespace dragmc {

// Closed-form energies of the two test problems. These are the reference
// evaluations; the models below cache the x-only parts and must reproduce
// these bit for bit.

/// E(x, y) = x^2 + 50 (1 + x^2)^2 (y - sin x)^2
double test1_energy(double x, double y);

/// x^2 + log(1 + x^2), the energy of the x marginal of test 1.
double test1_marginal_energy(double x);

/// Draws y ~ N(sin x, (0.1 / (1 + x^2))^2), the test 1 conditional.
double test1_conditional_sample(double x, Rng& rng);

/// test1_energy(x, y) + 12.5 (z - y)^2
double test2_energy(double x, double y, double z);

/// Shared base of the test problems: sin(x) is the designated "slow"
/// computation and is counted separately from the generic counters.
class SineModel : public EnergyModel {
 public:
  std::size_t slow_dim() const override { return 1; }
  std::uint64_t sine_evaluations() const { return sine_evaluations_; }

 protected:
  struct Cache : SlowContext::Payload {
    double x_sq = 0.0;    // x^2
    double weight = 0.0;  // 50 (1 + x^2)^2
    double sin_x = 0.0;
  };
  std::shared_ptr<const SlowContext::Payload> build_payload(const SlowVector& x) override;

 private:
  std::uint64_t sine_evaluations_ = 0;
};

/// Test problem 1: one slow variable x, one fast variable y.
class Test1Model final : public SineModel {
 public:
  std::string name() const override { return "test1"; }
  std::size_t fast_dim() const override { return 1; }

 protected:
  double evaluate(const SlowContext::Payload& payload, std::span<const double> y) const override;
};

/// Test problem 2: fast vector (y, z); z | y ~ N(y, 0.2^2).
class Test2Model final : public SineModel {
 public:
  std::string name() const override { return "test2"; }
  std::size_t fast_dim() const override { return 2; }

 protected:
  double evaluate(const SlowContext::Payload& payload, std::span<const double> y) const override;
};

/// Names accepted by make_problem(): "test1", "test2".
std::vector<std::string> continuous_problem_names();

/// Throws ConfigError for unknown names (including "discrete", which has no
/// continuous model and is only usable through the transition-matrix oracle).
std::unique_ptr<SineModel> make_problem(const std::string& name);

/// All registered problem names, including "discrete".
std::vector<std::string> problem_names();

// ---------------------------------------------------------------------------
// Discrete oracle model

/// A small grid model on which one dragging update can be written down
/// exactly as a transition matrix.
///
/// x moves by a proposal uniform over the whole x grid (x* = x included);
/// inner y moves propose one grid step left or right with probability 1/2
/// each, and off-grid proposals are rejected. Both proposals are symmetric,
/// matching the continuous kernels.
struct DiscreteModel {
  std::vector<double> x_grid;
  std::vector<double> y_grid;
  /// energies[ix * y_grid.size() + iy] = E(x_grid[ix], y_grid[iy])
  std::vector<double> energies;

  std::size_t num_states() const { return x_grid.size() * y_grid.size(); }
  std::size_t state_index(std::size_t ix, std::size_t iy) const { return ix * y_grid.size() + iy; }
  double energy(std::size_t ix, std::size_t iy) const { return energies[state_index(ix, iy)]; }

  /// Normalized exp(-E) over all states.
  std::vector<double> stationary() const;

  /// x in {-1, 0, 1}, 7 y points evenly spaced on [-1.5, 1.5], E = test1_energy.
  static DiscreteModel standard();
  /// Throws InputError if the grids exceed 5 x 9 or energies are not finite.
  static DiscreteModel from_energy_table(std::vector<double> x_grid, std::vector<double> y_grid,
                                         std::vector<double> energies);
};

/// Dense row-major square matrix.
struct TransitionMatrix {
  std::size_t size = 0;
  std::vector<double> p;

  double operator()(std::size_t from, std::size_t to) const { return p[from * size + to]; }
  double& operator()(std::size_t from, std::size_t to) { return p[from * size + to]; }
};

/// Exact one-step transition matrix of a dragging update with n ladder
/// segments, enumerating every x proposal and every intermediate path
/// y_1 .. y_{n-1}. Rows are filled in parallel. Throws InputError if n is
/// outside 1..4 or the model is too large.
TransitionMatrix discrete_drag_transition_matrix(const DiscreteModel& dm, int n);

namespace reference {
/// Single-threaded version of discrete_drag_transition_matrix.
TransitionMatrix discrete_drag_transition_matrix(const DiscreteModel& dm, int n);
}  // namespace reference

/// Plain Metropolis update of x with y held fixed (the n = 1 special case,
/// built directly from pairwise energy differences).
TransitionMatrix discrete_fixed_y_x_metropolis_matrix(const DiscreteModel& dm);

struct DetailedBalanceReport {
  int n = 0;
  double max_violation = 0.0;      ///< max |pi_u P_uv - pi_v P_vu|
  double max_row_sum_error = 0.0;  ///< max |sum_v P_uv - 1|
  double max_stationarity_error = 0.0;  ///< max |(pi P)_v - pi_v|
};

DetailedBalanceReport check_detailed_balance(const DiscreteModel& dm, const TransitionMatrix& p,
                                             int n);

}  // namespace dragmc
