#include <algorithm>
#include <cmath>
#include <string>

#include "dragmc/errors.hpp"
#include "dragmc/kernels.hpp"
#include "dragmc/testbed.hpp"

namespace dragmc {

namespace {

constexpr std::size_t kMaxX = 5;
constexpr std::size_t kMaxY = 9;
constexpr int kMaxN = 4;

double accept_prob(double log_ratio) { return log_ratio >= 0.0 ? 1.0 : std::exp(log_ratio); }

// Inner kernels T_i for every ordered pair (x, x*) and level i = 1..n-1,
// each an ny x ny row-stochastic matrix.
class InnerKernels {
 public:
  InnerKernels(const DiscreteModel& dm, int n)
      : nx_(dm.x_grid.size()), ny_(dm.y_grid.size()), levels_(n > 1 ? n - 1 : 0) {
    t_.assign(nx_ * nx_ * levels_ * ny_ * ny_, 0.0);
    for (std::size_t ix = 0; ix < nx_; ++ix) {
      for (std::size_t ixs = 0; ixs < nx_; ++ixs) {
        for (std::size_t lvl = 0; lvl < levels_; ++lvl) {
          const int i = static_cast<int>(lvl) + 1;
          for (std::size_t y = 0; y < ny_; ++y) {
            const double here = log_rho_i(i, n, dm.energy(ix, y), dm.energy(ixs, y));
            double moved = 0.0;
            for (std::size_t y2 : {y - 1, y + 1}) {
              if (y2 >= ny_) continue;  // off grid (wraps for y - 1 at 0)
              const double there = log_rho_i(i, n, dm.energy(ix, y2), dm.energy(ixs, y2));
              const double p = 0.5 * accept_prob(there - here);
              at(ix, ixs, lvl, y, y2) = p;
              moved += p;
            }
            at(ix, ixs, lvl, y, y) = 1.0 - moved;
          }
        }
      }
    }
  }

  double operator()(std::size_t ix, std::size_t ixs, std::size_t lvl, std::size_t from,
                    std::size_t to) const {
    return t_[index(ix, ixs, lvl, from, to)];
  }

 private:
  std::size_t index(std::size_t ix, std::size_t ixs, std::size_t lvl, std::size_t from,
                    std::size_t to) const {
    return (((ix * nx_ + ixs) * levels_ + lvl) * ny_ + from) * ny_ + to;
  }
  double& at(std::size_t ix, std::size_t ixs, std::size_t lvl, std::size_t from, std::size_t to) {
    return t_[index(ix, ixs, lvl, from, to)];
  }

  std::size_t nx_, ny_, levels_;
  std::vector<double> t_;
};

struct PathWalker {
  const DiscreteModel& dm;
  const InnerKernels& kernels;
  int n;
  std::size_t ix, ixs, iy0;
  double proposal_prob;
  std::span<double> row;
  std::vector<std::size_t> path;  // y_0 .. y_{level}
  std::vector<double> e_x, e_xstar;

  void walk(std::size_t level, double weight) {
    if (weight == 0.0) return;
    if (level + 1 == static_cast<std::size_t>(n)) {
      for (std::size_t k = 0; k < path.size(); ++k) {
        e_x[k] = dm.energy(ix, path[k]);
        e_xstar[k] = dm.energy(ixs, path[k]);
      }
      const double a = accept_prob(drag_log_accept_ratio(e_x, e_xstar));
      const double mass = proposal_prob * weight;
      row[dm.state_index(ixs, path.back())] += mass * a;
      row[dm.state_index(ix, iy0)] += mass * (1.0 - a);
      return;
    }
    const std::size_t from = path.back();
    for (std::size_t to = 0; to < dm.y_grid.size(); ++to) {
      const double t = kernels(ix, ixs, level, from, to);
      if (t == 0.0) continue;
      path.push_back(to);
      walk(level + 1, weight * t);
      path.pop_back();
    }
  }
};

void fill_row(const DiscreteModel& dm, int n, const InnerKernels& kernels, std::size_t from,
              std::span<double> row) {
  const std::size_t ny = dm.y_grid.size();
  const std::size_t ix = from / ny;
  const std::size_t iy0 = from % ny;
  const double proposal_prob = 1.0 / static_cast<double>(dm.x_grid.size());
  for (std::size_t ixs = 0; ixs < dm.x_grid.size(); ++ixs) {
    PathWalker w{dm,     kernels, n,   ix, ixs, iy0, proposal_prob, row, {iy0},
                 std::vector<double>(static_cast<std::size_t>(n)),
                 std::vector<double>(static_cast<std::size_t>(n))};
    w.walk(0, 1.0);
  }
}

void validate(const DiscreteModel& dm, int n) {
  if (n < 1 || n > kMaxN) {
    throw InputError("discrete drag matrix supports n in 1.." + std::to_string(kMaxN) + ", got " +
                     std::to_string(n));
  }
  if (dm.x_grid.empty() || dm.y_grid.empty() || dm.x_grid.size() > kMaxX ||
      dm.y_grid.size() > kMaxY) {
    throw InputError("discrete state space too large (limit 5 x 9 states)");
  }
  if (dm.energies.size() != dm.num_states()) {
    throw InputError("energy table does not match grid sizes");
  }
}

}  // namespace

std::vector<double> DiscreteModel::stationary() const {
  const double e_min = *std::min_element(energies.begin(), energies.end());
  std::vector<double> pi(energies.size());
  double z = 0.0;
  for (std::size_t s = 0; s < pi.size(); ++s) {
    pi[s] = std::exp(-(energies[s] - e_min));
    z += pi[s];
  }
  for (double& v : pi) v /= z;
  return pi;
}

DiscreteModel DiscreteModel::standard() {
  std::vector<double> xs{-1.0, 0.0, 1.0};
  std::vector<double> ys;
  for (int k = 0; k < 7; ++k) ys.push_back(-1.5 + 0.5 * k);
  std::vector<double> e;
  for (double x : xs) {
    for (double y : ys) e.push_back(test1_energy(x, y));
  }
  return from_energy_table(std::move(xs), std::move(ys), std::move(e));
}

DiscreteModel DiscreteModel::from_energy_table(std::vector<double> x_grid,
                                               std::vector<double> y_grid,
                                               std::vector<double> energies) {
  DiscreteModel dm{std::move(x_grid), std::move(y_grid), std::move(energies)};
  validate(dm, 1);
  for (double e : dm.energies) {
    if (!std::isfinite(e)) throw InputError("discrete energies must be finite");
  }
  return dm;
}

TransitionMatrix discrete_drag_transition_matrix(const DiscreteModel& dm, int n) {
  validate(dm, n);
  const InnerKernels kernels(dm, n);
  const std::size_t m = dm.num_states();
  TransitionMatrix out{m, std::vector<double>(m * m, 0.0)};
  const auto rows = static_cast<long>(m);
#pragma omp parallel for schedule(dynamic)
  for (long from = 0; from < rows; ++from) {
    const auto f = static_cast<std::size_t>(from);
    fill_row(dm, n, kernels, f, std::span<double>(out.p).subspan(f * m, m));
  }
  return out;
}

namespace reference {

TransitionMatrix discrete_drag_transition_matrix(const DiscreteModel& dm, int n) {
  validate(dm, n);
  const InnerKernels kernels(dm, n);
  const std::size_t m = dm.num_states();
  TransitionMatrix out{m, std::vector<double>(m * m, 0.0)};
  for (std::size_t from = 0; from < m; ++from) {
    fill_row(dm, n, kernels, from, std::span<double>(out.p).subspan(from * m, m));
  }
  return out;
}

}  // namespace reference

TransitionMatrix discrete_fixed_y_x_metropolis_matrix(const DiscreteModel& dm) {
  validate(dm, 1);
  const std::size_t m = dm.num_states();
  const std::size_t nx = dm.x_grid.size();
  const std::size_t ny = dm.y_grid.size();
  TransitionMatrix out{m, std::vector<double>(m * m, 0.0)};
  for (std::size_t ix = 0; ix < nx; ++ix) {
    for (std::size_t iy = 0; iy < ny; ++iy) {
      const std::size_t from = dm.state_index(ix, iy);
      double stay = 1.0;
      for (std::size_t ixs = 0; ixs < nx; ++ixs) {
        if (ixs == ix) continue;
        const double p = accept_prob(dm.energy(ix, iy) - dm.energy(ixs, iy)) / static_cast<double>(nx);
        out(from, dm.state_index(ixs, iy)) = p;
        stay -= p;
      }
      out(from, from) = stay;
    }
  }
  return out;
}

DetailedBalanceReport check_detailed_balance(const DiscreteModel& dm, const TransitionMatrix& p,
                                             int n) {
  const std::vector<double> pi = dm.stationary();
  const std::size_t m = p.size;
  DetailedBalanceReport r;
  r.n = n;
  for (std::size_t u = 0; u < m; ++u) {
    double row_sum = 0.0;
    double flow_in = 0.0;
    for (std::size_t v = 0; v < m; ++v) {
      row_sum += p(u, v);
      flow_in += pi[v] * p(v, u);
      r.max_violation = std::max(r.max_violation, std::abs(pi[u] * p(u, v) - pi[v] * p(v, u)));
    }
    r.max_row_sum_error = std::max(r.max_row_sum_error, std::abs(row_sum - 1.0));
    r.max_stationarity_error = std::max(r.max_stationarity_error, std::abs(flow_in - pi[u]));
  }
  return r;
}

}  // namespace dragmc
