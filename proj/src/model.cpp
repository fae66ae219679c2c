#include "dragmc/model.hpp"

#include <cmath>
#include <string>

#include "dragmc/errors.hpp"

namespace dragmc {

namespace {

void busy_wait(std::chrono::microseconds delay) {
  // sleep_for granularity is far coarser than the delays of interest.
  const auto until = std::chrono::steady_clock::now() + delay;
  while (std::chrono::steady_clock::now() < until) {
  }
}

}  // namespace

SlowContext EnergyModel::prepare_slow(const SlowVector& x) {
  if (x.size() != slow_dim()) {
    throw ConfigError(name() + ": slow vector has dimension " + std::to_string(x.size()) +
                      ", expected " + std::to_string(slow_dim()));
  }
  for (double v : x.values) {
    if (!std::isfinite(v)) throw InputError(name() + ": non-finite slow variable");
  }
  if (slow_delay_.count() > 0) {
    const auto start = std::chrono::steady_clock::now();
    busy_wait(slow_delay_);
    delay_spent_ += std::chrono::steady_clock::now() - start;
  }
  auto payload = build_payload(x);
  ++counts_.slow_preparations;
  return SlowContext(x, counts_.slow_preparations, this, std::move(payload));
}

double EnergyModel::energy(const SlowContext& ctx, const FastVector& y) {
  if (ctx.owner_ != this || !ctx.valid()) {
    throw InputError(name() + ": context was not prepared by this model");
  }
  if (y.size() != fast_dim()) {
    throw InputError(name() + ": fast vector has dimension " + std::to_string(y.size()) +
                     ", expected " + std::to_string(fast_dim()));
  }
  ++counts_.fast_evaluations;
  return evaluate(*ctx.payload_, y.values);
}

ChainState make_state(EnergyModel& model, SlowVector x, FastVector y) {
  ChainState s;
  s.ctx = model.prepare_slow(x);
  s.energy = model.energy(s.ctx, y);
  s.x = std::move(x);
  s.y = std::move(y);
  return s;
}

}  // namespace dragmc
