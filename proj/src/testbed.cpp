#include "dragmc/testbed.hpp"

#include <cmath>

#include "dragmc/errors.hpp"

namespace dragmc {

// The cached path in SineModel/Test{1,2}Model::evaluate performs exactly the
// same operations in the same order as these functions.

double test1_energy(double x, double y) {
  const double x_sq = x * x;
  const double one_plus = 1.0 + x_sq;
  const double weight = 50.0 * (one_plus * one_plus);
  const double r = y - std::sin(x);
  return x_sq + weight * (r * r);
}

double test1_marginal_energy(double x) { return x * x + std::log1p(x * x); }

double test1_conditional_sample(double x, Rng& rng) {
  const double sd = 0.1 / (1.0 + x * x);
  return std::sin(x) + sd * rng.normal();
}

double test2_energy(double x, double y, double z) {
  const double d = z - y;
  return test1_energy(x, y) + 12.5 * (d * d);
}

std::shared_ptr<const SlowContext::Payload> SineModel::build_payload(const SlowVector& x) {
  auto cache = std::make_shared<Cache>();
  const double v = x[0];
  cache->x_sq = v * v;
  const double one_plus = 1.0 + cache->x_sq;
  cache->weight = 50.0 * (one_plus * one_plus);
  cache->sin_x = std::sin(v);
  ++sine_evaluations_;
  return cache;
}

double Test1Model::evaluate(const SlowContext::Payload& payload, std::span<const double> y) const {
  const auto& c = static_cast<const Cache&>(payload);
  const double r = y[0] - c.sin_x;
  return c.x_sq + c.weight * (r * r);
}

double Test2Model::evaluate(const SlowContext::Payload& payload, std::span<const double> y) const {
  const auto& c = static_cast<const Cache&>(payload);
  const double r = y[0] - c.sin_x;
  const double d = y[1] - y[0];
  return (c.x_sq + c.weight * (r * r)) + 12.5 * (d * d);
}

std::vector<std::string> continuous_problem_names() { return {"test1", "test2"}; }

std::vector<std::string> problem_names() { return {"test1", "test2", "discrete"}; }

std::unique_ptr<SineModel> make_problem(const std::string& name) {
  if (name == "test1") return std::make_unique<Test1Model>();
  if (name == "test2") return std::make_unique<Test2Model>();
  if (name == "discrete") {
    throw ConfigError("problem 'discrete' is only available to the detailed-balance check");
  }
  throw ConfigError("unknown problem '" + name + "'");
}

}  // namespace dragmc
