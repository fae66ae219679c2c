#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace dragmc {

/// Slow variables x. Changing any entry forces a slow preparation.
struct SlowVector {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }
  bool operator==(const SlowVector&) const = default;
};

/// Fast variables y. Re-evaluating the energy after changing only these
/// is cheap once a SlowContext exists.
struct FastVector {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }
  bool operator==(const FastVector&) const = default;
};

struct EvalCounts {
  std::uint64_t slow_preparations = 0;
  std::uint64_t fast_evaluations = 0;

  bool operator==(const EvalCounts&) const = default;
};

class EnergyModel;

/// Cached intermediate quantities for one value of the slow variables.
///
/// Immutable once built and cheap to copy (the payload is shared), so the
/// dragging kernel can hold contexts for x and x* at the same time.
class SlowContext {
 public:
  /// Base for model-specific cached data.
  struct Payload {
    virtual ~Payload() = default;
  };

  SlowContext() = default;

  const SlowVector& x() const { return x_; }
  std::uint64_t index() const { return index_; }
  bool valid() const { return payload_ != nullptr; }

  template <typename T>
  const T& payload_as() const {
    return static_cast<const T&>(*payload_);
  }

 private:
  friend class EnergyModel;
  SlowContext(SlowVector x, std::uint64_t index, const void* owner,
              std::shared_ptr<const Payload> payload)
      : x_(std::move(x)), index_(index), owner_(owner), payload_(std::move(payload)) {}

  SlowVector x_;
  std::uint64_t index_ = 0;
  const void* owner_ = nullptr;
  std::shared_ptr<const Payload> payload_;
};

/// The split-evaluation contract.
///
/// prepare_slow() does the expensive part of E(x, y) that depends on x
/// only; energy() finishes the job for a particular y. Both are counted on
/// the model instance, so a model must be confined to one chain at a time.
/// Energies are negative log densities and are never exponentiated here.
class EnergyModel {
 public:
  virtual ~EnergyModel() = default;

  EnergyModel() = default;
  EnergyModel(const EnergyModel&) = delete;
  EnergyModel& operator=(const EnergyModel&) = delete;

  virtual std::string name() const = 0;
  virtual std::size_t slow_dim() const = 0;
  virtual std::size_t fast_dim() const = 0;

  /// Throws ConfigError on a dimension mismatch, InputError on non-finite x.
  SlowContext prepare_slow(const SlowVector& x);

  /// E(x, y) for the x captured in ctx. Throws InputError if ctx came from
  /// another model or y has the wrong dimension.
  double energy(const SlowContext& ctx, const FastVector& y);

  EvalCounts eval_counts() const { return counts_; }

  /// Artificial busy-wait added to every prepare_slow() to emulate an
  /// expensive slow computation.
  void set_slow_delay(std::chrono::microseconds delay) { slow_delay_ = delay; }
  std::chrono::microseconds slow_delay() const { return slow_delay_; }
  /// Total time actually spent inside the artificial delay.
  std::chrono::nanoseconds delay_spent() const { return delay_spent_; }

 protected:
  virtual std::shared_ptr<const SlowContext::Payload> build_payload(const SlowVector& x) = 0;
  virtual double evaluate(const SlowContext::Payload& payload, std::span<const double> y) const = 0;

 private:
  EvalCounts counts_;
  std::chrono::microseconds slow_delay_{0};
  std::chrono::nanoseconds delay_spent_{0};
};

/// Current point of a chain, with the context and energy for it cached.
struct ChainState {
  SlowVector x;
  FastVector y;
  SlowContext ctx;
  double energy = 0.0;
};

/// Builds a consistent ChainState: one slow preparation, one fast evaluation.
ChainState make_state(EnergyModel& model, SlowVector x, FastVector y);

}  // namespace dragmc
