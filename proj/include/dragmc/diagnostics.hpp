#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "dragmc/kernels.hpp"

namespace dragmc {

/// Autocorrelations at lags 0..max_lag; values[k] is the lag-k estimate.
struct AcfTable {
  std::vector<double> values;

  std::size_t max_lag() const { return values.empty() ? 0 : values.size() - 1; }
  bool operator==(const AcfTable&) const = default;
};

/// Biased autocorrelation estimator
///   r(k) = sum_{t<N-k} (v_t - m)(v_{t+k} - m) / sum_t (v_t - m)^2
/// with m the full-chain mean. Lags are computed in parallel; each lag's
/// sum runs in the same order as the serial reference, so results are
/// bit-identical to reference::autocorrelation.
///
/// Throws InputError if max_lag >= chain.size() or max_lag < 0, and
/// DegenerateInputError for a constant chain.
AcfTable autocorrelation(std::span<const double> chain, long max_lag);

/// Integrated autocorrelation time 1 + 2 sum_{k=1}^{K} r(k).
///
/// K follows the initial-positive-sequence rule: pairs r(2j) + r(2j+1) are
/// summed while positive, and K = 2m + 1 where pair m + 1 is the first
/// negative one. K never exceeds N / 3. Requires at least 100 samples.
double integrated_autocorr_time(std::span<const double> chain);

/// Truncation lag K chosen by integrated_autocorr_time.
long ips_truncation_lag(std::span<const double> chain);

/// 1 + 2 sum_{k=1}^{window} r(k) with a fixed window (30 in the figures).
double windowed_autocorr_time(std::span<const double> chain, long window = 30);

namespace reference {
AcfTable autocorrelation(std::span<const double> chain, long max_lag);
double integrated_autocorr_time(std::span<const double> chain);
}  // namespace reference

enum class CounterPair {
  outer,  ///< outer x proposals (for single-variable Metropolis: the x updates)
  inner,  ///< inner y moves (for single-variable Metropolis: the fast updates)
};

/// 1 - accepts / proposals. Throws DegenerateInputError with zero proposals.
double rejection_rate(const KernelStats& stats, CounterPair which);

struct ChainSummary {
  std::size_t length = 0;
  double mean = 0.0;
  double variance = 0.0;
  AcfTable acf;
  double iat = 0.0;
  double iat_window30 = 0.0;
  std::map<std::string, double> rejection_rates;

  bool operator==(const ChainSummary&) const = default;
};

/// Mean, variance (divide by N), ACF up to max_lag and both IAT estimates.
/// Rejection rates are left for the caller to fill.
ChainSummary summarize_chain(std::span<const double> chain, long max_lag);

}  // namespace dragmc
