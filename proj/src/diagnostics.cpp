#include "dragmc/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dragmc/errors.hpp"

namespace dragmc {

namespace {

constexpr std::size_t kMinIatLength = 100;
constexpr long kLagBlock = 64;

struct Centered {
  std::vector<double> v;
  double mean = 0.0;
  double sum_sq = 0.0;
};

Centered center(std::span<const double> chain) {
  Centered c;
  if (chain.empty()) throw InputError("empty chain");
  double s = 0.0;
  for (double v : chain) s += v;
  c.mean = s / static_cast<double>(chain.size());
  c.v.resize(chain.size());
  for (std::size_t t = 0; t < chain.size(); ++t) {
    c.v[t] = chain[t] - c.mean;
    c.sum_sq += c.v[t] * c.v[t];
  }
  if (!(c.sum_sq > 0.0)) throw DegenerateInputError("chain has zero variance");
  return c;
}

double lag_sum(const std::vector<double>& v, long k) {
  const std::size_t n = v.size() - static_cast<std::size_t>(k);
  const double* a = v.data();
  const double* b = v.data() + k;
  double s = 0.0;
  for (std::size_t t = 0; t < n; ++t) s += a[t] * b[t];
  return s;
}

// r(k) for k in [first, last); out has size last - first.
void acf_block_parallel(const Centered& c, long first, long last, double* out) {
#pragma omp parallel for schedule(static)
  for (long k = first; k < last; ++k) out[k - first] = lag_sum(c.v, k) / c.sum_sq;
}

void acf_block_serial(const Centered& c, long first, long last, double* out) {
  for (long k = first; k < last; ++k) out[k - first] = lag_sum(c.v, k) / c.sum_sq;
}

template <typename Block>
AcfTable acf_with(std::span<const double> chain, long max_lag, Block block) {
  if (max_lag < 0 || static_cast<std::size_t>(max_lag) >= chain.size()) {
    throw InputError("max_lag " + std::to_string(max_lag) + " must be in [0, N) with N = " +
                     std::to_string(chain.size()));
  }
  const Centered c = center(chain);
  AcfTable t;
  t.values.resize(static_cast<std::size_t>(max_lag) + 1);
  t.values[0] = 1.0;
  block(c, 1, max_lag + 1, t.values.data() + 1);
  return t;
}

struct IatResult {
  double tau = 1.0;
  long k = 0;
};

// Lazily extends the ACF in blocks until the initial positive sequence ends.
template <typename Block>
IatResult ips_with(std::span<const double> chain, Block block) {
  if (chain.size() < kMinIatLength) {
    throw InputError("integrated autocorrelation time needs at least 100 samples");
  }
  const Centered c = center(chain);
  const long cap = static_cast<long>(chain.size() / 3);
  std::vector<double> r{1.0};
  auto rho = [&](long k) {
    while (k >= static_cast<long>(r.size())) {
      const long first = static_cast<long>(r.size());
      const long last = std::min(first + kLagBlock, cap + 1);
      r.resize(static_cast<std::size_t>(last));
      block(c, first, last, r.data() + first);
    }
    return r[static_cast<std::size_t>(k)];
  };

  double sum = 0.0;
  long k_used = 0;
  for (long j = 0;; ++j) {
    const long k1 = 2 * j;
    const long k2 = 2 * j + 1;
    if (k2 > cap) {
      for (long k = std::max(1L, k1); k <= cap; ++k) sum += rho(k);
      k_used = std::max(k_used, cap);
      break;
    }
    if (rho(k1) + rho(k2) < 0.0) break;
    if (k1 > 0) sum += rho(k1);
    sum += rho(k2);
    k_used = k2;
  }
  return {1.0 + 2.0 * sum, k_used};
}

}  // namespace

AcfTable autocorrelation(std::span<const double> chain, long max_lag) {
  return acf_with(chain, max_lag, acf_block_parallel);
}

double integrated_autocorr_time(std::span<const double> chain) {
  return ips_with(chain, acf_block_parallel).tau;
}

long ips_truncation_lag(std::span<const double> chain) {
  return ips_with(chain, acf_block_parallel).k;
}

double windowed_autocorr_time(std::span<const double> chain, long window) {
  const AcfTable t = autocorrelation(chain, window);
  double sum = 0.0;
  for (std::size_t k = 1; k < t.values.size(); ++k) sum += t.values[k];
  return 1.0 + 2.0 * sum;
}

namespace reference {

AcfTable autocorrelation(std::span<const double> chain, long max_lag) {
  return acf_with(chain, max_lag, acf_block_serial);
}

double integrated_autocorr_time(std::span<const double> chain) {
  return ips_with(chain, acf_block_serial).tau;
}

}  // namespace reference

double rejection_rate(const KernelStats& stats, CounterPair which) {
  const auto [proposals, accepts] =
      which == CounterPair::outer ? std::pair{stats.outer_proposals, stats.outer_accepts}
                                  : std::pair{stats.inner_proposals, stats.inner_accepts};
  if (proposals == 0) throw DegenerateInputError("no proposals recorded for rejection rate");
  return 1.0 - static_cast<double>(accepts) / static_cast<double>(proposals);
}

ChainSummary summarize_chain(std::span<const double> chain, long max_lag) {
  ChainSummary s;
  s.length = chain.size();
  const Centered c = center(chain);
  s.mean = c.mean;
  s.variance = c.sum_sq / static_cast<double>(chain.size());
  s.acf = autocorrelation(chain, max_lag);
  s.iat = integrated_autocorr_time(chain);
  s.iat_window30 = windowed_autocorr_time(chain, std::min<long>(30, static_cast<long>(chain.size()) - 1));
  return s;
}

}  // namespace dragmc
