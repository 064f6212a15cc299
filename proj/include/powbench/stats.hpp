#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "powbench/measurement.hpp"
#include "powbench/pow_kernels.hpp"

namespace powbench {

// Per-row table statistics of an execution-time sample set.
//
// k_factor is the maximum standardized deviation max|x - mean| / sigma, so
// every sample lies within k_factor standard deviations of the mean by
// construction; coverage is its Chebyshev bound 1 - 1/k^2.
struct StatsSummary {
  std::size_t n = 0;
  double min_s = 0.0;
  double max_s = 0.0;
  double mean_s = 0.0;
  double sigma_s = 0.0;  // sample standard deviation, divisor n-1
  double k_factor = 0.0;
  double coverage = 0.0;  // in [0, 1)
};

// The (N, T) decision rule: an environment is Constrained when it cannot
// complete n_required runs in less than t_budget_s seconds.
struct GateSpec {
  PowConfig config;
  std::uint32_t n_required = 2;
  double t_budget_s = 0.0;
};

// Throws TooFewSamples (n < 2), SigmaZero (all samples equal) or
// InvalidParam (non-finite / negative values).
StatsSummary summarize(std::span<const double> samples);

// 1 - 1/k^2 for k > 1; 0 for 0 < k <= 1 (the inequality is vacuous there).
double chebyshev_coverage(double k);

// Draws exactly `size` completed-run durations uniformly without
// replacement from each record and concatenates them in record order.
// Deterministic for a fixed seed, independent of platform.
std::vector<double> balanced_sample(const std::vector<CampaignRecord>& records,
                                    std::size_t size, std::uint64_t seed);

// t_budget_s = ceil(mean + k * sigma) whole seconds; requires k_factor > 1.
GateSpec derive_gate(const StatsSummary& reference, const PowConfig& config,
                     std::uint32_t n_required = 2);

// The k at which a candidate threshold sits: (threshold - mean) / sigma.
double k_for_threshold(std::span<const double> samples, double threshold_s);

}  // namespace powbench
