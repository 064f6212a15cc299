#include "powbench/stats.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace powbench {

StatsSummary summarize(std::span<const double> samples) {
  if (samples.size() < 2) {
    throw TooFewSamples(samples.size());
  }
  for (double x : samples) {
    if (!std::isfinite(x)) {
      throw InvalidParam("samples", "must be finite");
    }
    if (x < 0) {
      throw InvalidParam("samples", "durations cannot be negative");
    }
  }

  StatsSummary s;
  s.n = samples.size();
  s.min_s = samples[0];
  s.max_s = samples[0];

  // Welford's recurrence for mean and M2.
  double mean = 0.0, m2 = 0.0;
  std::size_t count = 0;
  for (double x : samples) {
    s.min_s = std::min(s.min_s, x);
    s.max_s = std::max(s.max_s, x);
    ++count;
    double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }
  s.mean_s = mean;
  s.sigma_s = std::sqrt(m2 / static_cast<double>(s.n - 1));
  if (s.sigma_s == 0.0) {
    throw SigmaZero();
  }

  double max_dev = 0.0;
  for (double x : samples) {
    max_dev = std::max(max_dev, std::abs(x - mean));
  }
  s.k_factor = max_dev / s.sigma_s;
  s.coverage = s.k_factor > 1.0 ? 1.0 - 1.0 / (s.k_factor * s.k_factor) : 0.0;
  return s;
}

double chebyshev_coverage(double k) {
  if (!std::isfinite(k) || k <= 0) {
    throw InvalidParam("k", "must be finite and positive");
  }
  return k > 1.0 ? 1.0 - 1.0 / (k * k) : 0.0;
}

namespace {

// Deterministic bounded draw; std::uniform_int_distribution is
// implementation-defined, which would break cross-platform seeds.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(rng()) * n) >> 64);
}

}  // namespace

std::vector<double> balanced_sample(const std::vector<CampaignRecord>& records,
                                    std::size_t size, std::uint64_t seed) {
  if (size < 1) {
    throw InvalidParam("size", "minimum is 1");
  }
  std::mt19937_64 rng(seed);
  std::vector<double> out;
  out.reserve(size * records.size());
  for (const auto& record : records) {
    std::vector<double> durations;
    durations.reserve(record.samples.size());
    for (const auto& sample : record.samples) {
      if (sample.completed) {
        durations.push_back(sample.duration_s);
      }
    }
    if (durations.size() < size) {
      throw InsufficientSamples(record.config.label, durations.size(), size);
    }
    // Partial Fisher-Yates: the first `size` slots are the draw.
    for (std::size_t i = 0; i < size; ++i) {
      std::size_t j = i + static_cast<std::size_t>(
                              bounded(rng, durations.size() - i));
      std::swap(durations[i], durations[j]);
      out.push_back(durations[i]);
    }
  }
  return out;
}

GateSpec derive_gate(const StatsSummary& reference, const PowConfig& config,
                     std::uint32_t n_required) {
  if (n_required < 1) {
    throw InvalidParam("n_required", "minimum is 1");
  }
  if (!(reference.k_factor > 1.0)) {
    throw InvalidParam("k_factor",
                       "reference statistics unusable: k must exceed 1");
  }
  GateSpec gate;
  gate.config = config;
  gate.n_required = n_required;
  gate.t_budget_s =
      std::ceil(reference.mean_s + reference.k_factor * reference.sigma_s);
  return gate;
}

double k_for_threshold(std::span<const double> samples, double threshold_s) {
  StatsSummary s = summarize(samples);
  if (threshold_s <= s.mean_s) {
    throw InvalidParam("threshold_s", "must exceed the sample mean");
  }
  return (threshold_s - s.mean_s) / s.sigma_s;
}

}  // namespace powbench
