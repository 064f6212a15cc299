#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "powbench/stats.hpp"
#include "support/test_helpers.hpp"

using namespace powbench;
using namespace powbench::testing;

namespace {

CampaignRecord record_with(std::size_t completed, const std::string& label,
                           std::uint32_t seed = 1) {
  CampaignRecord r;
  r.config = {Algorithm::Argon2i, Argon2iParams{1, 1, 8, 32, Bytes(16, 0)},
              label};
  r.budget_s = 1e9;
  std::mt19937 rng(seed);
  double offset = 0;
  for (std::size_t i = 0; i < completed; ++i) {
    RunSample s;
    s.duration_s = 0.1 + (rng() % 1000) / 1000.0;
    s.started_offset_s = offset;
    s.cost_blocks = 8;
    s.completed = true;
    offset += s.duration_s;
    r.samples.push_back(s);
  }
  return r;
}

}  // namespace

TEST_CASE("summarize hand-checked triple") {
  StatsSummary s = summarize(std::vector<double>{1, 2, 3});
  CHECK(s.n == 3);
  CHECK(s.min_s == 1);
  CHECK(s.max_s == 3);
  CHECK(s.mean_s == doctest::Approx(2));
  CHECK(s.sigma_s == doctest::Approx(1));
  CHECK(s.k_factor == doctest::Approx(1));
  CHECK(s.coverage == 0);
}

TEST_CASE("summarize fixture 0.1..0.5 against frozen oracle values") {
  StatsSummary s = summarize(std::vector<double>{0.1, 0.2, 0.3, 0.4, 0.5});
  CHECK(s.mean_s == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(s.sigma_s == doctest::Approx(0.158113883008419).epsilon(1e-9));
  CHECK(s.k_factor == doctest::Approx(1.264911064067352).epsilon(1e-9));
  CHECK(s.coverage == doctest::Approx(0.375).epsilon(1e-9));
}

TEST_CASE("summarize error paths") {
  CHECK_THROWS_AS(summarize(std::vector<double>{}), TooFewSamples);
  CHECK_THROWS_AS(summarize(std::vector<double>{1.0}), TooFewSamples);
  CHECK_THROWS_AS(summarize(std::vector<double>{5, 5, 5}), SigmaZero);
  CHECK_THROWS_AS(summarize(std::vector<double>{1, -2}), InvalidParam);
  CHECK_THROWS_AS(
      summarize(std::vector<double>{1, std::numeric_limits<double>::infinity()}),
      InvalidParam);
}

TEST_CASE("summarize agrees with the naive two-pass oracle") {
  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> value(0.0, 100.0);
  for (int trial = 0; trial < 1000; ++trial) {
    std::size_t n = 2 + rng() % 499;
    std::vector<double> xs(n);
    for (auto& x : xs) x = value(rng);
    StatsSummary got;
    try {
      got = summarize(xs);
    } catch (const SigmaZero&) {
      continue;  // astronomically unlikely with real draws
    }
    NaiveStats want = naive_stats(xs);
    CHECK(got.min_s == want.min);
    CHECK(got.max_s == want.max);
    CHECK(got.mean_s == doctest::Approx(want.mean).epsilon(1e-12));
    CHECK(got.sigma_s == doctest::Approx(want.sigma).epsilon(1e-12));
    CHECK(got.k_factor == doctest::Approx(want.k).epsilon(1e-12));
    CHECK(got.coverage == doctest::Approx(want.coverage).epsilon(1e-12));
  }
}

TEST_CASE("self-coverage: every sample sits within k sigma of the mean") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> value(0.0, 10.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> xs(2 + rng() % 100);
    for (auto& x : xs) x = value(rng);
    StatsSummary s = summarize(xs);
    std::size_t inside = 0;
    for (double x : xs) {
      if (std::abs(x - s.mean_s) <= s.k_factor * s.sigma_s * (1 + 1e-12)) {
        ++inside;
      }
    }
    CHECK(inside == xs.size());
  }
}

TEST_CASE("chebyshev_coverage fixtures from the evaluation tables") {
  CHECK(chebyshev_coverage(2.0) == doctest::Approx(0.75));
  CHECK(chebyshev_coverage(7.9) == doctest::Approx(0.98398).epsilon(1e-4));
  CHECK(chebyshev_coverage(9.99) == doctest::Approx(0.98998).epsilon(1e-5));
  CHECK(chebyshev_coverage(10.5) == doctest::Approx(0.99093).epsilon(1e-4));
  CHECK(chebyshev_coverage(0.5) == 0.0);
  CHECK(chebyshev_coverage(1.0) == 0.0);
  CHECK_THROWS_AS(chebyshev_coverage(0.0), InvalidParam);
  CHECK_THROWS_AS(chebyshev_coverage(-2.0), InvalidParam);
  CHECK_THROWS_AS(chebyshev_coverage(std::nan("")), InvalidParam);
}

TEST_CASE("coverage is monotone in k") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> value(0.01, 50.0);
  for (int trial = 0; trial < 200; ++trial) {
    double k1 = value(rng), k2 = value(rng);
    if (k1 > k2) std::swap(k1, k2);
    CHECK(chebyshev_coverage(k1) <= chebyshev_coverage(k2));
    if (k1 > 1 && k2 > k1) {
      CHECK(chebyshev_coverage(k1) < chebyshev_coverage(k2));
    }
  }
}

TEST_CASE("affine behavior of the summary") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> value(0.1, 5.0);
  std::vector<double> xs(50);
  for (auto& x : xs) x = value(rng);
  StatsSummary base = summarize(xs);

  double c = 3.25;
  std::vector<double> scaled(xs);
  for (auto& x : scaled) x *= c;
  StatsSummary s = summarize(scaled);
  CHECK(s.min_s == doctest::Approx(base.min_s * c).epsilon(1e-12));
  CHECK(s.max_s == doctest::Approx(base.max_s * c).epsilon(1e-12));
  CHECK(s.mean_s == doctest::Approx(base.mean_s * c).epsilon(1e-12));
  CHECK(s.sigma_s == doctest::Approx(base.sigma_s * c).epsilon(1e-12));
  CHECK(s.k_factor == doctest::Approx(base.k_factor).epsilon(1e-9));
  CHECK(s.coverage == doctest::Approx(base.coverage).epsilon(1e-9));

  double shift = 7.5;
  std::vector<double> shifted(xs);
  for (auto& x : shifted) x += shift;
  StatsSummary t = summarize(shifted);
  CHECK(t.sigma_s == doctest::Approx(base.sigma_s).epsilon(1e-9));
  CHECK(t.k_factor == doctest::Approx(base.k_factor).epsilon(1e-9));
  CHECK(t.coverage == doctest::Approx(base.coverage).epsilon(1e-9));
}

TEST_CASE("balanced_sample draws size per record, deterministically") {
  std::vector<CampaignRecord> records;
  records.push_back(record_with(9325, "high-end"));
  records.push_back(record_with(300, "low-end", 2));

  auto draw = balanced_sample(records, 150, 42);
  CHECK(draw.size() == 300);
  auto again = balanced_sample(records, 150, 42);
  CHECK(draw == again);
  auto other_seed = balanced_sample(records, 150, 43);
  CHECK(draw != other_seed);

  CHECK_THROWS_AS(balanced_sample(records, 500, 42), InsufficientSamples);
  try {
    balanced_sample(records, 500, 42);
  } catch (const InsufficientSamples& e) {
    CHECK(e.record_label == "low-end");
  }
  CHECK_THROWS_AS(balanced_sample(records, 0, 42), InvalidParam);
}

TEST_CASE("balanced_sample draws without replacement and skips failures") {
  CampaignRecord r = record_with(10, "r");
  r.samples[3].completed = false;  // only 9 usable
  std::vector<CampaignRecord> records{r};
  CHECK_THROWS_AS(balanced_sample(records, 10, 1), InsufficientSamples);

  auto draw = balanced_sample(records, 9, 1);
  std::sort(draw.begin(), draw.end());
  std::vector<double> all;
  for (const auto& s : r.samples) {
    if (s.completed) all.push_back(s.duration_s);
  }
  std::sort(all.begin(), all.end());
  CHECK(draw == all);  // a full draw is a permutation, so no replacement
}

TEST_CASE("derive_gate reproduces the reference gate arithmetic") {
  PowConfig config{Algorithm::Argon2i, Argon2iParams{8, 100, 4096, 32,
                                                     Bytes(16, 0)},
                   "argon2i-8-100-4096"};
  StatsSummary s;
  s.mean_s = 0.46;
  s.sigma_s = 1.07;
  s.k_factor = 8.1;
  GateSpec gate = derive_gate(s, config);
  CHECK(gate.t_budget_s == 10.0);
  CHECK(gate.n_required == 2);

  s.mean_s = 1.0;
  s.sigma_s = 0.5;
  s.k_factor = 4;
  CHECK(derive_gate(s, config).t_budget_s == 3.0);

  CHECK_THROWS_AS(derive_gate(s, config, 0), InvalidParam);
  s.k_factor = 0.9;
  CHECK_THROWS_AS(derive_gate(s, config), InvalidParam);
}

TEST_CASE("derive_gate budget never decreases in mean, sigma or k") {
  PowConfig config{Algorithm::Argon2i, Argon2iParams{1, 1, 8, 32, Bytes(16, 0)},
                   "c"};
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> value(0.01, 10.0);
  for (int trial = 0; trial < 200; ++trial) {
    StatsSummary s;
    s.mean_s = value(rng);
    s.sigma_s = value(rng);
    s.k_factor = 1.01 + value(rng);
    double base = derive_gate(s, config).t_budget_s;
    StatsSummary bigger = s;
    bigger.mean_s += value(rng);
    CHECK(derive_gate(bigger, config).t_budget_s >= base);
    bigger = s;
    bigger.sigma_s += value(rng);
    CHECK(derive_gate(bigger, config).t_budget_s >= base);
    bigger = s;
    bigger.k_factor += value(rng);
    CHECK(derive_gate(bigger, config).t_budget_s >= base);
  }
}

TEST_CASE("k_for_threshold") {
  std::vector<double> xs{1, 2, 3};
  CHECK(k_for_threshold(xs, 4.0) == doctest::Approx(2.0));
  CHECK_THROWS_AS(k_for_threshold(xs, 2.0), InvalidParam);
  CHECK_THROWS_AS(k_for_threshold(xs, 1.5), InvalidParam);

  std::vector<double> fixture{0.1, 0.2, 0.3, 0.4, 0.5};
  CHECK(k_for_threshold(fixture, 0.5) ==
        doctest::Approx(1.264911064067352).epsilon(1e-9));
  // Coverage of the threshold is the chebyshev bound at that k.
  double k = k_for_threshold(fixture, 0.5);
  CHECK(chebyshev_coverage(k) == doctest::Approx(0.375).epsilon(1e-9));
}
