#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "powbench/gate.hpp"
#include "support/test_helpers.hpp"

using namespace powbench;
using namespace powbench::testing;

namespace {

GateSpec make_gate(std::uint32_t n, double t) {
  GateSpec gate;
  gate.config = {Algorithm::Argon2i, Argon2iParams{1, 1, 8, 32, Bytes(16, 0)},
                 "gate"};
  gate.n_required = n;
  gate.t_budget_s = t;
  return gate;
}

Verdict simulate(std::uint32_t n, double t, double run_s) {
  ScriptedClock clock;
  return evaluate_gate(make_gate(n, t), clock,
                       constant_duration_kernel(clock, run_s));
}

}  // namespace

TEST_CASE("fast runs pass the gate") {
  Verdict v = simulate(2, 10, 0.4);
  CHECK(v.classification == Classification::BareMetalLike);
  CHECK(v.completed_runs == 2);
  CHECK(v.elapsed_s == doctest::Approx(0.8));
  CHECK(v.per_run.size() == 2);
}

TEST_CASE("slow runs exhaust the budget") {
  Verdict v = simulate(2, 10, 6);
  CHECK(v.classification == Classification::Constrained);
  CHECK(v.completed_runs == 1);  // second completion lands at 12 >= 10
  CHECK(v.elapsed_s == doctest::Approx(12));
  CHECK(v.per_run.size() == 2);
}

TEST_CASE("budget and parameter validation") {
  ScriptedClock clock;
  CHECK_THROWS_AS(evaluate_gate(make_gate(2, 0), clock), InvalidBudget);
  CHECK_THROWS_AS(evaluate_gate(make_gate(2, -1), clock), InvalidBudget);
  CHECK_THROWS_AS(evaluate_gate(make_gate(0, 10), clock), InvalidParam);
}

TEST_CASE("decision soundness: verdict is BareMetalLike iff N*d < T") {
  for (std::uint32_t n : {1u, 2u, 15u, 40u, 50u}) {
    for (double t : {10.0, 15.0, 20.0}) {
      for (double d = 0.125; d <= 12.0; d += 0.125) {
        bool expect_pass = n * d < t;
        Verdict v = simulate(n, t, d);
        CAPTURE(n);
        CAPTURE(t);
        CAPTURE(d);
        CHECK((v.classification == Classification::BareMetalLike) ==
              expect_pass);
      }
    }
  }
}

TEST_CASE("early exit: at most N completed runs") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    std::uint32_t n = 1 + rng() % 20;
    double t = 1 + static_cast<double>(rng() % 200) / 8.0;
    double d = static_cast<double>(1 + rng() % 64) / 16.0;
    Verdict v = simulate(n, t, d);
    CHECK(v.completed_runs <= n);
    // Evidence consistency: counted runs completed before the decision.
    std::uint32_t counted = 0;
    for (const auto& s : v.per_run) {
      if (s.completed &&
          s.started_offset_s + s.duration_s < v.gate.t_budget_s &&
          counted < n) {
        ++counted;
      }
    }
    CHECK(counted == v.completed_runs);
  }
}

TEST_CASE("monotonicity in T and N") {
  std::mt19937 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    std::uint32_t n = 1 + rng() % 10;
    double t = 1 + static_cast<double>(rng() % 100) / 8.0;
    double d = static_cast<double>(1 + rng() % 64) / 16.0;
    Verdict base = simulate(n, t, d);
    if (base.classification == Classification::BareMetalLike) {
      // More budget can never flip a pass into a fail.
      Verdict more_t = simulate(n, t + 5, d);
      CHECK(more_t.classification == Classification::BareMetalLike);
    } else {
      // A stricter run requirement can never flip a fail into a pass.
      Verdict more_n = simulate(n + 5, t, d);
      CHECK(more_n.classification == Classification::Constrained);
    }
  }
}

TEST_CASE("a failing kernel yields Constrained with zero completions") {
  ScriptedClock clock;
  Verdict v = evaluate_gate(make_gate(2, 1.0), clock,
                            failing_kernel(clock, 0.3));
  CHECK(v.classification == Classification::Constrained);
  CHECK(v.completed_runs == 0);
  CHECK(v.per_run.size() >= 3);
}

TEST_CASE("expected_runs planning estimate") {
  StatsSummary s;
  s.mean_s = 0.2;
  CHECK(expected_runs(s, 10) == 50);
  s.mean_s = 10;
  CHECK(expected_runs(s, 10) == 1);
  s.mean_s = 0.46;
  CHECK(expected_runs(s, 10) == 21);
  CHECK_THROWS_AS(expected_runs(s, 0), InvalidParam);
  CHECK_THROWS_AS(expected_runs(s, -1), InvalidParam);
  s.mean_s = 0;
  CHECK_THROWS_AS(expected_runs(s, 10), InvalidParam);
}
