#pragma once

#include <cstdint>
#include <vector>

#include "powbench/clock.hpp"
#include "powbench/measurement.hpp"
#include "powbench/stats.hpp"

namespace powbench {

// Constrained deliberately does not say "virtualized": the probe measures
// the (N, T) timing envelope, and slow bare metal trips it just the same.
enum class Classification { BareMetalLike, Constrained };

std::string to_string(Classification c);

struct Verdict {
  Classification classification = Classification::Constrained;
  std::uint32_t completed_runs = 0;  // completions before the decision point
  double elapsed_s = 0.0;
  GateSpec gate;
  std::vector<RunSample> per_run;  // evidence, including overrunning runs
};

// Runs the gate's config back-to-back. BareMetalLike as soon as n_required
// runs complete strictly inside t_budget_s; Constrained once the budget
// expires first. A run in flight at expiry finishes for evidence but never
// counts toward N.
Verdict evaluate_gate(const GateSpec& gate, ClockSource& clock,
                      const KernelFn& kernel = real_kernel());

// Planning estimate: floor(t_budget_s / mean_s) feasible consecutive runs.
std::uint64_t expected_runs(const StatsSummary& stats, double t_budget_s);

}  // namespace powbench
