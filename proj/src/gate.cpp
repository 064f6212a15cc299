#include "powbench/gate.hpp"

#include <cmath>

namespace powbench {

std::string to_string(Classification c) {
  return c == Classification::BareMetalLike ? "bare-metal-like" : "constrained";
}

Verdict evaluate_gate(const GateSpec& gate, ClockSource& clock,
                      const KernelFn& kernel) {
  if (gate.t_budget_s <= 0) {
    throw InvalidBudget(gate.t_budget_s);
  }
  if (gate.n_required < 1) {
    throw InvalidParam("n_required", "minimum is 1");
  }
  validate_config(gate.config);

  Verdict verdict;
  verdict.gate = gate;

  Bytes salt = gate.config.algorithm == Algorithm::Argon2i
                   ? gate.config.argon2i().salt
                   : Bytes(16, 0x00);
  double t0 = clock.now_s();
  for (std::uint64_t index = 0;; ++index) {
    double elapsed = clock.now_s() - t0;
    if (elapsed >= gate.t_budget_s) {
      verdict.classification = Classification::Constrained;
      verdict.elapsed_s = elapsed;
      break;
    }
    std::string msg = gate.config.label + ":" + std::to_string(index);
    Bytes message(msg.begin(), msg.end());
    RunSample sample = timed_run(gate.config, clock, message, salt, kernel);
    sample.started_offset_s = elapsed;
    verdict.per_run.push_back(sample);
    double finished = clock.now_s() - t0;
    if (sample.completed && finished < gate.t_budget_s) {
      ++verdict.completed_runs;
      if (verdict.completed_runs >= gate.n_required) {
        verdict.classification = Classification::BareMetalLike;
        verdict.elapsed_s = finished;
        break;
      }
    }
  }
  return verdict;
}

std::uint64_t expected_runs(const StatsSummary& stats, double t_budget_s) {
  if (!(stats.mean_s > 0)) {
    throw InvalidParam("mean_s", "must be positive");
  }
  if (t_budget_s <= 0) {
    throw InvalidParam("t_budget_s", "must be positive");
  }
  return static_cast<std::uint64_t>(std::floor(t_budget_s / stats.mean_s));
}

}  // namespace powbench
