#pragma once

#include <deque>
#include <initializer_list>

namespace powbench {

// Monotonic time source, in seconds from an arbitrary origin. Durations are
// always differences of two now_s() readings; wall-clock time is never used
// for timing.
class ClockSource {
 public:
  virtual ~ClockSource() = default;
  virtual double now_s() = 0;
};

// Wraps the OS monotonic clock.
class SystemClock final : public ClockSource {
 public:
  double now_s() override;
};

// Deterministic clock for tests. Time stands still unless advance()d or
// driven by a preloaded instant sequence consumed one now_s() at a time.
class ScriptedClock final : public ClockSource {
 public:
  ScriptedClock() = default;
  explicit ScriptedClock(std::initializer_list<double> instants);

  double now_s() override;

  // Moves time forward; scripted kernels call this to simulate work.
  void advance(double seconds);

 private:
  std::deque<double> preloaded_;
  double current_ = 0.0;
};

}  // namespace powbench
