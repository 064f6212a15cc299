#include "powbench/clock.hpp"

#include <chrono>

#include "powbench/errors.hpp"

namespace powbench {

double SystemClock::now_s() {
  auto t = std::chrono::steady_clock::now().time_since_epoch();
  return std::chrono::duration<double>(t).count();
}

ScriptedClock::ScriptedClock(std::initializer_list<double> instants)
    : preloaded_(instants) {
  double prev = 0.0;
  for (double t : preloaded_) {
    if (t < prev) {
      throw InvalidParam("instants", "must be non-decreasing");
    }
    prev = t;
  }
}

double ScriptedClock::now_s() {
  if (!preloaded_.empty()) {
    current_ = preloaded_.front();
    preloaded_.pop_front();
  }
  return current_;
}

void ScriptedClock::advance(double seconds) {
  if (seconds < 0) {
    throw InvalidParam("seconds", "clock cannot move backwards");
  }
  current_ += seconds;
}

}  // namespace powbench
