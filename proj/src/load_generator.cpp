#include <cstdint>

#include "powbench/blake2b.hpp"
#include "powbench/measurement.hpp"

namespace powbench {

LoadGenerator::~LoadGenerator() { stop(); }

void LoadGenerator::start(std::uint32_t workers) {
  if (workers < 1) {
    throw InvalidParam("workers", "minimum is 1");
  }
  stop();
  should_stop_.store(false, std::memory_order_relaxed);
  threads_.reserve(workers);
  for (std::uint32_t i = 0; i < workers; ++i) {
    threads_.emplace_back([this, i] {
      // Hash mixing over a small buffer: keeps the CPU pinned without
      // putting pressure on memory.
      std::uint8_t buf[64] = {static_cast<std::uint8_t>(i)};
      while (!should_stop_.load(std::memory_order_relaxed)) {
        Blake2b h(64);
        h.update(ByteView(buf, sizeof buf));
        h.finish(buf);
      }
    });
  }
}

void LoadGenerator::stop() {
  should_stop_.store(true, std::memory_order_relaxed);
  for (auto& t : threads_) {
    if (t.joinable()) {
      t.join();
    }
  }
  threads_.clear();
}

std::uint32_t LoadGenerator::live_workers() const {
  return static_cast<std::uint32_t>(threads_.size());
}

LoadHandle start_load(std::uint32_t workers) {
  auto handle = std::make_unique<LoadGenerator>();
  handle->start(workers);
  return handle;
}

void stop_load(LoadHandle& handle) {
  if (handle) {
    handle->stop();
  }
}

}  // namespace powbench
