#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "powbench/clock.hpp"
#include "powbench/pow_kernels.hpp"

namespace powbench {

// One draw of the execution-time distribution.
struct RunSample {
  double duration_s = 0.0;
  double started_offset_s = 0.0;  // since campaign start
  std::uint64_t cost_blocks = 0;
  bool completed = false;
};

enum class LoadMode { Idle, Busy };

struct LoadCondition {
  LoadMode mode = LoadMode::Idle;
  std::uint32_t workers = 0;  // Busy only

  static LoadCondition idle() { return {LoadMode::Idle, 0}; }
  static LoadCondition busy(std::uint32_t workers) {
    return {LoadMode::Busy, workers};
  }
};

enum class PlatformClass { LowEnd, MidEnd, HighEnd };

std::string to_string(PlatformClass c);
PlatformClass platform_class_from_string(const std::string& name);

struct EnvMetadata {
  std::string os_name = "unknown";
  std::string os_version = "unknown";
  std::string cpu_model = "unknown";
  std::uint32_t logical_cores = 1;
  std::string host_id;  // 16 hex chars, salted hash of the hostname
  std::optional<PlatformClass> declared_class;
  std::string captured_at;  // UTC, ISO 8601
};

struct CampaignRecord {
  std::int64_t schema_version = 1;
  PowConfig config;
  EnvMetadata env;
  LoadCondition load;
  double budget_s = 0.0;
  std::vector<RunSample> samples;

  std::size_t completed_count() const;
};

// Kernel hook so campaigns and gates can run against stubs in tests.
using KernelFn =
    std::function<PowOutput(const PowConfig&, ByteView, ByteView)>;

KernelFn real_kernel(const KernelOptions& options = {});

// Never exposes the raw hostname: host_id = hex(blake2b_8(salt || hostname)).
EnvMetadata capture_env(const std::string& host_salt = "");

// Times exactly the kernel call. A kernel error yields completed=false with
// the duration up to the failure; it is not rethrown.
RunSample timed_run(const PowConfig& config, ClockSource& clock,
                    ByteView message, ByteView salt,
                    const KernelFn& kernel = real_kernel());

// Back-to-back timed runs until the next run would start at or after
// budget_s. Busy load starts before the first run and stops after the last.
// Per-run message is label ":" run-index; the salt comes from the config
// (argon2i) or is 16 zero bytes.
CampaignRecord run_campaign(const PowConfig& config, const LoadCondition& load,
                            double budget_s, ClockSource& clock,
                            const KernelFn& kernel = real_kernel(),
                            const std::string& host_salt = "");

// ---- CPU load generator -----------------------------------------------------

// Spins `workers` threads doing hash mixing until stopped. stop() is
// idempotent and joins within one second.
class LoadGenerator {
 public:
  LoadGenerator() = default;
  ~LoadGenerator();

  LoadGenerator(const LoadGenerator&) = delete;
  LoadGenerator& operator=(const LoadGenerator&) = delete;

  void start(std::uint32_t workers);
  void stop();
  std::uint32_t live_workers() const;

 private:
  std::atomic<bool> should_stop_{false};
  std::vector<std::thread> threads_;
};

using LoadHandle = std::unique_ptr<LoadGenerator>;

LoadHandle start_load(std::uint32_t workers);
void stop_load(LoadHandle& handle);

// ---- resource sampling ------------------------------------------------------

struct ResourceSnapshot {
  double at_offset_s = 0.0;
  double cpu_pct = 0.0;  // 0..100*cores, process-wide
  std::uint64_t rss_bytes = 0;
};

// Samples the current process at the requested cadence. Throws Unsupported
// where /proc is not available rather than fabricating zeros.
std::vector<ResourceSnapshot> sample_resources(double interval_s,
                                               double duration_s);

}  // namespace powbench
