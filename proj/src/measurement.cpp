#include "powbench/measurement.hpp"

#include <sys/utsname.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <fstream>

#include "powbench/blake2b.hpp"
#include "powbench/hex.hpp"

namespace powbench {

std::string to_string(PlatformClass c) {
  switch (c) {
    case PlatformClass::LowEnd:
      return "low-end";
    case PlatformClass::MidEnd:
      return "mid-end";
    case PlatformClass::HighEnd:
      return "high-end";
  }
  return "unknown";
}

PlatformClass platform_class_from_string(const std::string& name) {
  if (name == "low-end") return PlatformClass::LowEnd;
  if (name == "mid-end") return PlatformClass::MidEnd;
  if (name == "high-end") return PlatformClass::HighEnd;
  throw InvalidParam("declared_class", "unknown class '" + name + "'");
}

std::size_t CampaignRecord::completed_count() const {
  return static_cast<std::size_t>(
      std::count_if(samples.begin(), samples.end(),
                    [](const RunSample& s) { return s.completed; }));
}

KernelFn real_kernel(const KernelOptions& options) {
  return [options](const PowConfig& config, ByteView message, ByteView salt) {
    return compute_pow(config, message, salt, options);
  };
}

namespace {

std::string read_cpu_model() {
  std::ifstream in("/proc/cpuinfo");
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("model name", 0) == 0) {
      auto colon = line.find(':');
      if (colon != std::string::npos) {
        auto start = line.find_first_not_of(" \t", colon + 1);
        if (start != std::string::npos) {
          return line.substr(start);
        }
      }
    }
  }
  return "unknown";
}

std::string utc_now_iso8601() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

EnvMetadata capture_env(const std::string& host_salt) {
  EnvMetadata env;
  struct utsname un{};
  if (uname(&un) == 0) {
    if (un.sysname[0] != '\0') env.os_name = un.sysname;
    if (un.release[0] != '\0') env.os_version = un.release;
  }
  env.cpu_model = read_cpu_model();
  env.logical_cores = std::max(1u, std::thread::hardware_concurrency());

  char hostname[256] = "unknown";
  gethostname(hostname, sizeof hostname - 1);
  Bytes salted(host_salt.begin(), host_salt.end());
  salted.insert(salted.end(), hostname, hostname + std::strlen(hostname));
  env.host_id = to_hex(blake2b(8, salted));

  env.captured_at = utc_now_iso8601();
  return env;
}

RunSample timed_run(const PowConfig& config, ClockSource& clock,
                    ByteView message, ByteView salt, const KernelFn& kernel) {
  RunSample sample;
  double start = clock.now_s();
  try {
    PowOutput out = kernel(config, message, salt);
    sample.duration_s = clock.now_s() - start;
    sample.cost_blocks = out.cost_blocks;
    sample.completed = true;
  } catch (const Error&) {
    sample.duration_s = clock.now_s() - start;
    sample.completed = false;
  }
  return sample;
}

namespace {

Bytes default_salt(const PowConfig& config) {
  if (config.algorithm == Algorithm::Argon2i) {
    return config.argon2i().salt;
  }
  return Bytes(16, 0x00);
}

}  // namespace

CampaignRecord run_campaign(const PowConfig& config, const LoadCondition& load,
                            double budget_s, ClockSource& clock,
                            const KernelFn& kernel,
                            const std::string& host_salt) {
  if (budget_s <= 0) {
    throw InvalidBudget(budget_s);
  }
  validate_config(config);
  if (load.mode == LoadMode::Busy && load.workers < 1) {
    throw InvalidParam("workers", "busy mode needs at least 1 worker");
  }

  CampaignRecord record;
  record.config = config;
  record.env = capture_env(host_salt);
  record.load = load;
  record.budget_s = budget_s;

  LoadGenerator generator;
  if (load.mode == LoadMode::Busy) {
    generator.start(load.workers);
  }

  Bytes salt = default_salt(config);
  double t0 = clock.now_s();
  for (std::uint64_t index = 0;; ++index) {
    double offset = clock.now_s() - t0;
    if (offset >= budget_s) {
      break;
    }
    std::string msg = config.label + ":" + std::to_string(index);
    Bytes message(msg.begin(), msg.end());
    RunSample sample = timed_run(config, clock, message, salt, kernel);
    sample.started_offset_s = offset;
    record.samples.push_back(sample);
  }

  generator.stop();
  return record;
}

}  // namespace powbench
