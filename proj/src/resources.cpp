#include <unistd.h>

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "powbench/measurement.hpp"

namespace powbench {
namespace {

// utime + stime of the current process, in seconds.
double process_cpu_seconds() {
  std::ifstream in("/proc/self/stat");
  if (!in) {
    throw Unsupported("/proc/self/stat is not readable");
  }
  std::string content;
  std::getline(in, content);
  // Field 2 (comm) may contain spaces; skip past the closing paren.
  auto paren = content.rfind(')');
  if (paren == std::string::npos) {
    throw Unsupported("unexpected /proc/self/stat format");
  }
  std::istringstream rest(content.substr(paren + 2));
  std::string field;
  double utime = 0, stime = 0;
  for (int i = 3; rest >> field; ++i) {  // fields are 1-based; comm was 2
    if (i == 14) utime = std::stod(field);
    if (i == 15) {
      stime = std::stod(field);
      break;
    }
  }
  long hz = sysconf(_SC_CLK_TCK);
  return (utime + stime) / static_cast<double>(hz > 0 ? hz : 100);
}

std::uint64_t process_rss_bytes() {
  std::ifstream in("/proc/self/statm");
  if (!in) {
    throw Unsupported("/proc/self/statm is not readable");
  }
  std::uint64_t size_pages = 0, rss_pages = 0;
  in >> size_pages >> rss_pages;
  long page = sysconf(_SC_PAGESIZE);
  return rss_pages * static_cast<std::uint64_t>(page > 0 ? page : 4096);
}

}  // namespace

std::vector<ResourceSnapshot> sample_resources(double interval_s,
                                               double duration_s) {
  if (!(interval_s > 0)) {
    throw InvalidParam("interval_s", "must be positive");
  }
  if (duration_s < interval_s) {
    throw InvalidParam("duration_s", "must be at least interval_s");
  }

  std::vector<ResourceSnapshot> snapshots;
  auto count = static_cast<std::size_t>(std::floor(duration_s / interval_s));
  snapshots.reserve(count);

  auto start = std::chrono::steady_clock::now();
  double last_cpu = process_cpu_seconds();
  double last_wall = 0.0;
  for (std::size_t i = 1; i <= count; ++i) {
    auto deadline =
        start + std::chrono::duration<double>(interval_s * static_cast<double>(i));
    std::this_thread::sleep_until(deadline);
    double wall = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
    double cpu = process_cpu_seconds();
    ResourceSnapshot snap;
    snap.at_offset_s = wall;
    double dw = wall - last_wall;
    snap.cpu_pct = dw > 0 ? 100.0 * (cpu - last_cpu) / dw : 0.0;
    if (snap.cpu_pct < 0) snap.cpu_pct = 0;
    snap.rss_bytes = process_rss_bytes();
    snapshots.push_back(snap);
    last_cpu = cpu;
    last_wall = wall;
  }
  return snapshots;
}

}  // namespace powbench
