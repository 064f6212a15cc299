#include "powbench/report.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include "powbench/errors.hpp"

namespace powbench {
namespace {

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

// Two decimals with one trailing zero dropped, matching how K values are
// usually quoted: 8.10 -> 8.1, 9.99 -> 9.99.
std::string k_style(double v) {
  std::string s = fixed(v, 2);
  if (s.size() > 1 && s.back() == '0') {
    s.pop_back();
  }
  return s;
}

std::string params_cell(const PowConfig& config) {
  switch (config.algorithm) {
    case Algorithm::Argon2i: {
      const auto& p = config.argon2i();
      return "p=" + std::to_string(p.parallelism) +
             " t=" + std::to_string(p.iterations) +
             " m=" + std::to_string(p.memory_kib) + "KiB";
    }
    case Algorithm::CatenaBrg: {
      const auto& p = config.catena();
      return "g=" + std::to_string(p.garlic) +
             " lambda=" + std::to_string(p.lambda);
    }
    case Algorithm::YescryptLike: {
      const auto& p = config.yescrypt();
      return "threads=" + std::to_string(p.threads) +
             " blocks=" + std::to_string(p.blocks) +
             " block_size=" + std::to_string(p.block_size);
    }
  }
  return "?";
}

}  // namespace

std::string render_stats_table(
    const std::vector<std::pair<PowConfig, StatsSummary>>& rows) {
  if (rows.empty()) {
    throw EmptyInput("stats rows");
  }
  std::string out =
      "| Algorithm | Parameters | Min | Max | Sigma | Mean | K | Chebyshev |\n"
      "|---|---|---|---|---|---|---|---|\n";
  for (const auto& [config, stats] : rows) {
    out += "| " + to_string(config.algorithm) + " | " + params_cell(config) +
           " | " + fixed(stats.min_s, 2) + " | " + fixed(stats.max_s, 2) +
           " | " + fixed(stats.sigma_s, 2) + " | " + fixed(stats.mean_s, 2) +
           " | " + k_style(stats.k_factor) + " | " +
           fixed(stats.coverage * 100.0, 2) + "% |\n";
  }
  return out;
}

std::string render_counts_table(const std::vector<CampaignRecord>& records) {
  if (records.empty()) {
    throw EmptyInput("record list");
  }

  auto platform_of = [](const CampaignRecord& r) {
    return r.env.declared_class ? to_string(*r.env.declared_class)
                                : r.env.cpu_model;
  };

  // First-seen order keeps the rendering a pure function of the input.
  std::vector<std::string> platforms, oses;
  for (const auto& r : records) {
    std::string p = platform_of(r);
    if (std::find(platforms.begin(), platforms.end(), p) == platforms.end()) {
      platforms.push_back(p);
    }
    if (std::find(oses.begin(), oses.end(), r.env.os_name) == oses.end()) {
      oses.push_back(r.env.os_name);
    }
  }

  std::map<std::string, std::map<int, std::map<std::string, std::uint64_t>>>
      cells;  // platform -> load(0=idle,1=busy) -> os -> count
  std::map<std::string, std::map<int, bool>> seen;
  for (const auto& r : records) {
    int load = r.load.mode == LoadMode::Idle ? 0 : 1;
    cells[platform_of(r)][load][r.env.os_name] += r.completed_count();
    seen[platform_of(r)][load] = true;
  }

  std::string out = "| Platform | Load |";
  for (const auto& os : oses) {
    out += " " + os + " |";
  }
  out += "\n|---|---|";
  for (std::size_t i = 0; i < oses.size(); ++i) {
    out += "---|";
  }
  out += "\n";

  for (const auto& platform : platforms) {
    for (int load : {0, 1}) {
      if (!seen[platform][load]) {
        continue;
      }
      out += "| " + platform + " | " + (load == 0 ? "idle" : "busy") + " |";
      for (const auto& os : oses) {
        auto& by_os = cells[platform][load];
        auto it = by_os.find(os);
        out += it == by_os.end() ? " - |"
                                 : " " + std::to_string(it->second) + " |";
      }
      out += "\n";
    }
  }
  return out;
}

}  // namespace powbench
