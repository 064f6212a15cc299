#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "powbench/gate.hpp"
#include "powbench/hex.hpp"
#include "powbench/measurement.hpp"
#include "powbench/pow_kernels.hpp"
#include "powbench/report.hpp"
#include "powbench/stats.hpp"
#include "powbench/storage.hpp"

#ifndef POWBENCH_SOURCE_KAT_PATH
#define POWBENCH_SOURCE_KAT_PATH ""
#endif

namespace {

using namespace powbench;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitError = 2;
constexpr int kExitConstrained = 3;

int g_exit_code = kExitOk;

// ---- persisted tool configuration ------------------------------------------

struct CliConfig {
  std::uint64_t memory_cap_mib = 256;
  double default_budget_s = 60.0;
  std::string host_salt;  // random per install, keeps host_id unlinkable
  std::string out_dir = ".";
};

std::string random_salt() {
  std::random_device rd;
  Bytes salt(16);
  for (auto& b : salt) {
    b = static_cast<std::uint8_t>(rd());
  }
  return to_hex(salt);
}

fs::path config_path() {
  if (const char* env = std::getenv("POWBENCH_CONFIG")) {
    return env;
  }
  if (const char* home = std::getenv("HOME")) {
    return fs::path(home) / ".config" / "powbench" / "config.json";
  }
  return "powbench-config.json";
}

CliConfig load_config() {
  CliConfig cfg;
  cfg.host_salt = random_salt();
  fs::path path = config_path();
  std::error_code ec;
  if (!fs::exists(path, ec)) {
    return cfg;
  }
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    auto j = nlohmann::json::parse(buf.str());
    cfg.memory_cap_mib = j.value("memory_cap_mib", cfg.memory_cap_mib);
    cfg.default_budget_s =
        parse_seconds(j.value("default_budget_s", std::string("60.0")));
    cfg.host_salt = j.value("host_salt", cfg.host_salt);
    cfg.out_dir = j.value("out_dir", cfg.out_dir);
  } catch (const std::exception& e) {
    std::cerr << "warning: ignoring malformed config " << path << ": "
              << e.what() << "\n";
  }
  return cfg;
}

// Persists the install salt on first real use so host_id stays stable
// across runs. Called only by commands that derive a host_id.
void persist_config_if_missing(const CliConfig& cfg) {
  fs::path path = config_path();
  std::error_code ec;
  if (fs::exists(path, ec)) {
    return;
  }
  fs::create_directories(path.parent_path(), ec);
  nlohmann::json j = {{"memory_cap_mib", cfg.memory_cap_mib},
                      {"default_budget_s", format_seconds(cfg.default_budget_s)},
                      {"host_salt", cfg.host_salt},
                      {"out_dir", cfg.out_dir}};
  std::ofstream out(path);
  if (out) {
    out << j.dump(2) << "\n";
  }
}

// ---- shared flag plumbing ---------------------------------------------------

struct AlgoFlags {
  std::string algo = "argon2i";
  std::uint32_t p = 1, t = 10, m = 1024, tag_len = 32;
  std::uint32_t garlic = 15, lambda = 1;
  std::uint32_t threads = 1, blocks = 1024, block_size = 64;
  std::string label;
};

void add_algo_flags(CLI::App* cmd, AlgoFlags& f) {
  cmd->add_option("--algo", f.algo, "PoW kernel: argon2i, catena or yescrypt")
      ->check(CLI::IsMember({"argon2i", "catena", "yescrypt"}))
      ->capture_default_str();
  cmd->add_option("--p", f.p, "argon2i: lanes")->capture_default_str();
  cmd->add_option("--t", f.t, "argon2i: iterations")->capture_default_str();
  cmd->add_option("--m", f.m, "argon2i: memory in KiB")->capture_default_str();
  cmd->add_option("--tag-len", f.tag_len, "argon2i: tag length in bytes")
      ->capture_default_str();
  cmd->add_option("--garlic", f.garlic, "catena: memory graph exponent")
      ->capture_default_str();
  cmd->add_option("--lambda", f.lambda, "catena: bit-reversal passes")
      ->capture_default_str();
  cmd->add_option("--threads", f.threads, "yescrypt: lanes")
      ->capture_default_str();
  cmd->add_option("--blocks", f.blocks, "yescrypt: blocks per lane")
      ->capture_default_str();
  cmd->add_option("--block-size", f.block_size, "yescrypt: block bytes")
      ->capture_default_str();
  cmd->add_option("--label", f.label,
                  "report label (defaults to a parameter summary)");
}

PowConfig config_from_flags(const AlgoFlags& f) {
  PowConfig config;
  config.algorithm = algorithm_from_string(f.algo);
  switch (config.algorithm) {
    case Algorithm::Argon2i:
      config.params = Argon2iParams{f.p, f.t, f.m, f.tag_len, Bytes(16, 0)};
      config.label = f.label.empty()
                         ? "argon2i-p" + std::to_string(f.p) + "-t" +
                               std::to_string(f.t) + "-m" + std::to_string(f.m)
                         : f.label;
      break;
    case Algorithm::CatenaBrg:
      config.params = CatenaParams{f.garlic, f.lambda};
      config.label = f.label.empty() ? "catena-g" + std::to_string(f.garlic)
                                     : f.label;
      break;
    case Algorithm::YescryptLike:
      config.params = YescryptParams{f.threads, f.blocks, f.block_size};
      config.label = f.label.empty()
                         ? "yescrypt-th" + std::to_string(f.threads) + "-b" +
                               std::to_string(f.blocks) + "-bs" +
                               std::to_string(f.block_size)
                         : f.label;
      break;
  }
  return config;
}

LoadCondition parse_load(const std::string& text) {
  if (text == "idle") {
    return LoadCondition::idle();
  }
  if (text.rfind("busy:", 0) == 0) {
    int workers = std::stoi(text.substr(5));
    if (workers < 1) {
      throw InvalidParam("load", "busy worker count must be >= 1");
    }
    return LoadCondition::busy(static_cast<std::uint32_t>(workers));
  }
  throw InvalidParam("load", "expected 'idle' or 'busy:K'");
}

std::vector<CampaignRecord> load_campaigns(
    const std::vector<std::string>& paths) {
  std::vector<CampaignRecord> records;
  records.reserve(paths.size());
  for (const auto& path : paths) {
    records.push_back(load_campaign(path));
  }
  return records;
}

StatsSummary pooled_summary(const std::vector<CampaignRecord>& records,
                            std::size_t balance, std::uint64_t seed) {
  std::vector<double> durations;
  if (balance > 0) {
    durations = balanced_sample(records, balance, seed);
  } else {
    for (const auto& r : records) {
      for (const auto& s : r.samples) {
        if (s.completed) {
          durations.push_back(s.duration_s);
        }
      }
    }
  }
  return summarize(durations);
}

std::string resolve_kat_path(const std::string& flag_value) {
  if (!flag_value.empty()) {
    return flag_value;
  }
  if (fs::exists("data/kat_vectors.txt")) {
    return "data/kat_vectors.txt";
  }
  std::string source_path = POWBENCH_SOURCE_KAT_PATH;
  if (!source_path.empty() && fs::exists(source_path)) {
    return source_path;
  }
  return "data/kat_vectors.txt";  // let the loader report the IoError
}

std::string display_s(double seconds) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", seconds);
  return buf;
}

void print_verdict(const Verdict& v) {
  std::cout << "verdict: " << to_string(v.classification) << "\n"
            << "completed runs: " << v.completed_runs << " (required "
            << v.gate.n_required << ")\n"
            << "elapsed: " << display_s(v.elapsed_s) << " s (budget "
            << display_s(v.gate.t_budget_s) << " s)\n";
  for (std::size_t i = 0; i < v.per_run.size(); ++i) {
    const RunSample& s = v.per_run[i];
    std::cout << "  run " << i << ": started +"
              << display_s(s.started_offset_s) << " s, took "
              << display_s(s.duration_s) << " s, "
              << (s.completed ? "completed" : "failed") << "\n";
  }
}

std::atomic<bool> g_interrupted{false};

void handle_signal(int) { g_interrupted.store(true); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "powbench - measures how distinguishable an execution environment is\n"
      "via memory-hard proof-of-work timing: calibrate, fit the execution-\n"
      "time model, derive an (N, T) gate, and probe the current host."};
  app.require_subcommand(1);
  app.fallthrough();

  CliConfig cli_cfg = load_config();
  std::uint64_t memory_cap_mib = cli_cfg.memory_cap_mib;
  app.add_option("--memory-cap-mib", memory_cap_mib,
                 "kernel working-set cap in MiB")
      ->capture_default_str();

  auto kernel_options = [&] {
    KernelOptions options;
    options.memory_cap_bytes = memory_cap_mib * 1024 * 1024;
    return options;
  };

  // ---- calibrate ----
  auto* calibrate = app.add_subcommand(
      "calibrate", "Run a timed PoW campaign and write a campaign file");
  AlgoFlags cal_flags;
  add_algo_flags(calibrate, cal_flags);
  double budget_s = cli_cfg.default_budget_s;
  std::string load_text = "idle";
  std::string out_file;
  std::string declared_class;
  calibrate->add_option("--budget-s", budget_s, "campaign wall-clock budget")
      ->capture_default_str();
  calibrate->add_option("--load", load_text, "'idle' or 'busy:K'")
      ->capture_default_str();
  calibrate->add_option("--out", out_file, "campaign file to write")
      ->required();
  calibrate->add_option("--declared-class", declared_class,
                        "optional platform label: low-end, mid-end, high-end");
  calibrate->callback([&] {
    persist_config_if_missing(cli_cfg);
    PowConfig config = config_from_flags(cal_flags);
    LoadCondition load = parse_load(load_text);
    SystemClock clock;
    CampaignRecord record = run_campaign(config, load, budget_s, clock,
                                         real_kernel(kernel_options()),
                                         cli_cfg.host_salt);
    if (!declared_class.empty()) {
      record.env.declared_class = platform_class_from_string(declared_class);
    }
    save_campaign(record, out_file);
    std::cout << "campaign written to " << out_file << "\n"
              << "completed runs: " << record.completed_count() << " of "
              << record.samples.size() << " in "
              << format_seconds(record.budget_s) << " s\n";
  });

  // ---- stats ----
  auto* stats_cmd = app.add_subcommand(
      "stats", "Summarize campaign files (balanced sampling across inputs)");
  std::vector<std::string> stats_in;
  std::size_t balance = 0;
  std::uint64_t seed = 1;
  stats_cmd->add_option("--in", stats_in, "campaign files")
      ->required()
      ->expected(-1);
  stats_cmd->add_option(
      "--balance", balance,
      "draw this many completed runs from each file (0 = use all)");
  stats_cmd->add_option("--seed", seed, "sampling seed")->capture_default_str();
  stats_cmd->callback([&] {
    auto records = load_campaigns(stats_in);
    StatsSummary summary = pooled_summary(records, balance, seed);
    std::cout << "samples: " << summary.n << "\n"
              << render_stats_table({{records.front().config, summary}});
  });

  // ---- derive-gate ----
  auto* derive = app.add_subcommand(
      "derive-gate",
      "Derive the (N, T) rule from campaign files or explicit statistics");
  std::vector<std::string> derive_in;
  double mean_flag = -1, sigma_flag = -1, k_flag = -1;
  std::uint32_t n_required = 2;
  std::size_t derive_balance = 0;
  std::uint64_t derive_seed = 1;
  std::string gate_out;
  AlgoFlags derive_flags;
  add_algo_flags(derive, derive_flags);
  derive->add_option("--in", derive_in, "campaign files")->expected(-1);
  derive->add_option("--mean", mean_flag, "mean seconds (explicit mode)");
  derive->add_option("--sigma", sigma_flag, "sigma seconds (explicit mode)");
  derive->add_option("--k", k_flag, "k factor (explicit mode)");
  derive->add_option("--n", n_required, "required completed runs N")
      ->capture_default_str();
  derive->add_option("--balance", derive_balance,
                     "balanced sample size per file (0 = use all)");
  derive->add_option("--seed", derive_seed, "sampling seed");
  derive->add_option("--out", gate_out, "gate file to write");
  derive->callback([&] {
    StatsSummary summary;
    PowConfig config;
    if (!derive_in.empty()) {
      auto records = load_campaigns(derive_in);
      summary = pooled_summary(records, derive_balance, derive_seed);
      config = records.front().config;
    } else if (mean_flag >= 0 && sigma_flag >= 0 && k_flag >= 0) {
      summary.n = 0;
      summary.mean_s = mean_flag;
      summary.sigma_s = sigma_flag;
      summary.k_factor = k_flag;
      summary.coverage = chebyshev_coverage(k_flag);
      config = config_from_flags(derive_flags);
    } else {
      throw InvalidParam("derive-gate",
                         "need --in files or all of --mean/--sigma/--k");
    }
    GateSpec gate = derive_gate(summary, config, n_required);
    // ceil() makes T whole seconds, so print it as an integer
    std::cout << "T=" << static_cast<long long>(gate.t_budget_s)
              << " N=" << gate.n_required << "\n";
    if (!gate_out.empty()) {
      save_gate(gate, gate_out);
      std::cout << "gate written to " << gate_out << "\n";
    }
  });

  // ---- probe ----
  auto* probe = app.add_subcommand(
      "probe",
      "Evaluate a gate on this host; exit 0 bare-metal-like, 3 constrained");
  std::string gate_file;
  double simulate_run_s = 0;
  probe->add_option("--gate", gate_file, "gate file from derive-gate")
      ->required();
  probe
      ->add_option("--simulate-run-s", simulate_run_s,
                   "dry-run the decision rule with a synthetic constant "
                   "per-run duration instead of executing the kernel")
      ->check(CLI::NonNegativeNumber);
  probe->callback([&] {
    GateSpec gate = load_gate(gate_file);
    Verdict verdict;
    if (simulate_run_s > 0) {
      ScriptedClock clock;
      auto stub = [&clock, simulate_run_s](const PowConfig& config, ByteView,
                                           ByteView) {
        clock.advance(simulate_run_s);
        return PowOutput{Bytes(32, 0), cost_model(config)};
      };
      verdict = evaluate_gate(gate, clock, stub);
    } else {
      SystemClock clock;
      verdict = evaluate_gate(gate, clock, real_kernel(kernel_options()));
    }
    print_verdict(verdict);
    g_exit_code = verdict.classification == Classification::BareMetalLike
                      ? kExitOk
                      : kExitConstrained;
  });

  // ---- report ----
  auto* report = app.add_subcommand(
      "report", "Render stats and completed-run count tables");
  std::vector<std::string> report_in;
  std::string csv_out;
  report->add_option("--in", report_in, "campaign files")
      ->required()
      ->expected(-1);
  report->add_option("--csv", csv_out, "also export all samples as CSV");
  report->callback([&] {
    auto records = load_campaigns(report_in);
    // One stats row per distinct label, pooling completed runs.
    std::vector<std::pair<PowConfig, StatsSummary>> rows;
    std::vector<std::string> labels;
    for (const auto& r : records) {
      if (std::find(labels.begin(), labels.end(), r.config.label) !=
          labels.end()) {
        continue;
      }
      labels.push_back(r.config.label);
      std::vector<double> durations;
      for (const auto& other : records) {
        if (other.config.label != r.config.label) continue;
        for (const auto& s : other.samples) {
          if (s.completed) durations.push_back(s.duration_s);
        }
      }
      try {
        rows.emplace_back(r.config, summarize(durations));
      } catch (const Error& e) {
        std::cerr << "note: skipping '" << r.config.label << "': " << e.what()
                  << "\n";
      }
    }
    if (!rows.empty()) {
      std::cout << render_stats_table(rows) << "\n";
    }
    std::cout << render_counts_table(records);
    if (!csv_out.empty()) {
      export_csv(records, csv_out);
      std::cout << "csv written to " << csv_out << "\n";
    }
  });

  // ---- load ----
  auto* load_cmd = app.add_subcommand(
      "load", "Run the CPU load generator standalone");
  std::uint32_t workers = 1;
  double seconds = 0;
  load_cmd->add_option("--workers", workers, "busy worker threads")
      ->required();
  load_cmd
      ->add_option("--seconds", seconds,
                   "how long to run (0 = until SIGINT/SIGTERM)")
      ->capture_default_str();
  load_cmd->callback([&] {
    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);
    LoadHandle handle = start_load(workers);
    std::cout << "load generator running with " << workers << " workers\n";
    auto started = std::chrono::steady_clock::now();
    while (!g_interrupted.load()) {
      std::this_thread::sleep_for(std::chrono::milliseconds(100));
      if (seconds > 0) {
        double elapsed = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - started)
                             .count();
        if (elapsed >= seconds) break;
      }
    }
    stop_load(handle);
    std::cout << "load generator stopped\n";
  });

  // ---- kat ----
  auto* kat = app.add_subcommand(
      "kat", "Run the known-answer vectors; exit nonzero on any failure");
  std::string vectors_file;
  kat->add_option("--vectors", vectors_file,
                  "vector store (default: data/kat_vectors.txt)");
  kat->callback([&] {
    std::string path = resolve_kat_path(vectors_file);
    KatReport report = run_known_answers(path);
    if (report.no_vectors) {
      std::cout << "warning: vector store is empty\n";
    }
    std::cout << "passed: " << report.passed << "\n";
    for (const auto& id : report.failed) {
      std::cout << "FAILED: " << id << "\n";
    }
    if (!report.failed.empty()) {
      g_exit_code = kExitError;
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return g_exit_code;
}
