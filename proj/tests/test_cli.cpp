#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "powbench/storage.hpp"

using namespace powbench;
namespace fs = std::filesystem;

namespace {

struct CmdResult {
  int exit_code;
  std::string output;
};

// Runs the CLI with stdout+stderr captured; isolates the tool config under
// a scratch directory so tests never touch the user's real config.
CmdResult run_cli(const std::string& args) {
  static const std::string scratch = [] {
    auto dir = fs::temp_directory_path() / "powbench_cli_test";
    fs::create_directories(dir);
    return dir.string();
  }();
  std::string cmd = "cd " + scratch + " && POWBENCH_CONFIG=" + scratch +
                    "/config.json " + POWBENCH_CLI_PATH + " " + args + " 2>&1";
  std::array<char, 4096> buf{};
  std::string output;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (fgets(buf.data(), buf.size(), pipe)) {
    output += buf.data();
  }
  int status = pclose(pipe);
  return {WEXITSTATUS(status), output};
}

std::string scratch_path(const std::string& name) {
  return (fs::temp_directory_path() / "powbench_cli_test" / name).string();
}

}  // namespace

TEST_CASE("--help exits 0 on every subcommand") {
  for (const char* sub :
       {"", "calibrate", "stats", "derive-gate", "probe", "report", "load",
        "kat"}) {
    std::string args = std::string(sub).empty() ? "--help"
                                                : std::string(sub) + " --help";
    CmdResult r = run_cli(args);
    CAPTURE(sub);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("--help") != std::string::npos);
  }
}

TEST_CASE("unknown subcommand errors") {
  CHECK(run_cli("frobnicate").exit_code != 0);
}

TEST_CASE("calibrate rejects a zero budget with exit 2") {
  CmdResult r = run_cli(
      "calibrate --algo argon2i --p 1 --t 1 --m 8 --budget-s 0 --out x.json");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("budget") != std::string::npos);
}

TEST_CASE("kat passes on the shipped vector store") {
  CmdResult r = run_cli("kat --vectors " + std::string(POWBENCH_KAT_PATH));
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("passed: 11") != std::string::npos);
}

TEST_CASE("kat fails nonzero on a corrupted store") {
  std::ifstream in(POWBENCH_KAT_PATH);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  auto pos = text.find("c814");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 4, "0000");
  std::string bad = scratch_path("bad_kat.txt");
  std::ofstream(bad) << text;
  CmdResult r = run_cli("kat --vectors " + bad);
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("FAILED") != std::string::npos);
}

TEST_CASE("calibrate -> stats -> derive-gate -> probe round trip") {
  CmdResult cal = run_cli(
      "calibrate --algo argon2i --p 1 --t 1 --m 8 --budget-s 2 --load idle "
      "--out chain.json");
  REQUIRE(cal.exit_code == 0);
  CHECK(cal.output.find("completed runs:") != std::string::npos);

  CampaignRecord record = load_campaign(scratch_path("chain.json"));
  CHECK(record.completed_count() >= 10);

  CmdResult stats = run_cli("stats --in chain.json --balance 10 --seed 9");
  REQUIRE(stats.exit_code == 0);
  CHECK(stats.output.find("samples: 10") != std::string::npos);
  CmdResult stats_again = run_cli("stats --in chain.json --balance 10 --seed 9");
  CHECK(stats.output == stats_again.output);  // fixed seed, fixed output

  CmdResult derive = run_cli("derive-gate --in chain.json --out chain_gate.json");
  REQUIRE(derive.exit_code == 0);
  CHECK(derive.output.find("T=") != std::string::npos);
  CHECK(derive.output.find("N=2") != std::string::npos);

  CmdResult probe = run_cli("probe --gate chain_gate.json");
  CHECK(probe.exit_code == 0);
  CHECK(probe.output.find("bare-metal-like") != std::string::npos);
}

TEST_CASE("calibrate --load busy:2 records the busy condition") {
  CmdResult r = run_cli(
      "calibrate --algo argon2i --p 1 --t 1 --m 8 --budget-s 0.3 "
      "--load busy:2 --out busy.json");
  REQUIRE(r.exit_code == 0);
  CampaignRecord record = load_campaign(scratch_path("busy.json"));
  CHECK(record.load.mode == LoadMode::Busy);
  CHECK(record.load.workers == 2);
}

TEST_CASE("stats with oversized balance exits 2") {
  run_cli(
      "calibrate --algo argon2i --p 1 --t 1 --m 8 --budget-s 0.3 --out "
      "tiny.json");
  CmdResult r = run_cli("stats --in tiny.json --balance 1000000");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("completed samples") != std::string::npos);
}

TEST_CASE("derive-gate explicit stats reproduce the reference gate") {
  CmdResult r = run_cli("derive-gate --mean 0.46 --sigma 1.07 --k 8.1");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("T=10 N=2") != std::string::npos);
}

TEST_CASE("probe --simulate-run-s drives both exit codes") {
  run_cli("derive-gate --mean 0.46 --sigma 1.07 --k 8.1 --out sim_gate.json");
  CmdResult slow = run_cli("probe --gate sim_gate.json --simulate-run-s 6");
  CHECK(slow.exit_code == 3);
  CHECK(slow.output.find("constrained") != std::string::npos);
  CmdResult fast = run_cli("probe --gate sim_gate.json --simulate-run-s 0.4");
  CHECK(fast.exit_code == 0);
  CHECK(fast.output.find("bare-metal-like") != std::string::npos);
}

TEST_CASE("report renders tables and exports CSV") {
  run_cli(
      "calibrate --algo yescrypt --threads 1 --blocks 16 --block-size 64 "
      "--budget-s 0.3 --declared-class low-end --out rep.json");
  CmdResult r = run_cli("report --in rep.json --csv rep.csv");
  REQUIRE(r.exit_code == 0);
  CHECK(r.output.find("| Algorithm |") != std::string::npos);
  CHECK(r.output.find("| Platform | Load |") != std::string::npos);
  CHECK(r.output.find("| low-end | idle |") != std::string::npos);
  std::ifstream csv(scratch_path("rep.csv"));
  std::string header;
  std::getline(csv, header);
  CHECK(header ==
        "label,algorithm,os,declared_class,load,run_index,duration_s,"
        "completed");
}

TEST_CASE("load subcommand runs for the requested wall time") {
  CmdResult r = run_cli("load --workers 2 --seconds 0.5");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("stopped") != std::string::npos);
}
