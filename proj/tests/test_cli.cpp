//
// moso-kit - Copyright 2026 moso-kit authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <chrono>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <sys/wait.h>
#include <unistd.h>

#include <gtest/gtest.h>
#include <json.hpp>

namespace fs = std::filesystem;

namespace {

const std::string kCli = MOSO_CLI_PATH;
const std::string kDtlz2 = std::string(MOSO_SOURCE_DIR) + "/configs/dtlz2.json";

class Cli : public ::testing::Test {
protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("moso_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path dir_;
};

std::string slurp(const fs::path &p);

// Runs the CLI; stdout goes to `out` when given, stderr is discarded.
int run(const std::string &args, std::string *out = nullptr) {
  const auto capture = fs::temp_directory_path() / ("moso_cli_out_" + std::to_string(::getpid()));
  std::string cmd = kCli + " " + args;
  if (out)
    cmd += " > " + capture.string();
  cmd += " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  if (out) {
    *out = slurp(capture);
    fs::remove(capture);
  }
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t lines(const std::string &text) {
  std::size_t n = 0;
  for (char c : text)
    n += c == '\n';
  return n;
}

void write(const fs::path &p, const std::string &text) {
  std::ofstream out(p);
  out << text;
}

} // namespace

TEST_F(Cli, BudgetRowsAndDeterminism) {
  ASSERT_EQ(run("run --config " + kDtlz2 + " --seed 0 --budget 1000 --out " + (dir_ / "a").string()), 0);
  ASSERT_EQ(run("run --config " + kDtlz2 + " --seed 0 --budget 1000 --workers 1 --out " + (dir_ / "b").string()), 0);
  const auto a = slurp(dir_ / "a" / "database.csv");
  EXPECT_EQ(lines(a), 1001u); // header + one row per evaluation
  EXPECT_EQ(a, slurp(dir_ / "b" / "database.csv"));
  EXPECT_EQ(slurp(dir_ / "a" / "pareto.csv"), slurp(dir_ / "b" / "pareto.csv"));

  const auto meta = nlohmann::json::parse(slurp(dir_ / "a" / "run_meta.json"));
  EXPECT_EQ(meta.at("seed").get<int>(), 0);
  EXPECT_EQ(meta.at("config_hash").get<std::string>().size(), 16u);
  EXPECT_GT(meta.at("walltime_seconds").get<double>(), 0.0);
  EXPECT_EQ(meta.at("evaluations").get<int>(), 1000);

  // Recomputed metrics match the file written by the run.
  std::string printed;
  ASSERT_EQ(run("metrics --db " + (dir_ / "a" / "database.csv").string() + " --ref 1,1,1", &printed), 0);
  std::istringstream want(slurp(dir_ / "a" / "metrics.csv")), got(printed);
  std::string wl, gl;
  std::getline(want, wl);
  std::getline(got, gl);
  std::size_t rows = 0;
  while (std::getline(got, gl)) {
    ASSERT_TRUE(std::getline(want, wl));
    // First three columns: iteration, records, hypervolume.
    auto cut = [](const std::string &s) {
      std::size_t p = 0;
      for (int i = 0; i < 3; ++i)
        p = s.find(',', p) + 1;
      return s.substr(0, p == 0 ? std::string::npos : p - 1);
    };
    EXPECT_EQ(cut(gl), cut(wl));
    ++rows;
  }
  EXPECT_EQ(rows, 51u);
}

TEST_F(Cli, KillAndResumeMatchesUninterrupted) {
  const auto whole = dir_ / "whole", resumed = dir_ / "resumed";
  const auto ck = dir_ / "ck.json";
  ASSERT_EQ(run("run --config " + kDtlz2 + " --seed 1 --budget 520 --out " + whole.string()), 0);

  const pid_t pid = fork();
  ASSERT_GE(pid, 0);
  if (pid == 0) {
    std::freopen("/dev/null", "w", stderr);
    execl(kCli.c_str(), kCli.c_str(), "run", "--config", kDtlz2.c_str(), "--seed", "1", "--budget",
          "520", "--checkpoint", ck.c_str(), "--out", resumed.c_str(), static_cast<char *>(nullptr));
    _exit(127);
  }
  // Kill some time after the first checkpoint appears.
  const auto t0 = std::chrono::steady_clock::now();
  while (!fs::exists(ck) && std::chrono::steady_clock::now() - t0 < std::chrono::seconds(60))
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  std::this_thread::sleep_for(std::chrono::milliseconds(300));
  ::kill(pid, SIGKILL);
  int status = 0;
  ::waitpid(pid, &status, 0);
  ASSERT_TRUE(fs::exists(ck));
  EXPECT_FALSE(fs::exists(resumed / "database.csv")) << "run finished before it was killed";

  ASSERT_EQ(run("run --config " + kDtlz2 + " --seed 1 --budget 520 --checkpoint " + ck.string() +
                " --out " + resumed.string()),
            0);
  for (const char *f : {"database.csv", "pareto.csv", "metrics.csv"})
    EXPECT_EQ(slurp(whole / f), slurp(resumed / f)) << f;
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run("run --config /nonexistent.json --out " + dir_.string()), 2);
  write(dir_ / "bad.json", "{\"variables\": 3}");
  EXPECT_EQ(run("run --config " + (dir_ / "bad.json").string() + " --out " + dir_.string()), 2);
  EXPECT_EQ(run("bogus"), 2);
  EXPECT_EQ(run("metrics --db x.csv --ref a,b"), 2);
  EXPECT_EQ(run("metrics --db /nonexistent.csv --ref 1,1"), 3);
  write(dir_ / "broken.csv", "iteration,f:f1,feasible\n0,abc,1\n");
  EXPECT_EQ(run("metrics --db " + (dir_ / "broken.csv").string() + " --ref 1"), 3);
  // A checkpoint from a different problem is a runtime error.
  write(dir_ / "ck.json", "{\"version\": 1}");
  EXPECT_EQ(run("run --config " + kDtlz2 + " --budget 200 --checkpoint " + (dir_ / "ck.json").string() +
                " --out " + dir_.string()),
            3);
}

TEST_F(Cli, MetricsExamples) {
  write(dir_ / "one.csv", "iteration,x:a,s:o1,f:f1,f:f2,f:f3,feasible\n0,0.1,0,0.5,0.5,0.5,1\n");
  std::string out;
  ASSERT_EQ(run("metrics --db " + (dir_ / "one.csv").string() + " --ref 1,1,1", &out), 0);
  EXPECT_EQ(out, "iteration,records,hypervolume\n0,1,0.125\n");

  write(dir_ / "infeasible.csv",
        "iteration,f:f1,f:f2,feasible\n0,0.5,0.5,0\n1,0.2,0.2,0\n");
  ASSERT_EQ(run("metrics --db " + (dir_ / "infeasible.csv").string() + " --ref 1,1", &out), 0);
  EXPECT_EQ(out, "iteration,records,hypervolume\n0,1,0\n1,2,0\n");

  write(dir_ / "grow.csv", "iteration,f:f1,f:f2,feasible\n0,0.5,0.5,1\n1,0.9,0.9,1\n2,0.25,0.75,1\n");
  ASSERT_EQ(run("metrics --db " + (dir_ / "grow.csv").string() + " --ref 1,1 --mode relative_to_initial", &out), 0);
  EXPECT_EQ(out, "iteration,records,hypervolume,pct_improvement\n0,1,0.25,0\n1,2,0.25,0\n2,3,0.3125,25\n");
}

TEST_F(Cli, BenchScalingPrintsTable) {
  std::string out;
  ASSERT_EQ(run("bench-scaling --workers-list 1,2 --sim-delay 0,0 --budget 48", &out), 0);
  std::istringstream in(out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "workers,walltime_seconds,evaluations");
  std::getline(in, line);
  EXPECT_EQ(line.substr(0, 2), "1,");
  EXPECT_EQ(line.substr(line.rfind(',') + 1), "48");
  EXPECT_EQ(run("bench-scaling --sim-delay 1"), 2);
}
