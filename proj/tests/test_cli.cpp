#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bbfs/io.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

/// Runs the CLI through the shell with stdout captured; stderr is discarded.
Result run(const std::string& args, const std::string& env = "") {
  const std::string command = env + " '" BBFS_CLI_PATH "' " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t got = 0;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("bbfs_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name) << text;
  }

  fs::path dir_;
};

TEST_F(Cli, GenerateIsReproducible) {
  const std::string args =
      "generate --model girg --n 2000 --tau 2.5 --alpha 1.5 --dim 2 --avg-deg 10 --seed 4 --out ";
  const auto first = run(args + path("a.bin"));
  ASSERT_EQ(first.code, 0);
  // A single n,m,avg_degree,max_degree line.
  EXPECT_EQ(std::count(first.out.begin(), first.out.end(), '\n'), 1) << first.out;
  EXPECT_EQ(std::count(first.out.begin(), first.out.end(), ','), 3) << first.out;
  EXPECT_EQ(first.out.rfind("2000,", 0), 0u) << first.out;
  ASSERT_EQ(run(args + path("b.bin")).code, 0);
  EXPECT_EQ(slurp(path("a.bin")), slurp(path("b.bin")));
  const auto inst = bbfs::load_instance_file(path("a.bin"));
  EXPECT_EQ(inst.graph.vertex_count(), 2000u);
}

TEST_F(Cli, GenerateRejectsTauBelowTwo) {
  const auto r = run("generate --model chung-lu --n 100 --tau 1.5 --avg-deg 10 --seed 1 --out " +
                     path("x.bin"));
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(fs::exists(path("x.bin")));
}

TEST_F(Cli, MissingSubcommandIsUsageError) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
}

TEST_F(Cli, SearchTriangle) {
  write("tri.txt", "0 1\n1 2\n2 0\n");
  const auto r = run("search --edge-list " + path("tri.txt") + " --algo vbe --s 0 --t 2");
  ASSERT_EQ(r.code, 0);
  std::istringstream in(r.out);
  const auto records = bbfs::read_records(in);
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(records[0].path_len, 1);
  EXPECT_EQ(records[0].oracle_dist, 1);
  EXPECT_EQ(records[0].algorithm, "vbe");
}

TEST_F(Cli, SearchDisconnectedExitsThree) {
  write("two.txt", "0 1\n2 3\n");
  const auto r = run("search --edge-list " + path("two.txt") + " --algo vba --s 0 --t 3");
  EXPECT_EQ(r.code, 3);
  std::istringstream in(r.out);
  const auto records = bbfs::read_records(in);
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(records[0].path_len, -1);
}

TEST_F(Cli, SearchMissingFileExitsFour) {
  EXPECT_EQ(run("search --edge-list " + path("nope.txt") + " --algo vba --s 0 --t 1").code, 4);
  write("bad.txt", "0 1 2\n");
  EXPECT_EQ(run("search --edge-list " + path("bad.txt") + " --algo vba --s 0 --t 1").code, 4);
}

TEST_F(Cli, SweepAndSummaries) {
  write("plan.txt",
        "master_seed = 3\n"
        "sizes = 300, 600, 1200\n"
        "graphs_per_config = 1\n"
        "pairs_per_graph = 5\n"
        "algorithms = vba, vbe\n"
        "connect_attempts = 1\n"
        "config\n"
        "model = chung-lu\n"
        "tau = 2.5\n");
  ASSERT_EQ(run("sweep --plan " + path("plan.txt") + " --out " + path("runs.csv")).code, 0);
  const std::string runs = slurp(path("runs.csv"));
  EXPECT_EQ(std::count(runs.begin(), runs.end(), '\n'), 1 + 3 * 5 * 2);

  ASSERT_EQ(run("sweep --plan " + path("plan.txt") + " --out " + path("again.csv") +
                " --threads 3")
                .code,
            0);
  EXPECT_EQ(slurp(path("again.csv")), runs);

  const auto expo = run("exponent --in " + path("runs.csv"));
  ASSERT_EQ(expo.code, 0);
  EXPECT_EQ(expo.out.rfind("model,tau,alpha,dim,n,algorithm,runs,median_cost,m,rho", 0), 0u);
  EXPECT_EQ(std::count(expo.out.begin(), expo.out.end(), '\n'), 1 + 3 * 2);

  ASSERT_EQ(run("scaling --in " + path("runs.csv") + " --out " + path("scaling.csv")).code, 0);
  const std::string scaling = slurp(path("scaling.csv"));
  EXPECT_EQ(scaling.rfind("model,tau,alpha,dim,algorithm,n,m,median_cost,slope\n", 0), 0u);

  const auto ratio = run("ratio --in " + path("runs.csv"));
  ASSERT_EQ(ratio.code, 0);
  EXPECT_NE(ratio.out.find("median_max_degree_ratio"), std::string::npos);
}

TEST_F(Cli, MalformedPlanIsUsageError) {
  write("plan.txt", "sizes = 100\nthis is not a key\n");
  EXPECT_EQ(run("sweep --plan " + path("plan.txt") + " --out " + path("r.csv")).code, 2);
}

TEST_F(Cli, SeedEnvironmentOverridesFlag) {
  const std::string args = "generate --model chung-lu --n 1000 --tau 2.5 --avg-deg 8 --out ";
  ASSERT_EQ(run(args + path("a.bin") + " --seed 1", "BBFS_SEED=77").code, 0);
  ASSERT_EQ(run(args + path("b.bin") + " --seed 77").code, 0);
  ASSERT_EQ(run(args + path("c.bin") + " --seed 1").code, 0);
  EXPECT_EQ(slurp(path("a.bin")), slurp(path("b.bin")));
  EXPECT_NE(slurp(path("a.bin")), slurp(path("c.bin")));
  EXPECT_EQ(run(args + path("d.bin") + " --seed 1", "BBFS_SEED=abc").code, 2);
}

TEST_F(Cli, LoadReportsShape) {
  write("tri.txt", "a b\nb c\nc a\nd e\n");
  const auto r = run("load --edge-list " + path("tri.txt") + " --edges-out " + path("e.txt"));
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("5,4,"), std::string::npos) << r.out;
  EXPECT_EQ(slurp(path("e.txt")), "0 1\n0 2\n1 2\n3 4\n");
}

}  // namespace
