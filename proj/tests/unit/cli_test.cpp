// Copyright 2026 The iobs Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "iobs/image.hpp"
#include "iobs/instance_io.hpp"
#include "iobs/matrix_io.hpp"
#include "iobs/mlp.hpp"
#include "iobs/trace_io.hpp"
#include "process.hpp"

namespace iobs {
namespace {

namespace fs = std::filesystem;
using testing::run_command;

const std::string kCli = IOBS_CLI_PATH;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("iobs_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  testing::ProcessResult cli(const std::string& args) const { return run_command(kCli + " " + args); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

TEST_F(CliTest, GenThenSolveRecoversInOneStep) {
  ASSERT_EQ(cli("gen --d 32 --n 64 --kstar 4 --seed 3 --out " + path("inst")).exit_code, 0);
  for (const char* f : {"X.mat", "y.vec", "theta_star.vec", "meta"}) EXPECT_TRUE(fs::exists(dir_ / "inst" / f)) << f;
  const SparseRegressionInstance inst = read_instance(dir_ / "inst");
  EXPECT_EQ(count_nonzero(inst.theta_star), 4u);

  const auto r = cli("solve --data " + path("inst") + " --method topk-iobs --k 8 --iters 1");
  ASSERT_EQ(r.exit_code, 0);
  std::istringstream csv(r.out);
  const std::vector<TraceRecord> trace = read_trace_csv(csv);
  ASSERT_EQ(trace.size(), 2u);
  EXPECT_LE(*trace[1].dist_to_opt, 1e-8);
}

TEST_F(CliTest, SolveWritesTraceFileAndIterate) {
  ASSERT_EQ(cli("gen --d 16 --n 40 --kstar 2 --out " + path("inst")).exit_code, 0);
  const auto r = cli("solve --data " + path("inst") + " --method iht --k 4 --iters 5 --trace " + path("t.csv") +
                     " --out " + path("theta.vec"));
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_NE(r.out.find("t=5"), std::string::npos);
  EXPECT_EQ(load_trace_csv(dir_ / "t.csv").size(), 6u);
  EXPECT_LE(count_nonzero(load_vector(dir_ / "theta.vec")), 4u);
}

TEST_F(CliTest, BenchIsByteIdenticalAcrossInvocations) {
  const std::string args = " --d 24 --n 48 --kstar 3 --k 6 --iters 20 --runs 3 --seed 4 --methods iht,topk-iobs";
  ASSERT_EQ(cli("bench --outdir " + path("a") + args).exit_code, 0);
  ASSERT_EQ(cli("bench --jobs 2 --outdir " + path("b") + args).exit_code, 0);
  for (const auto& entry : fs::recursive_directory_iterator(dir_ / "a")) {
    if (!entry.is_regular_file()) continue;
    const fs::path rel = fs::relative(entry.path(), dir_ / "a");
    EXPECT_EQ(slurp(entry.path()), slurp(dir_ / "b" / rel)) << rel;
  }
  EXPECT_TRUE(fs::exists(dir_ / "a" / "runs" / "run_0.iht.csv"));
}

TEST_F(CliTest, BenchReadsSpecFileAndInlineFlagsOverride) {
  std::ofstream(dir_ / "spec.txt") << "d=20\nn=40\nkstar=2\nk=4\niters=3\nruns=2\nmethods=topk-iobs\n";
  ASSERT_EQ(cli("bench --spec " + path("spec.txt") + " --runs 1 --outdir " + path("o")).exit_code, 0);
  const std::string spec = slurp(dir_ / "o" / "spec.txt");
  EXPECT_NE(spec.find("runs=1\n"), std::string::npos);
  EXPECT_NE(spec.find("d=20\n"), std::string::npos);
  EXPECT_EQ(load_trace_csv(dir_ / "o" / "topk-iobs.mean.csv").size(), 4u);
}

TEST_F(CliTest, RecoverBundledImageExactly) {
  const auto r = cli(std::string("recover --image ") + IOBS_SAMPLE_IMAGE + " --method topk-iobs --iters 1 --out " +
                     path("rec"));
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_NE(r.out.find("psnr=inf"), std::string::npos);
  EXPECT_EQ(load_pgm(dir_ / "rec" / "recovered.pgm"), load_pgm(IOBS_SAMPLE_IMAGE));
  EXPECT_TRUE(fs::exists(dir_ / "rec" / "truth.vec"));
  EXPECT_TRUE(fs::exists(dir_ / "rec" / "trace.csv"));
}

TEST_F(CliTest, ModelThenPrune) {
  ASSERT_EQ(cli("model --widths 8,6,3 --seed 2 --out " + path("m.txt")).exit_code, 0);
  const auto r = cli("prune --model " + path("m.txt") + " --krow 4,3 --rounds 3 --batch 64 --out " + path("p.txt"));
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out.rfind("round,layer,recon_loss,train_loss,sparsity\n", 0), 0u);
  const TinyMlp pruned = load_model(dir_ / "p.txt");
  EXPECT_DOUBLE_EQ(sparsity(pruned.layer(0).weights), 0.5);
  EXPECT_DOUBLE_EQ(sparsity(pruned.layer(1).weights), 0.5);
}

TEST_F(CliTest, ProbeReportsConstants) {
  ASSERT_EQ(cli("gen --d 10 --n 30 --kstar 2 --out " + path("inst")).exit_code, 0);
  const auto r = cli("probe --data " + path("inst") + " --k 2 --samples 2 --directions 8");
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_NE(r.out.find("mu="), std::string::npos);
  EXPECT_NE(r.out.find("\nM=0\n"), std::string::npos);
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(cli("").exit_code, 2);
  EXPECT_EQ(cli("solve --k 3").exit_code, 2);
  EXPECT_EQ(cli("frobnicate").exit_code, 2);
  EXPECT_EQ(cli("solve --data " + path("missing") + " --k 3").exit_code, 2);
  ASSERT_EQ(cli("gen --d 16 --n 32 --kstar 2 --out " + path("inst")).exit_code, 0);
  EXPECT_EQ(cli("solve --data " + path("inst") + " --method newton --k 3").exit_code, 2);
  EXPECT_EQ(cli("solve --data " + path("inst") + " --k 17").exit_code, 2);
  // Numerical failure: undefined stochastic step size.
  EXPECT_EQ(cli("solve --data " + path("inst") + " --method stoch-iobs --k 3 --lambda 0 --iters 3").exit_code, 3);
  EXPECT_EQ(cli("--help").exit_code, 0);
}

}  // namespace
}  // namespace iobs
