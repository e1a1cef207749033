//==============================================================================
// Copyright 2026 The rangemos Authors
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
//==============================================================================

// Runs the command-line tool end to end.

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;

namespace
{
struct Result
{
  int status = -1;
  std::string out;
  std::string err;
};

std::string Slurp(const fs::path& p)
{
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class Cli : public ::testing::Test
{
protected:
  void SetUp() override
  {
    dir_ = fs::temp_directory_path() /
           ("rangemos_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  Result Run(const std::string& args)
  {
    const fs::path out = dir_ / "stdout.txt";
    const fs::path err = dir_ / "stderr.txt";
    const std::string cmd =
      std::string("\"") + RANGEMOS_CLI + "\" " + args + " >\"" + out.string() + "\" 2>\"" + err.string() + "\"";
    const int raw = std::system(cmd.c_str());
    Result r;
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.out = Slurp(out);
    r.err = Slurp(err);
    return r;
  }

  std::string Seq() const { return "--seq-dir \"" + (dir_ / "seq").string() + "\""; }
  std::string Out(const char* sub) const { return "--out \"" + (dir_ / sub).string() + "\""; }

  void Synth(int scans)
  {
    const Result r = Run("synth --scans " + std::to_string(scans) + " " + Out("seq"));
    ASSERT_EQ(r.status, 0) << r.err;
  }

  fs::path dir_;
};
} // namespace

TEST_F(Cli, HelpListsCommands)
{
  const Result r = Run("--help");
  EXPECT_EQ(r.status, 0);
  for (const char* cmd : {"project", "associate", "residual", "segment", "evaluate", "render", "synth", "config"})
    EXPECT_NE(r.out.find(cmd), std::string::npos) << cmd;
}

TEST_F(Cli, ConfigDumpReflectsFlags)
{
  const Result r = Run("config dump --knn-k 3 --tau 0.4 --use-residual --width 1024 --set knn.window=7");
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.out.find("\"k\": 3"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("\"window\": 7"), std::string::npos);
  EXPECT_NE(r.out.find("\"tau\": 0.4"), std::string::npos);
  EXPECT_NE(r.out.find("\"use_residual\": true"), std::string::npos);
  EXPECT_NE(r.out.find("\"width\": 1024"), std::string::npos);
}

TEST_F(Cli, ConfigFileIsOverriddenByFlags)
{
  std::ofstream(dir_ / "c.json") << R"({"knn": {"k": 9, "window": 3}})";
  const Result r = Run("config dump --config \"" + (dir_ / "c.json").string() + "\" --knn-k 1");
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.out.find("\"k\": 1"), std::string::npos);
  EXPECT_NE(r.out.find("\"window\": 3"), std::string::npos);
}

TEST_F(Cli, InvalidConfigFails)
{
  const Result r = Run("config dump --knn-window 4");
  EXPECT_NE(r.status, 0);
  EXPECT_NE(r.err.find("error"), std::string::npos);
}

TEST_F(Cli, SegmentWithEvaluation)
{
  Synth(4);
  const Result r = Run("segment " + Seq() + " " + Out("pred") + " --evaluate --width 2048 --height 64");
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.out.find("iou_moving"), std::string::npos) << r.out;
  for (const char* name : {"000000.label", "000001.label", "000002.label", "000003.label", "evaluation.txt"})
    EXPECT_TRUE(fs::exists(dir_ / "pred" / name)) << name;
  EXPECT_NE(Slurp(dir_ / "pred" / "evaluation.kv").find("iou_moving="), std::string::npos);

  const Result eval = Run("evaluate " + Seq() + " --pred \"" + (dir_ / "pred").string() + "\" --kv");
  ASSERT_EQ(eval.status, 0) << eval.err;
  EXPECT_EQ(eval.out, Slurp(dir_ / "pred" / "evaluation.kv"));
}

TEST_F(Cli, MissingPosesIsAnError)
{
  Synth(2);
  const Result r = Run("segment " + Seq() + " --poses nowhere.txt " + Out("pred"));
  EXPECT_NE(r.status, 0);
  EXPECT_NE(r.err.find("nowhere.txt"), std::string::npos) << r.err;
}

TEST_F(Cli, StrictModeExitsNonZeroOnBadScan)
{
  Synth(3);
  std::ofstream(dir_ / "seq" / "velodyne" / "000001.bin", std::ios::binary | std::ios::trunc) << "abc";
  const Result lenient = Run("segment " + Seq() + " " + Out("a"));
  EXPECT_EQ(lenient.status, 0) << lenient.err;
  EXPECT_NE(lenient.err.find("000001"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir_ / "a" / "000000.label"));
  const Result strict = Run("segment " + Seq() + " " + Out("b") + " --strict");
  EXPECT_NE(strict.status, 0);
}

TEST_F(Cli, ProjectAssociateResidualRender)
{
  Synth(2);
  const std::string scan = "\"" + (dir_ / "seq" / "velodyne" / "000001.bin").string() + "\"";
  Result r = Run("project " + scan + " " + Out("p"));
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(fs::file_size(dir_ / "p" / "000001.rimg"), 12u + 24u * 2048u * 64u);

  r = Run("associate --index 1 " + Seq() + " " + Out("a"));
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir_ / "a" / "assoc_000001_000000.bin"));

  r = Run("residual --index 1 " + Seq() + " " + Out("r"));
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(fs::file_size(dir_ / "r" / "residual_000001_000000.bin"), 4u * 2048u * 64u);

  for (const char* mode : {"range", "residual", "labels", "association"})
  {
    r = Run(std::string("render --mode ") + mode + " --index 1 " + Seq() + " " + Out("img"));
    EXPECT_EQ(r.status, 0) << mode << ": " << r.err;
  }
  EXPECT_TRUE(fs::exists(dir_ / "img" / "000001_range.png"));
  EXPECT_TRUE(fs::exists(dir_ / "img" / "000001_normalization.txt"));

  r = Run("render --mode depth --index 1 " + Seq() + " " + Out("img"));
  EXPECT_NE(r.status, 0);
}

TEST_F(Cli, SynthIsSeeded)
{
  ASSERT_EQ(Run("synth --scans 2 --noise 0.05 --seed 4 " + Out("s1")).status, 0);
  ASSERT_EQ(Run("synth --scans 2 --noise 0.05 --seed 4 " + Out("s2")).status, 0);
  ASSERT_EQ(Run("synth --scans 2 --noise 0.05 --seed 5 " + Out("s3")).status, 0);
  const auto a = Slurp(dir_ / "s1" / "velodyne" / "000001.bin");
  EXPECT_EQ(a, Slurp(dir_ / "s2" / "velodyne" / "000001.bin"));
  EXPECT_NE(a, Slurp(dir_ / "s3" / "velodyne" / "000001.bin"));
}
