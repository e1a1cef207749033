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

// Exercises the shared library through its C header only.

#include "rangemos/rangemos.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <unistd.h>

namespace fs = std::filesystem;

namespace
{
class CApi : public ::testing::Test
{
protected:
  void SetUp() override
  {
    dir_ = fs::temp_directory_path() /
           ("rangemos_capi_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    ASSERT_EQ(rmos_config_create(&cfg_), RMOS_OK);
    Set("projection.width", "512");
    Set("projection.height", "64");
    Set("sequence.dir", (dir_ / "seq").string());
    Set("output.dir", (dir_ / "out").string());
  }

  void TearDown() override
  {
    rmos_config_destroy(cfg_);
    fs::remove_all(dir_);
  }

  void Set(const char* key, const std::string& value)
  {
    ASSERT_EQ(rmos_config_set(cfg_, key, value.c_str()), RMOS_OK) << rmos_last_error();
  }

  void Synth(size_t scans) { ASSERT_EQ(rmos_synth(cfg_, nullptr, scans, 0.0, (dir_ / "seq").c_str()), RMOS_OK); }

  fs::path dir_;
  rmos_config* cfg_ = nullptr;
};
} // namespace

TEST_F(CApi, VersionAndNullDestroy)
{
  EXPECT_STREQ(rmos_version(), "1.0.0");
  rmos_config_destroy(nullptr);
  rmos_cloud_destroy(nullptr);
  rmos_image_destroy(nullptr);
  rmos_report_destroy(nullptr);
}

TEST_F(CApi, ConfigGetSetAndDump)
{
  char buf[16];
  size_t needed = 0;
  ASSERT_EQ(rmos_config_get(cfg_, "projection.width", buf, sizeof buf, &needed), RMOS_OK);
  EXPECT_STREQ(buf, "512");
  EXPECT_EQ(needed, 3u);

  EXPECT_EQ(rmos_config_set(cfg_, "knn.nothing", "1"), RMOS_ERR_CONTRACT);
  EXPECT_NE(std::string(rmos_last_error()).find("knn.nothing"), std::string::npos);
  EXPECT_EQ(rmos_config_get(cfg_, "bogus", buf, sizeof buf, &needed), RMOS_ERR_CONTRACT);

  ASSERT_EQ(rmos_config_dump(cfg_, nullptr, 0, &needed), RMOS_OK);
  std::string dump(needed + 1, '\0');
  ASSERT_EQ(rmos_config_dump(cfg_, dump.data(), dump.size(), &needed), RMOS_OK);
  dump.resize(needed);
  EXPECT_NE(dump.find("\"width\": 512"), std::string::npos) << dump;

  char tiny[4];
  ASSERT_EQ(rmos_config_dump(cfg_, tiny, sizeof tiny, &needed), RMOS_OK);
  EXPECT_EQ(std::string(tiny), dump.substr(0, 3));
}

TEST_F(CApi, NullArgumentsAreContractErrors)
{
  EXPECT_EQ(rmos_config_create(nullptr), RMOS_ERR_CONTRACT);
  rmos_cloud* cloud = nullptr;
  EXPECT_EQ(rmos_cloud_read(nullptr, &cloud), RMOS_ERR_CONTRACT);
  EXPECT_EQ(rmos_project(nullptr, cfg_, nullptr), RMOS_ERR_CONTRACT);
}

TEST_F(CApi, MissingFileIsIoError)
{
  rmos_cloud* cloud = nullptr;
  EXPECT_EQ(rmos_cloud_read((dir_ / "none.bin").c_str(), &cloud), RMOS_ERR_IO);
  EXPECT_EQ(cloud, nullptr);
}

TEST_F(CApi, MalformedScanIsFormatError)
{
  std::ofstream(dir_ / "bad.bin", std::ios::binary) << "0123456789";
  rmos_cloud* cloud = nullptr;
  EXPECT_EQ(rmos_cloud_read((dir_ / "bad.bin").c_str(), &cloud), RMOS_ERR_FORMAT);
}

TEST_F(CApi, ReadAndProject)
{
  const float pts[8] = {10.f, 0.f, 0.f, 0.25f, 0.f, 5.f, 0.f, 0.5f};
  std::ofstream(dir_ / "two.bin", std::ios::binary).write(reinterpret_cast<const char*>(pts), sizeof pts);
  rmos_cloud* cloud = nullptr;
  ASSERT_EQ(rmos_cloud_read((dir_ / "two.bin").c_str(), &cloud), RMOS_OK);
  ASSERT_EQ(rmos_cloud_size(cloud), 2u);
  float xyzi[4];
  ASSERT_EQ(rmos_cloud_point(cloud, 1, xyzi), RMOS_OK);
  EXPECT_EQ(xyzi[1], 5.f);
  EXPECT_EQ(rmos_cloud_point(cloud, 2, xyzi), RMOS_ERR_CONTRACT);

  rmos_image* img = nullptr;
  ASSERT_EQ(rmos_project(cloud, cfg_, &img), RMOS_OK);
  EXPECT_EQ(rmos_image_width(img), 512);
  EXPECT_EQ(rmos_image_height(img), 64);
  EXPECT_EQ(rmos_image_valid_count(img), 2u);
  float value = 0.f;
  int32_t source = -2;
  // (10, 0, 0): yaw 0 lands on the middle column, row 6 of 64.
  ASSERT_EQ(rmos_image_pixel(img, 256, 6, 0, &value, &source), RMOS_OK);
  EXPECT_FLOAT_EQ(value, 10.f);
  EXPECT_EQ(source, 0);
  ASSERT_EQ(rmos_image_pixel(img, 0, 0, 0, &value, &source), RMOS_OK);
  EXPECT_EQ(source, -1);
  EXPECT_EQ(rmos_image_pixel(img, 512, 0, 0, &value, nullptr), RMOS_ERR_CONTRACT);
  EXPECT_EQ(rmos_image_pixel(img, 0, 0, 5, &value, nullptr), RMOS_ERR_CONTRACT);
  ASSERT_EQ(rmos_image_write(img, (dir_ / "two.rimg").c_str()), RMOS_OK);
  EXPECT_EQ(fs::file_size(dir_ / "two.rimg"), 12u + 24u * 512u * 64u);
  rmos_image_destroy(img);
  rmos_cloud_destroy(cloud);
}

TEST_F(CApi, SegmentAndEvaluate)
{
  Synth(4);
  Set("pipeline.evaluate", "true");
  rmos_report* report = nullptr;
  ASSERT_EQ(rmos_segment(cfg_, &report), RMOS_OK) << rmos_last_error();
  EXPECT_EQ(rmos_report_scans(report), 4u);
  EXPECT_EQ(rmos_report_failed(report), 0u);
  EXPECT_EQ(rmos_report_aborted(report), 0);
  ASSERT_NE(rmos_report_has_evaluation(report), 0);
  uint64_t tp, fp, fn, tn;
  ASSERT_EQ(rmos_report_counts(report, &tp, &fp, &fn, &tn), RMOS_OK);
  EXPECT_GT(tp, 0u);
  double iou = -1.0;
  ASSERT_EQ(rmos_report_iou(report, &iou), 1);
  EXPECT_DOUBLE_EQ(iou, static_cast<double>(tp) / static_cast<double>(tp + fp + fn));
  EXPECT_NE(std::string(rmos_report_text(report, 1)).find("iou_moving="), std::string::npos);
  rmos_report_destroy(report);

  rmos_report* eval = nullptr;
  ASSERT_EQ(rmos_evaluate(cfg_, (dir_ / "out").c_str(), &eval), RMOS_OK) << rmos_last_error();
  uint64_t tp2, fp2, fn2, tn2;
  ASSERT_EQ(rmos_report_counts(eval, &tp2, &fp2, &fn2, &tn2), RMOS_OK);
  EXPECT_EQ(tp2, tp);
  EXPECT_EQ(fp2, fp);
  EXPECT_EQ(fn2, fn);
  EXPECT_EQ(tn2, tn);
  rmos_report_destroy(eval);
}

TEST_F(CApi, PerScanFailuresAreReported)
{
  Synth(3);
  std::ofstream(dir_ / "seq" / "velodyne" / "000001.bin", std::ios::binary | std::ios::trunc) << "xyz";
  rmos_report* report = nullptr;
  ASSERT_EQ(rmos_segment(cfg_, &report), RMOS_OK);
  ASSERT_EQ(rmos_report_failed(report), 2u);
  size_t index = 0;
  const char* message = nullptr;
  ASSERT_EQ(rmos_report_failure(report, 0, &index, &message), RMOS_OK);
  EXPECT_EQ(index, 1u);
  EXPECT_NE(std::string(message).find("000001.bin"), std::string::npos) << message;
  EXPECT_EQ(rmos_report_has_evaluation(report), 0);
  EXPECT_EQ(rmos_report_counts(report, nullptr, nullptr, nullptr, nullptr), RMOS_ERR_CONTRACT);
  rmos_report_destroy(report);
}

TEST_F(CApi, SequenceCommandsWriteFiles)
{
  Synth(2);
  const fs::path out = dir_ / "cmd";
  ASSERT_EQ(rmos_associate(cfg_, 1, out.c_str(), 0), RMOS_OK) << rmos_last_error();
  EXPECT_TRUE(fs::exists(out / "assoc_000001_000000.bin"));
  ASSERT_EQ(rmos_residual(cfg_, 1, out.c_str()), RMOS_OK);
  EXPECT_TRUE(fs::exists(out / "residual_000001_000000.bin"));
  ASSERT_EQ(rmos_render(cfg_, "labels", 1, out.c_str(), nullptr), RMOS_OK) << rmos_last_error();
  EXPECT_TRUE(fs::exists(out / "000001_labels.png"));
  EXPECT_EQ(rmos_render(cfg_, "heat", 1, out.c_str(), nullptr), RMOS_ERR_CONTRACT);
  ASSERT_EQ(rmos_project_file(cfg_, (dir_ / "seq" / "velodyne" / "000000.bin").c_str(), (out / "0.rimg").c_str()),
            RMOS_OK);
  EXPECT_TRUE(fs::exists(out / "0.rimg"));
}

TEST_F(CApi, MissingPosesFailsSegment)
{
  Synth(2);
  fs::remove(dir_ / "seq" / "poses.txt");
  rmos_report* report = nullptr;
  EXPECT_EQ(rmos_segment(cfg_, &report), RMOS_ERR_IO);
  EXPECT_EQ(report, nullptr);
}

TEST_F(CApi, ValidateRejectsEvenWindow)
{
  EXPECT_EQ(rmos_config_validate(cfg_), RMOS_OK);
  Set("knn.window", "4");
  EXPECT_EQ(rmos_config_validate(cfg_), RMOS_ERR_CONTRACT);
  EXPECT_NE(std::string(rmos_last_error()).find("window"), std::string::npos) << rmos_last_error();
}
