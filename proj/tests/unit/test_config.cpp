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

#include "rangemos/config.hpp"
#include "rangemos/errors.hpp"

#include "../support/test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>

using namespace rangemos;

TEST(Config, DefaultsAreValid)
{
  const PipelineConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_EQ(cfg.projection.width, 2048);
  EXPECT_EQ(cfg.projection.height, 64);
  EXPECT_EQ(cfg.n_prev, 1);
  EXPECT_EQ(cfg.knn.k, 5);
  EXPECT_EQ(cfg.knn.window, 5);
  EXPECT_NE(cfg.static_output_id, cfg.moving_output_id);
}

TEST(Config, DumpAndApplyRoundTrip)
{
  PipelineConfig cfg;
  cfg.projection.width = 512;
  cfg.knn.k = 3;
  cfg.classifier.residual_threshold = 0.25;
  cfg.classifier.use_residual = true;
  cfg.sequence.dir = "/data/seq08";
  cfg.seed = 99;
  const std::string dumped = dump_config(cfg);

  PipelineConfig copy;
  apply_json(copy, nlohmann::json::parse(dumped));
  EXPECT_EQ(dump_config(copy), dumped);
  EXPECT_EQ(copy.projection.width, 512);
  EXPECT_EQ(copy.knn.k, 3);
  EXPECT_DOUBLE_EQ(copy.classifier.residual_threshold, 0.25);
  EXPECT_NEAR(copy.projection.fov_up, cfg.projection.fov_up, 1e-15);
}

TEST(Config, SetAndGetDottedKeys)
{
  PipelineConfig cfg;
  set_option(cfg, "knn.k", "7");
  set_option(cfg, "projection.fov_up_deg", "2.5");
  set_option(cfg, "classifier.use_residual", "true");
  set_option(cfg, "sequence.dir", "some/dir");
  set_option(cfg, "sequence.poses", "\"p.txt\"");
  EXPECT_EQ(cfg.knn.k, 7);
  EXPECT_NEAR(cfg.projection.fov_up, 2.5 * M_PI / 180.0, 1e-12);
  EXPECT_TRUE(cfg.classifier.use_residual);
  EXPECT_EQ(cfg.sequence.dir, "some/dir");
  EXPECT_EQ(get_option(cfg, "sequence.dir"), "some/dir");
  EXPECT_EQ(get_option(cfg, "sequence.poses"), "p.txt");
  EXPECT_EQ(get_option(cfg, "knn.k"), "7");
  EXPECT_EQ(get_option(cfg, "classifier.use_residual"), "true");
}

TEST(Config, UnknownKeysAreRejected)
{
  PipelineConfig cfg;
  EXPECT_THROW(set_option(cfg, "knn.kk", "3"), ContractError);
  EXPECT_THROW(set_option(cfg, "nope", "3"), ContractError);
  EXPECT_THROW(get_option(cfg, "knn.missing"), ContractError);
  EXPECT_THROW(apply_json(cfg, nlohmann::json::parse(R"({"knn": {"q": 1}})")), ContractError);
}

TEST(Config, WrongTypeIsRejected)
{
  PipelineConfig cfg;
  EXPECT_ANY_THROW(set_option(cfg, "knn.k", "\"five\""));
}

TEST(Config, FileLayersOverCurrentValues)
{
  rangemos::testing::TempDir dir("config_file");
  const auto path = dir.path() / "cfg.json";
  std::ofstream(path) << R"({"knn": {"k": 9}, "pipeline": {"n_prev": 2}})";
  PipelineConfig cfg;
  cfg.projection.width = 1024;
  load_config_file(cfg, path);
  EXPECT_EQ(cfg.knn.k, 9);
  EXPECT_EQ(cfg.n_prev, 2);
  EXPECT_EQ(cfg.projection.width, 1024);
}

TEST(Config, MalformedFileIsFormatError)
{
  rangemos::testing::TempDir dir("config_bad");
  const auto path = dir.path() / "cfg.json";
  std::ofstream(path) << "{ knn: ";
  PipelineConfig cfg;
  EXPECT_THROW(load_config_file(cfg, path), FormatError);
  EXPECT_THROW(load_config_file(cfg, dir.path() / "missing.json"), IoError);
}

TEST(Config, InvalidValuesFailValidation)
{
  PipelineConfig cfg;
  cfg.n_prev = 0;
  EXPECT_THROW(cfg.validate(), ContractError);
  cfg = PipelineConfig{};
  cfg.static_output_id = cfg.moving_output_id;
  EXPECT_THROW(cfg.validate(), ContractError);
}

TEST(SceneJson, RoundTripsTheAcceptanceScene)
{
  const SceneConfig scene = SceneConfig::acceptance_scene(4);
  const nlohmann::json j = scene_to_json(scene);
  const SceneConfig back = scene_from_json(j);
  EXPECT_EQ(scene_to_json(back), j);
  ASSERT_EQ(back.trajectory.size(), 4u);
  EXPECT_TRUE(back.trajectory[3].matrix().isApprox(scene.trajectory[3].matrix(), 1e-12));
  ASSERT_EQ(back.moving_boxes.size(), scene.moving_boxes.size());
  EXPECT_EQ(back.moving_boxes[0].velocity, scene.moving_boxes[0].velocity);
}

TEST(SceneJson, UnknownKeyIsRejected)
{
  nlohmann::json j = scene_to_json(SceneConfig::acceptance_scene(2));
  j["colour"] = "red";
  EXPECT_THROW(scene_from_json(j), ContractError);
}
