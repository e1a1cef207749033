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

#pragma once

#include "rangemos/dataset_io.hpp"
#include "rangemos/mos_baseline.hpp"
#include "rangemos/postprocess.hpp"
#include "rangemos/projection.hpp"
#include "rangemos/synth.hpp"

#include <cstdint>
#include <filesystem>
#include <string>

#include "json.hpp"

namespace rangemos
{

//! Where the pieces of a sequence live. Relative entries resolve against dir.
struct SequencePaths
{
  std::filesystem::path dir;
  std::string scans = "velodyne";
  std::string labels = "labels";
  //! Per-point semantic predictions. Empty: ground-truth labels with the
  //! motion state stripped.
  std::string semantics;
  std::string poses = "poses.txt";
  std::string calib = "calib.txt";
  std::string calib_key = "Tr";

  std::filesystem::path resolve(const std::string& entry) const;
};

struct PipelineConfig
{
  ProjectionConfig projection;
  ClassifierConfig classifier;
  KnnConfig knn;
  bool knn_enabled = true;
  MovingClassSpec classes = MovingClassSpec::semantic_kitti();
  SequencePaths sequence;
  std::filesystem::path out_dir = "predictions";
  std::uint32_t static_output_id = 9;
  std::uint32_t moving_output_id = 251;
  int n_prev = 1;
  bool evaluate = false;
  bool strict = false;
  std::uint64_t seed = 0;
  int threads = 0; //!< 0: hardware concurrency

  void validate() const;
};

nlohmann::json to_json(const PipelineConfig& cfg);
//! Overrides the fields present in `j`. Unknown keys raise ContractError.
void apply_json(PipelineConfig& cfg, const nlohmann::json& j);
//! Layers a JSON config file over `cfg`.
void load_config_file(PipelineConfig& cfg, const std::filesystem::path& path);
//! Sets one dotted key ("knn.k", "projection.fov_up_deg") from its text form.
void set_option(PipelineConfig& cfg, const std::string& key, const std::string& value);
//! Text form of one dotted key; strings come back unquoted.
std::string get_option(const PipelineConfig& cfg, const std::string& key);
std::string dump_config(const PipelineConfig& cfg);

nlohmann::json scene_to_json(const SceneConfig& scene);
SceneConfig scene_from_json(const nlohmann::json& j);
SceneConfig load_scene_file(const std::filesystem::path& path);

} // namespace rangemos
