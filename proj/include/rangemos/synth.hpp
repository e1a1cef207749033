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

// Ray-cast LiDAR sequences over a ground plane and axis-aligned boxes, with
// exact poses and exact moving/static ground truth.

#pragma once

#include "rangemos/dataset_io.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace rangemos
{

struct Box
{
  Eigen::Vector3d center = Eigen::Vector3d::Zero(); // [m] world frame
  Eigen::Vector3d size = Eigen::Vector3d::Ones();   // [m] full extents along x, y, z
  std::uint32_t semantic_id = 50;
  float intensity = 0.5f;
};

struct MovingBox
{
  Box box;                                            // pose at scan 0
  Eigen::Vector3d velocity = Eigen::Vector3d::Zero(); // [m / scan]
  Box at_scan(std::size_t scan) const;
};

struct BeamPattern
{
  int rings = 64;
  int azimuth_steps = 2048;
  double fov_up = 0.0523598775598298873;    // 3 deg
  double fov_down = -0.436332312998582394;  // -25 deg
};

struct SceneConfig
{
  double ground_extent = 60.0; //!< ground covers |x|, |y| <= extent [m]
  std::uint32_t ground_id = 40;
  float ground_intensity = 0.3f;
  std::vector<Box> static_boxes;
  std::vector<MovingBox> moving_boxes;
  //! Sensor-to-world pose per scan.
  std::vector<SE3Pose> trajectory;
  BeamPattern beams;
  double max_range = 120.0;  // [m]
  double range_noise = 0.0;  // [m] Gaussian sigma along the ray
  std::uint64_t seed = 0;

  void validate() const;

  //! Flat ground, a wall, a parked car and one box crossing the sensor's
  //! path, observed over `scans` scans while the sensor drives forward.
  static SceneConfig acceptance_scene(std::size_t scans = 10);
};

struct SynthScan
{
  PointCloud cloud;          //!< sensor frame
  LabelArray labels;         //!< semantic ids of the hit surfaces
  std::vector<std::uint8_t> moving;
  SE3Pose pose;              //!< sensor to world
};

//! Beam direction (unit, sensor frame) of ring r and azimuth step c. Ring 0 is
//! the top beam; step 0 looks toward +pi yaw.
Eigen::Vector3d beam_direction(const BeamPattern& beams, int ring, int step);

struct RayHit
{
  double distance = 0.0;
  std::uint32_t semantic_id = 0;
  float intensity = 0.f;
  bool moving = false;
};

//! Nearest surface of scan `scan` hit by the world-frame ray, if any within max_range.
std::optional<RayHit> cast_ray(const SceneConfig& cfg, std::size_t scan, const Eigen::Vector3d& origin,
                               const Eigen::Vector3d& direction);

std::vector<SynthScan> generate(const SceneConfig& cfg);

//! Writes velodyne/NNNNNN.bin, labels/NNNNNN.label, poses.txt and an identity calib.txt.
void write_sequence(std::span<const SynthScan> scans, const std::filesystem::path& dir);

} // namespace rangemos
