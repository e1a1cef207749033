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

#include "rangemos/synth.hpp"
#include "rangemos/errors.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>

namespace rangemos
{

namespace
{
// Slab test. Returns the first positive crossing of the box surface.
std::optional<double> IntersectBox(const Box& box, const Eigen::Vector3d& o, const Eigen::Vector3d& d)
{
  const Eigen::Vector3d lo = box.center - 0.5 * box.size;
  const Eigen::Vector3d hi = box.center + 0.5 * box.size;
  double t_near = -std::numeric_limits<double>::infinity();
  double t_far = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 3; ++a)
  {
    if (d[a] == 0.0)
    {
      if (o[a] < lo[a] || o[a] > hi[a])
        return std::nullopt;
      continue;
    }
    double t0 = (lo[a] - o[a]) / d[a];
    double t1 = (hi[a] - o[a]) / d[a];
    if (t0 > t1)
      std::swap(t0, t1);
    t_near = std::max(t_near, t0);
    t_far = std::min(t_far, t1);
  }
  if (t_near > t_far || t_far <= 0.0)
    return std::nullopt;
  return t_near > 0.0 ? t_near : t_far;
}

std::optional<double> IntersectGround(double extent, const Eigen::Vector3d& o, const Eigen::Vector3d& d)
{
  if (!(d.z() < 0.0) || o.z() <= 0.0)
    return std::nullopt;
  const double t = -o.z() / d.z();
  const Eigen::Vector3d p = o + t * d;
  if (std::abs(p.x()) > extent || std::abs(p.y()) > extent)
    return std::nullopt;
  return t;
}

std::string Numbered(std::size_t i, const char* ext)
{
  char name[32];
  std::snprintf(name, sizeof(name), "%06zu%s", i, ext);
  return name;
}
} // namespace

Box MovingBox::at_scan(std::size_t scan) const
{
  Box b = box;
  b.center += static_cast<double>(scan) * velocity;
  return b;
}

void SceneConfig::validate() const
{
  if (trajectory.size() < 2)
    throw ContractError("SceneConfig: need at least two scans");
  if (!(ground_extent > 0.0) || !(max_range > 0.0) || !(range_noise >= 0.0))
    throw ContractError("SceneConfig: ground extent and max range must be > 0, noise >= 0");
  if (beams.rings < 1 || beams.azimuth_steps < 1 || !(beams.fov_up > beams.fov_down))
    throw ContractError("SceneConfig: invalid beam pattern");
  auto check = [](const Box& b)
  {
    if (!(b.size.array() > 0.0).all() || !b.center.allFinite())
      throw ContractError("SceneConfig: box sizes must be > 0");
  };
  for (const Box& b : static_boxes)
    check(b);
  for (const MovingBox& m : moving_boxes)
    check(m.box);
}

SceneConfig SceneConfig::acceptance_scene(std::size_t scans)
{
  SceneConfig cfg;
  cfg.ground_extent = 60.0;
  // Wall behind the crossing lane so every beam through the moving box has a
  // static return in the neighbouring scans.
  cfg.static_boxes.push_back({{40.0, 0.0, 3.0}, {1.0, 60.0, 6.0}, 50, 0.6f});
  // Parked car: movable but static, on the far side of the lane from the mover.
  cfg.static_boxes.push_back({{14.0, 8.0, 0.75}, {4.5, 1.9, 1.5}, 10, 0.8f});
  // Crossing box; it moves further than its own width each scan.
  cfg.moving_boxes.push_back({{{30.0, -12.0, 0.8}, {2.0, 2.0, 1.6}, 252, 0.8f}, {0.0, 3.0, 0.0}});
  for (std::size_t k = 0; k < scans; ++k)
  {
    const double s = static_cast<double>(k);
    cfg.trajectory.push_back(SE3Pose::from_yaw(0.005 * s, {1.0 * s, 0.0, 1.73}));
  }
  return cfg;
}

Eigen::Vector3d beam_direction(const BeamPattern& beams, int ring, int step)
{
  const double pitch = beams.fov_up - (ring + 0.5) * (beams.fov_up - beams.fov_down) / beams.rings;
  const double yaw = std::numbers::pi * (1.0 - 2.0 * (step + 0.5) / beams.azimuth_steps);
  return {std::cos(pitch) * std::cos(yaw), std::cos(pitch) * std::sin(yaw), std::sin(pitch)};
}

std::optional<RayHit> cast_ray(const SceneConfig& cfg, std::size_t scan, const Eigen::Vector3d& origin,
                               const Eigen::Vector3d& direction)
{
  std::optional<RayHit> best;
  auto consider = [&](std::optional<double> t, std::uint32_t id, float intensity, bool moving)
  {
    if (t && *t <= cfg.max_range && (!best || *t < best->distance))
      best = RayHit{*t, id, intensity, moving};
  };
  consider(IntersectGround(cfg.ground_extent, origin, direction), cfg.ground_id, cfg.ground_intensity, false);
  for (const Box& b : cfg.static_boxes)
    consider(IntersectBox(b, origin, direction), b.semantic_id, b.intensity, false);
  for (const MovingBox& m : cfg.moving_boxes)
  {
    const Box b = m.at_scan(scan);
    consider(IntersectBox(b, origin, direction), b.semantic_id, b.intensity, true);
  }
  return best;
}

std::vector<SynthScan> generate(const SceneConfig& cfg)
{
  cfg.validate();
  std::vector<SynthScan> scans;
  scans.reserve(cfg.trajectory.size());
  for (std::size_t k = 0; k < cfg.trajectory.size(); ++k)
  {
    const SE3Pose& pose = cfg.trajectory[k];
    std::mt19937_64 rng(cfg.seed + 0x9E3779B97F4A7C15ull * (k + 1));
    std::normal_distribution<double> noise(0.0, cfg.range_noise > 0.0 ? cfg.range_noise : 1.0);

    SynthScan scan;
    scan.pose = pose;
    for (int r = 0; r < cfg.beams.rings; ++r)
    {
      for (int c = 0; c < cfg.beams.azimuth_steps; ++c)
      {
        const Eigen::Vector3d dir_sensor = beam_direction(cfg.beams, r, c);
        const auto hit = cast_ray(cfg, k, pose.translation(), pose.rotation() * dir_sensor);
        if (!hit)
          continue;
        double distance = hit->distance;
        if (cfg.range_noise > 0.0)
          distance = std::max(1e-3, distance + noise(rng));
        const Eigen::Vector3d p = distance * dir_sensor;
        scan.cloud.points.push_back(
          {static_cast<float>(p.x()), static_cast<float>(p.y()), static_cast<float>(p.z()), hit->intensity});
        scan.labels.push_back(hit->semantic_id);
        scan.moving.push_back(hit->moving ? 1 : 0);
      }
    }
    scans.push_back(std::move(scan));
  }
  return scans;
}

void write_sequence(std::span<const SynthScan> scans, const std::filesystem::path& dir)
{
  std::error_code ec;
  std::filesystem::create_directories(dir / "velodyne", ec);
  std::filesystem::create_directories(dir / "labels", ec);
  if (ec)
    throw IoError("cannot create " + dir.string() + ": " + ec.message());
  std::vector<SE3Pose> poses;
  for (std::size_t i = 0; i < scans.size(); ++i)
  {
    write_scan(scans[i].cloud, dir / "velodyne" / Numbered(i, ".bin"));
    write_labels(scans[i].labels, dir / "labels" / Numbered(i, ".label"));
    poses.push_back(scans[i].pose);
  }
  write_poses(poses, dir / "poses.txt");
  write_calibration(SE3Pose(), dir / "calib.txt");
}

} // namespace rangemos
