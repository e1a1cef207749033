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

#include "rangemos/projection.hpp"
#include "rangemos/synth.hpp"

#include "../support/test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include <Eigen/Geometry>

using namespace rangemos;
using rangemos::testing::Rng;

namespace
{
SceneConfig SmallScene(std::size_t scans)
{
  SceneConfig scene = SceneConfig::acceptance_scene(scans);
  scene.beams.rings = 16;
  scene.beams.azimuth_steps = 256;
  return scene;
}
} // namespace

TEST(Synth, GroundOnlySceneIsAllStatic)
{
  SceneConfig scene;
  scene.beams.rings = 16;
  scene.beams.azimuth_steps = 128;
  scene.trajectory = {SE3Pose::from_translation(0, 0, 1.73), SE3Pose::from_translation(1, 0, 1.73)};
  const auto scans = generate(scene);
  ASSERT_EQ(scans.size(), 2u);
  for (const SynthScan& s : scans)
  {
    EXPECT_GT(s.cloud.size(), 0u);
    EXPECT_EQ(s.labels.size(), s.cloud.size());
    for (std::size_t i = 0; i < s.cloud.size(); ++i)
    {
      EXPECT_EQ(s.moving[i], 0);
      EXPECT_EQ(s.labels[i], scene.ground_id);
      // Ground hits lie on z = 0 in the world frame, 1.73 m below the sensor.
      EXPECT_NEAR(s.cloud.points[i].z, -1.73f, 1e-3f);
    }
  }
}

TEST(Synth, BeamStraightAtMovingBoxHitsIt)
{
  SceneConfig scene;
  scene.ground_extent = 0.0;
  scene.trajectory = {SE3Pose::from_translation(0, 0, 0)};
  MovingBox mover;
  mover.box.center = {10, 0, 0};
  mover.box.size = {2, 2, 2};
  mover.box.semantic_id = 252;
  scene.moving_boxes.push_back(mover);
  const auto hit = cast_ray(scene, 0, Eigen::Vector3d::Zero(), Eigen::Vector3d::UnitX());
  ASSERT_TRUE(hit.has_value());
  EXPECT_NEAR(hit->distance, 9.0, 1e-12);
  EXPECT_EQ(hit->semantic_id, 252u);
  EXPECT_TRUE(hit->moving);
  EXPECT_FALSE(cast_ray(scene, 0, Eigen::Vector3d::Zero(), -Eigen::Vector3d::UnitX()).has_value());
}

TEST(Synth, MovingBoxAdvancesWithVelocity)
{
  MovingBox mover;
  mover.box.center = {1, 2, 3};
  mover.velocity = {0.5, -1, 0};
  const Box b = mover.at_scan(4);
  EXPECT_TRUE(b.center.isApprox(Eigen::Vector3d(3, -2, 3)));
  EXPECT_EQ(b.size, mover.box.size);
}

TEST(Synth, BeamsLandOnTheirOwnPixel)
{
  const BeamPattern beams;
  const ProjectionConfig cfg;
  for (int ring = 0; ring < beams.rings; ++ring)
    for (int step = 0; step < beams.azimuth_steps; step += 7)
    {
      const Eigen::Vector3d d = beam_direction(beams, ring, step);
      ASSERT_NEAR(d.norm(), 1.0, 1e-12);
      const auto p = project_point(10 * d.x(), 10 * d.y(), 10 * d.z(), cfg);
      ASSERT_TRUE(p && p->in_fov);
      EXPECT_EQ(p->v, ring);
      EXPECT_EQ(p->u, step);
    }
}

TEST(Synth, GenerationIsDeterministic)
{
  SceneConfig scene = SmallScene(3);
  scene.range_noise = 0.05;
  scene.seed = 17;
  const auto a = generate(scene);
  const auto b = generate(scene);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t s = 0; s < a.size(); ++s)
  {
    ASSERT_EQ(a[s].cloud.size(), b[s].cloud.size());
    for (std::size_t i = 0; i < a[s].cloud.size(); ++i)
    {
      EXPECT_EQ(a[s].cloud.points[i].x, b[s].cloud.points[i].x);
      EXPECT_EQ(a[s].cloud.points[i].y, b[s].cloud.points[i].y);
      EXPECT_EQ(a[s].cloud.points[i].z, b[s].cloud.points[i].z);
    }
    EXPECT_EQ(a[s].labels, b[s].labels);
  }
}

TEST(Synth, NoiseFreeScansMatchIndependentRayCaster)
{
  const SceneConfig scene = SmallScene(4);
  const auto scans = generate(scene);
  ASSERT_EQ(scans.size(), 4u);
  for (std::size_t s = 0; s < scans.size(); ++s)
  {
    const SE3Pose& pose = scene.trajectory[s];
    std::size_t expected_hits = 0;
    for (int ring = 0; ring < scene.beams.rings; ++ring)
      for (int step = 0; step < scene.beams.azimuth_steps; ++step)
      {
        const Eigen::Vector3d dir = pose.rotation() * beam_direction(scene.beams, ring, step);
        if (rangemos::testing::oracle_cast(scene, s, pose.translation(), dir))
          ++expected_hits;
      }
    EXPECT_EQ(scans[s].cloud.size(), expected_hits);

    std::size_t moving = 0;
    for (std::size_t i = 0; i < scans[s].cloud.size(); ++i)
    {
      const Point& p = scans[s].cloud.points[i];
      const Eigen::Vector3d local(p.x, p.y, p.z);
      const Eigen::Vector3d dir = pose.rotation() * local.normalized();
      const auto hit = rangemos::testing::oracle_cast(scene, s, pose.translation(), dir);
      ASSERT_TRUE(hit.has_value()) << "scan " << s << " point " << i;
      EXPECT_NEAR(hit->distance, local.norm(), 1e-4) << "scan " << s << " point " << i;
      EXPECT_EQ(hit->semantic_id, scans[s].labels[i]);
      EXPECT_EQ(hit->moving, scans[s].moving[i] != 0);
      moving += scans[s].moving[i];
    }
    EXPECT_GT(moving, 0u) << "scan " << s;
  }
}

TEST(Synth, NoiseOnlyMovesPointsAlongTheirRay)
{
  SceneConfig clean = SmallScene(2);
  SceneConfig noisy = clean;
  noisy.range_noise = 0.1;
  noisy.seed = 3;
  const auto a = generate(clean);
  const auto b = generate(noisy);
  ASSERT_EQ(a[0].cloud.size(), b[0].cloud.size());
  double max_offset = 0.0;
  for (std::size_t i = 0; i < a[0].cloud.size(); ++i)
  {
    const Eigen::Vector3d pa(a[0].cloud.points[i].x, a[0].cloud.points[i].y, a[0].cloud.points[i].z);
    const Eigen::Vector3d pb(b[0].cloud.points[i].x, b[0].cloud.points[i].y, b[0].cloud.points[i].z);
    EXPECT_LT(pa.normalized().cross(pb.normalized()).norm(), 1e-5);
    max_offset = std::max(max_offset, (pa - pb).norm());
  }
  EXPECT_GT(max_offset, 0.0);
}

TEST(Synth, WrittenSequenceReadsBack)
{
  const auto scans = generate(SmallScene(2));
  rangemos::testing::TempDir dir("synth_seq");
  write_sequence(scans, dir.path());
  const auto poses = read_poses(dir.path() / "poses.txt", read_calibration(dir.path() / "calib.txt", "Tr"));
  ASSERT_EQ(poses.size(), 2u);
  for (std::size_t s = 0; s < 2; ++s)
  {
    EXPECT_TRUE(poses[s].matrix().isApprox(scans[s].pose.matrix(), 1e-9));
    const PointCloud cloud = read_scan(dir.path() / "velodyne" / (s == 0 ? "000000.bin" : "000001.bin"));
    ASSERT_EQ(cloud.size(), scans[s].cloud.size());
    const LabelArray labels = read_labels(dir.path() / "labels" / (s == 0 ? "000000.label" : "000001.label"));
    EXPECT_EQ(labels, scans[s].labels);
  }
}

TEST(Synth, InvalidSceneIsRejected)
{
  SceneConfig scene;
  EXPECT_ANY_THROW(scene.validate());
  scene.trajectory = {SE3Pose{}};
  scene.max_range = -1.0;
  EXPECT_ANY_THROW(scene.validate());
}
