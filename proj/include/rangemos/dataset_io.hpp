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

// Sequence file formats: KITTI-style velodyne scans, SemanticKITTI label
// files, row-major 3x4 pose files and key/value calibration files.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace rangemos
{

struct Point
{
  float x = 0.f;
  float y = 0.f;
  float z = 0.f;
  float intensity = 0.f;

  bool operator==(const Point&) const = default;
};

struct PointCloud
{
  std::vector<Point> points;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  bool operator==(const PointCloud&) const = default;
};

//! Low 16 bits: semantic class id. High 16 bits: instance id.
using LabelArray = std::vector<std::uint32_t>;

inline std::uint32_t semantic_id(std::uint32_t label) { return label & 0xFFFFu; }
inline std::uint32_t instance_id(std::uint32_t label) { return label >> 16; }

//! Rigid transform. The rotation is kept orthonormal with det +1.
class SE3Pose
{
public:
  SE3Pose();

  //! Throws ContractError when the rotation is not a proper rotation within 1e-9.
  SE3Pose(const Eigen::Matrix3d& rotation, const Eigen::Vector3d& translation);

  //! Builds a pose from a 3x4 [R|t] block, projecting R onto SO(3) when its
  //! orthonormality residual exceeds 1e-9.
  static SE3Pose from_matrix(const Eigen::Matrix<double, 3, 4>& rt);
  static SE3Pose from_translation(double x, double y, double z);
  //! Rotation about the z axis (radians) followed by a translation.
  static SE3Pose from_yaw(double yaw, const Eigen::Vector3d& translation = Eigen::Vector3d::Zero());

  const Eigen::Matrix3d& rotation() const { return rotation_; }
  const Eigen::Vector3d& translation() const { return translation_; }
  Eigen::Matrix4d matrix() const;

  SE3Pose inverse() const;
  SE3Pose operator*(const SE3Pose& rhs) const;
  Eigen::Vector3d operator*(const Eigen::Vector3d& p) const { return rotation_ * p + translation_; }

  bool approx_equal(const SE3Pose& other, double tol) const;

private:
  Eigen::Matrix3d rotation_;
  Eigen::Vector3d translation_;
};

//! max |R^T R - I| over all entries, together with |det R - 1|.
double orthonormality_residual(const Eigen::Matrix3d& r);
//! Nearest rotation matrix in the Frobenius sense.
Eigen::Matrix3d nearest_rotation(const Eigen::Matrix3d& m);

//! Transform carrying coordinates of the scan at pose_i into the frame of the
//! scan at pose_0: pose_0^-1 * pose_i.
SE3Pose relative_pose(const SE3Pose& pose_i, const SE3Pose& pose_0);

// Binary scan files: little-endian float32 quadruples (x, y, z, intensity).
PointCloud read_scan(const std::filesystem::path& path);
void write_scan(const PointCloud& cloud, const std::filesystem::path& path);

// Label files: one little-endian uint32 per point.
LabelArray read_labels(const std::filesystem::path& path);
void write_labels(std::span<const std::uint32_t> labels, const std::filesystem::path& path);

//! Throws FormatError when a label array does not pair with its scan.
void check_pairing(const PointCloud& cloud, std::span<const std::uint32_t> labels, const std::string& context);

//! Reads the 12-value sensor-to-camera entry named `key` from a calibration file.
SE3Pose read_calibration(const std::filesystem::path& path, const std::string& key = "Tr");
void write_calibration(const SE3Pose& sensor_to_camera, const std::filesystem::path& path,
                       const std::string& key = "Tr");

//! Parses a camera-frame pose file and converts each line P to the sensor frame
//! as C^-1 * P * C, where C is the sensor-to-camera calibration.
std::vector<SE3Pose> read_poses(const std::filesystem::path& poses_path, const SE3Pose& sensor_to_camera);
std::vector<SE3Pose> read_poses(const std::filesystem::path& poses_path,
                                const std::filesystem::path& calib_path, const std::string& key = "Tr");
//! Writes sensor-frame poses in the camera frame, C * T * C^-1.
void write_poses(std::span<const SE3Pose> poses, const std::filesystem::path& path,
                 const SE3Pose& sensor_to_camera = SE3Pose());

//! Moving / movable class sets. Defaults follow the SemanticKITTI ontology.
struct MovingClassSpec
{
  std::set<std::uint32_t> moving_class_ids;
  //! Movable classes, parked or moving.
  std::set<std::uint32_t> movable_class_ids;
  //! Maps a moving class to the class of the same object at rest (252 -> 10).
  std::map<std::uint32_t, std::uint32_t> static_counterpart;

  static MovingClassSpec semantic_kitti();

  void validate() const;
  bool is_moving(std::uint32_t semantic) const { return moving_class_ids.count(semantic) != 0; }
  bool is_movable(std::uint32_t semantic) const { return movable_class_ids.count(semantic) != 0; }
  //! Semantic class with the motion state removed; identity for non-moving ids.
  std::uint32_t strip_motion(std::uint32_t semantic) const;
};

//! Per point: 1 if the semantic id is a moving class, else 0. Instance bits ignored.
std::vector<std::uint8_t> to_mos_labels(std::span<const std::uint32_t> labels, const MovingClassSpec& spec);

} // namespace rangemos
