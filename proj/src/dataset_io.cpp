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

#include "rangemos/dataset_io.hpp"
#include "rangemos/errors.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <Eigen/Geometry>
#include <Eigen/SVD>

namespace rangemos
{

namespace
{
constexpr double kOrthoTolerance = 1e-9;

std::vector<char> ReadAll(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open " + path.string());
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad())
    throw IoError("read failed: " + path.string());
  return bytes;
}

void WriteAll(const std::filesystem::path& path, const std::vector<char>& bytes)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw IoError("cannot open for writing " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out)
    throw IoError("write failed: " + path.string());
}

// Little-endian 32-bit load/store independent of host byte order.
std::uint32_t LoadLE32(const char* p)
{
  const auto* b = reinterpret_cast<const unsigned char*>(p);
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void StoreLE32(char* p, std::uint32_t value)
{
  for (int i = 0; i < 4; ++i)
    p[i] = static_cast<char>((value >> (8 * i)) & 0xFFu);
}

float LoadFloatLE(const char* p) { return std::bit_cast<float>(LoadLE32(p)); }

// Parses whitespace-separated doubles; false if a token is not a full finite number.
bool ParseDoubles(const std::string& text, std::vector<double>& values)
{
  values.clear();
  std::istringstream tokens(text);
  std::string token;
  while (tokens >> token)
  {
    char* end = nullptr;
    const double value = std::strtod(token.c_str(), &end);
    if (end != token.c_str() + token.size() || !std::isfinite(value))
      return false;
    values.push_back(value);
  }
  return true;
}

Eigen::Matrix4d ToMatrix4(const std::vector<double>& v)
{
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 4; ++c)
      m(r, c) = v[static_cast<std::size_t>(4 * r + c)];
  return m;
}

SE3Pose FromMatrix4(const Eigen::Matrix4d& m)
{
  return SE3Pose::from_matrix(m.topRows<3>());
}

void WriteMatrixLine(std::ostream& out, const Eigen::Matrix4d& m)
{
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 4; ++c)
      out << (r == 0 && c == 0 ? "" : " ") << m(r, c);
  out << '\n';
}
} // namespace

//-----------------------------------------------------------------------------
SE3Pose::SE3Pose() : rotation_(Eigen::Matrix3d::Identity()), translation_(Eigen::Vector3d::Zero()) {}

SE3Pose::SE3Pose(const Eigen::Matrix3d& rotation, const Eigen::Vector3d& translation)
  : rotation_(rotation), translation_(translation)
{
  if (!rotation.allFinite() || !translation.allFinite())
    throw ContractError("SE3Pose: non-finite entries");
  if (orthonormality_residual(rotation) > kOrthoTolerance)
    throw ContractError("SE3Pose: rotation is not orthonormal with det +1");
}

SE3Pose SE3Pose::from_matrix(const Eigen::Matrix<double, 3, 4>& rt)
{
  Eigen::Matrix3d r = rt.leftCols<3>();
  if (!r.allFinite() || !rt.col(3).allFinite())
    throw ContractError("SE3Pose: non-finite entries");
  if (orthonormality_residual(r) > kOrthoTolerance)
    r = nearest_rotation(r);
  return SE3Pose(r, rt.col(3));
}

SE3Pose SE3Pose::from_translation(double x, double y, double z)
{
  return SE3Pose(Eigen::Matrix3d::Identity(), Eigen::Vector3d(x, y, z));
}

SE3Pose SE3Pose::from_yaw(double yaw, const Eigen::Vector3d& translation)
{
  Eigen::Matrix3d r = Eigen::AngleAxisd(yaw, Eigen::Vector3d::UnitZ()).toRotationMatrix();
  return SE3Pose(nearest_rotation(r), translation);
}

Eigen::Matrix4d SE3Pose::matrix() const
{
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.topLeftCorner<3, 3>() = rotation_;
  m.topRightCorner<3, 1>() = translation_;
  return m;
}

SE3Pose SE3Pose::inverse() const
{
  SE3Pose inv;
  inv.rotation_ = rotation_.transpose();
  inv.translation_ = -(inv.rotation_ * translation_);
  return inv;
}

SE3Pose SE3Pose::operator*(const SE3Pose& rhs) const
{
  SE3Pose out;
  out.rotation_ = rotation_ * rhs.rotation_;
  out.translation_ = rotation_ * rhs.translation_ + translation_;
  // Long products drift; keep the invariant.
  if (orthonormality_residual(out.rotation_) > kOrthoTolerance)
    out.rotation_ = nearest_rotation(out.rotation_);
  return out;
}

bool SE3Pose::approx_equal(const SE3Pose& other, double tol) const
{
  return (rotation_ - other.rotation_).cwiseAbs().maxCoeff() <= tol &&
         (translation_ - other.translation_).cwiseAbs().maxCoeff() <= tol;
}

//-----------------------------------------------------------------------------
double orthonormality_residual(const Eigen::Matrix3d& r)
{
  const double ortho = (r.transpose() * r - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
  return std::max(ortho, std::abs(r.determinant() - 1.0));
}

Eigen::Matrix3d nearest_rotation(const Eigen::Matrix3d& m)
{
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d d = Eigen::Matrix3d::Identity();
  d(2, 2) = (svd.matrixU() * svd.matrixV().transpose()).determinant() < 0 ? -1.0 : 1.0;
  return svd.matrixU() * d * svd.matrixV().transpose();
}

SE3Pose relative_pose(const SE3Pose& pose_i, const SE3Pose& pose_0)
{
  return pose_0.inverse() * pose_i;
}

//-----------------------------------------------------------------------------
PointCloud read_scan(const std::filesystem::path& path)
{
  const std::vector<char> bytes = ReadAll(path);
  if (bytes.size() % 16 != 0)
  {
    throw FormatError(path.string() + ": truncated scan, " + std::to_string(bytes.size() % 16) +
                      " trailing bytes at offset " + std::to_string(bytes.size() - bytes.size() % 16));
  }
  PointCloud cloud;
  cloud.points.resize(bytes.size() / 16);
  for (std::size_t i = 0; i < cloud.points.size(); ++i)
  {
    const char* p = bytes.data() + 16 * i;
    Point& pt = cloud.points[i];
    pt = {LoadFloatLE(p), LoadFloatLE(p + 4), LoadFloatLE(p + 8), LoadFloatLE(p + 12)};
    if (!std::isfinite(pt.x) || !std::isfinite(pt.y) || !std::isfinite(pt.z) || !std::isfinite(pt.intensity))
      throw FormatError(path.string() + ": non-finite value at offset " + std::to_string(16 * i));
  }
  return cloud;
}

void write_scan(const PointCloud& cloud, const std::filesystem::path& path)
{
  std::vector<char> bytes(cloud.size() * 16);
  for (std::size_t i = 0; i < cloud.size(); ++i)
  {
    const Point& pt = cloud.points[i];
    char* p = bytes.data() + 16 * i;
    StoreLE32(p, std::bit_cast<std::uint32_t>(pt.x));
    StoreLE32(p + 4, std::bit_cast<std::uint32_t>(pt.y));
    StoreLE32(p + 8, std::bit_cast<std::uint32_t>(pt.z));
    StoreLE32(p + 12, std::bit_cast<std::uint32_t>(pt.intensity));
  }
  WriteAll(path, bytes);
}

LabelArray read_labels(const std::filesystem::path& path)
{
  const std::vector<char> bytes = ReadAll(path);
  if (bytes.size() % 4 != 0)
  {
    throw FormatError(path.string() + ": truncated label file, trailing bytes at offset " +
                      std::to_string(bytes.size() - bytes.size() % 4));
  }
  LabelArray labels(bytes.size() / 4);
  for (std::size_t i = 0; i < labels.size(); ++i)
    labels[i] = LoadLE32(bytes.data() + 4 * i);
  return labels;
}

void write_labels(std::span<const std::uint32_t> labels, const std::filesystem::path& path)
{
  std::vector<char> bytes(labels.size() * 4);
  for (std::size_t i = 0; i < labels.size(); ++i)
    StoreLE32(bytes.data() + 4 * i, labels[i]);
  WriteAll(path, bytes);
}

void check_pairing(const PointCloud& cloud, std::span<const std::uint32_t> labels, const std::string& context)
{
  if (cloud.size() != labels.size())
  {
    throw FormatError(context + ": " + std::to_string(labels.size()) + " labels for " +
                      std::to_string(cloud.size()) + " points");
  }
}

//-----------------------------------------------------------------------------
SE3Pose read_calibration(const std::filesystem::path& path, const std::string& key)
{
  std::ifstream in(path);
  if (!in)
    throw IoError("cannot open " + path.string());
  std::string line;
  std::vector<double> values;
  int line_number = 0;
  while (std::getline(in, line))
  {
    ++line_number;
    const auto colon = line.find(':');
    if (colon == std::string::npos)
      continue;
    std::string name = line.substr(0, colon);
    name.erase(0, name.find_first_not_of(" \t"));
    name.erase(name.find_last_not_of(" \t\r") + 1);
    if (name != key)
      continue;
    if (!ParseDoubles(line.substr(colon + 1), values) || values.size() != 12)
    {
      throw FormatError(path.string() + ":" + std::to_string(line_number) + ": calibration entry '" + key +
                        "' must hold 12 finite numbers");
    }
    return FromMatrix4(ToMatrix4(values));
  }
  throw FormatError(path.string() + ": missing calibration entry '" + key + "'");
}

void write_calibration(const SE3Pose& sensor_to_camera, const std::filesystem::path& path, const std::string& key)
{
  std::ofstream out(path);
  if (!out)
    throw IoError("cannot open for writing " + path.string());
  out << std::setprecision(17) << key << ": ";
  WriteMatrixLine(out, sensor_to_camera.matrix());
  if (!out)
    throw IoError("write failed: " + path.string());
}

std::vector<SE3Pose> read_poses(const std::filesystem::path& poses_path, const SE3Pose& sensor_to_camera)
{
  std::ifstream in(poses_path);
  if (!in)
    throw IoError("cannot open " + poses_path.string());
  const Eigen::Matrix4d c = sensor_to_camera.matrix();
  const Eigen::Matrix4d c_inv = sensor_to_camera.inverse().matrix();
  std::vector<SE3Pose> poses;
  std::vector<double> values;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line))
  {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos)
      continue;
    if (!ParseDoubles(line, values) || values.size() != 12)
    {
      throw FormatError(poses_path.string() + ":" + std::to_string(line_number) +
                        ": expected 12 finite numbers");
    }
    poses.push_back(FromMatrix4(c_inv * ToMatrix4(values) * c));
  }
  return poses;
}

std::vector<SE3Pose> read_poses(const std::filesystem::path& poses_path, const std::filesystem::path& calib_path,
                                const std::string& key)
{
  return read_poses(poses_path, read_calibration(calib_path, key));
}

void write_poses(std::span<const SE3Pose> poses, const std::filesystem::path& path, const SE3Pose& sensor_to_camera)
{
  std::ofstream out(path);
  if (!out)
    throw IoError("cannot open for writing " + path.string());
  out << std::setprecision(17);
  const Eigen::Matrix4d c = sensor_to_camera.matrix();
  const Eigen::Matrix4d c_inv = sensor_to_camera.inverse().matrix();
  for (const SE3Pose& pose : poses)
    WriteMatrixLine(out, c * pose.matrix() * c_inv);
  if (!out)
    throw IoError("write failed: " + path.string());
}

//-----------------------------------------------------------------------------
MovingClassSpec MovingClassSpec::semantic_kitti()
{
  MovingClassSpec spec;
  spec.static_counterpart = {
    {252, 10}, // moving-car -> car
    {253, 31}, // moving-bicyclist -> bicyclist
    {254, 30}, // moving-person -> person
    {255, 32}, // moving-motorcyclist -> motorcyclist
    {256, 16}, // moving-on-rails -> on-rails
    {257, 13}, // moving-bus -> bus
    {258, 18}, // moving-truck -> truck
    {259, 20}, // moving-other-vehicle -> other-vehicle
  };
  spec.movable_class_ids = {10, 11, 13, 15, 16, 18, 20, 30, 31, 32};
  for (const auto& [moving, resting] : spec.static_counterpart)
  {
    spec.moving_class_ids.insert(moving);
    spec.movable_class_ids.insert(moving);
  }
  return spec;
}

void MovingClassSpec::validate() const
{
  if (moving_class_ids.empty())
    throw ContractError("MovingClassSpec: empty moving class set");
  for (const auto& [moving, resting] : static_counterpart)
  {
    if (moving_class_ids.count(resting))
      throw ContractError("MovingClassSpec: static counterpart " + std::to_string(resting) + " is itself moving");
  }
}

std::uint32_t MovingClassSpec::strip_motion(std::uint32_t semantic) const
{
  const auto it = static_counterpart.find(semantic);
  return it == static_counterpart.end() ? semantic : it->second;
}

std::vector<std::uint8_t> to_mos_labels(std::span<const std::uint32_t> labels, const MovingClassSpec& spec)
{
  std::vector<std::uint8_t> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i)
    out[i] = spec.is_moving(semantic_id(labels[i])) ? 1 : 0;
  return out;
}

} // namespace rangemos
