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

// Spherical range-image projection.
//
//   yaw   = atan2(y, x)
//   pitch = asin(z / r)
//   u     = floor(0.5 * (1 - yaw / pi) * W)            clamped to [0, W-1]
//   v     = floor((1 - (pitch - fov_down) / fov) * H)  clamped to [0, H-1]
//
// Points whose pitch falls outside [fov_down, fov_up] get no pixel. When
// several points share a pixel the nearest one wins, ties going to the lowest
// point index.

#pragma once

#include "rangemos/dataset_io.hpp"
#include "rangemos/grid.hpp"

#include <cstdint>
#include <numbers>
#include <optional>
#include <vector>

namespace rangemos
{

constexpr double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }
constexpr double rad2deg(double rad) { return rad * 180.0 / std::numbers::pi; }

struct ProjectionConfig
{
  int width = 2048;
  int height = 64;
  double fov_up = deg2rad(3.0);     // [rad]
  double fov_down = deg2rad(-25.0); // [rad]
  double min_range = 1e-6;          // [m] points closer than this are skipped
  float invalid_range = -1.f;       // range fill of invalid pixels
  float invalid_fill = 0.f;         // x, y, z, intensity fill of invalid pixels

  double fov() const { return fov_up - fov_down; }
  void validate() const;
  bool operator==(const ProjectionConfig&) const = default;
};

enum class Channel
{
  Range,
  X,
  Y,
  Z,
  Intensity
};

constexpr std::int32_t kNoPoint = -1;

struct RangeImage
{
  Grid<float> range;
  Grid<float> x;
  Grid<float> y;
  Grid<float> z;
  Grid<float> intensity;
  Grid<std::uint8_t> valid;
  //! Index of the winning point in the source cloud, kNoPoint when invalid.
  Grid<std::int32_t> source_point;
  //! Point count of the source cloud.
  std::size_t source_size = 0;

  //! All-invalid image with the configured fill values.
  static RangeImage blank(const ProjectionConfig& cfg, std::size_t source_size = 0);

  int width() const { return range.width(); }
  int height() const { return range.height(); }
  const Grid<float>& channel(Channel c) const;
  std::size_t valid_count() const;

  bool operator==(const RangeImage&) const = default;
};

struct PixelCoord
{
  int u = 0;
  int v = 0;
  bool operator==(const PixelCoord&) const = default;
};

struct SubPixel
{
  double u = 0.0;
  double v = 0.0;
};

//! Per-point pixel assignment. `pixel` is set for points that received a
//! pixel (whether or not they won it); `continuous` is set for every
//! non-degenerate point, including those outside the vertical field of view.
struct PointPixelMap
{
  std::vector<std::optional<PixelCoord>> pixel;
  std::vector<std::optional<SubPixel>> continuous;
};

//! Projection of a single point. Empty for near-zero range.
struct PointProjection
{
  double range = 0.0;
  double u_f = 0.0; // continuous column, before truncation
  double v_f = 0.0; // continuous row, before truncation
  int u = 0;        // truncated and clamped
  int v = 0;
  bool in_fov = false;
};

std::optional<PointProjection> project_point(double x, double y, double z, const ProjectionConfig& cfg);

struct Projection
{
  RangeImage image;
  PointPixelMap pixels;
};

Projection spherical_project(const PointCloud& cloud, const ProjectionConfig& cfg);

struct BackProjection
{
  PointCloud cloud;
  //! Flat pixel index of each point.
  std::vector<std::size_t> pixel_index;
};

//! One point per valid pixel, in row-major pixel order.
BackProjection back_project(const RangeImage& img);

} // namespace rangemos
