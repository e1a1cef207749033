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

// Adjacent scan association: points of a previous range image are moved into
// the current sensor frame, re-projected, and the resulting pixel
// correspondences are used to carry per-pixel features across frames.

#pragma once

#include "rangemos/dataset_io.hpp"
#include "rangemos/projection.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

namespace rangemos
{

//! Indexed by source (previous-frame) pixel. A present entry holds the flat
//! index u0 + v0 * W of the corresponding current-frame pixel.
struct AssociationMap
{
  Grid<std::optional<std::uint32_t>> entries;
  //! Range of the transformed point behind each present entry [m].
  Grid<double> transformed_range;

  int width() const { return entries.width(); }
  int height() const { return entries.height(); }
  std::size_t present_count() const;

  //! Row-major int32 view. Absent entries become -1, or 0 with the legacy
  //! zero-sentinel encoding (which collides with pixel (0, 0)).
  std::vector<std::int32_t> export_indices(bool zero_sentinel = false) const;
  void write(const std::filesystem::path& path, bool zero_sentinel = false) const;
};

//! H x W x C float features with a validity mask, channel-minor layout.
struct FeatureImage
{
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<float> data;
  Grid<std::uint8_t> valid;

  FeatureImage() = default;
  FeatureImage(int width, int height, int channels);

  std::span<float> pixel(std::size_t flat)
  {
    return {data.data() + flat * static_cast<std::size_t>(channels), static_cast<std::size_t>(channels)};
  }
  std::span<const float> pixel(std::size_t flat) const
  {
    return {data.data() + flat * static_cast<std::size_t>(channels), static_cast<std::size_t>(channels)};
  }
  bool operator==(const FeatureImage&) const = default;
};

//! Five-channel (range, x, y, z, intensity) features of a range image.
FeatureImage features_from_range_image(const RangeImage& img);

//! Applies T to every point; intensity and order are preserved.
PointCloud transform_cloud(const PointCloud& cloud, const SE3Pose& transform);

struct Reprojection
{
  //! The previous image seen from the current frame. source_point still
  //! indexes the previous cloud.
  RangeImage image;
  AssociationMap map;
};

//! Moves every valid pixel of `previous` by `previous_to_current` and projects
//! it with `cfg`. Throws ContractError if the image does not match `cfg`.
Reprojection reproject_previous(const RangeImage& previous, const SE3Pose& previous_to_current,
                                const ProjectionConfig& cfg);

//! Writes each source pixel's features into the pixel its entry points at.
//! Collisions go to the smallest transformed range, then the lowest source
//! flat index. Unmapped pixels are invalid and zero.
FeatureImage scatter_features(const FeatureImage& features, const AssociationMap& map);

struct PreviousScan
{
  RangeImage image;
  //! Relative transform into the current frame.
  SE3Pose to_current;
};

std::vector<Reprojection> associate_sequence(const RangeImage& current, std::span<const PreviousScan> previous,
                                             const ProjectionConfig& cfg);

} // namespace rangemos
