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

#include "rangemos/projection.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace rangemos
{

enum class KnnWeighting
{
  Uniform,
  InverseRangeGap,
};

struct KnnConfig
{
  int k = 5;
  int window = 5;            // odd, pixels per side
  double range_cutoff = 1.0; // [m]
  KnnWeighting weighting = KnnWeighting::Uniform;

  void validate() const;
};

//! Offset added to the range gap before inverting it.
constexpr double kInverseGapEpsilon = 1e-3;

//! Label cleanup in range-image space.
//!
//! Each point looks at the valid pixels in a window centered on its pixel (or
//! on its clamped continuous coordinates when it fell outside the vertical
//! field of view), drops those whose range differs from its own by more than
//! range_cutoff, keeps the k with the smallest gap (ties: lowest flat pixel
//! index) and takes the weighted majority of their labels. A tied vote or an
//! empty neighborhood keeps the input label.
std::vector<std::uint8_t> knn_refine(const PointCloud& points, const PointPixelMap& point_pixels,
                                     const RangeImage& img, std::span<const std::uint8_t> labels,
                                     const KnnConfig& cfg);

} // namespace rangemos
