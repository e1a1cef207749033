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

// Semantic-consistency moving-object classifier. A current pixel is static
// when the class carried over from a previous scan agrees with its own class,
// and moving otherwise.

#pragma once

#include "rangemos/dataset_io.hpp"
#include "rangemos/projection.hpp"
#include "rangemos/residual.hpp"
#include "rangemos/scan_association.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace rangemos
{

enum class NoCorrespondencePolicy
{
  Static,  //!< label static
  Unknown, //!< label static and flag the pixel in MovingMask::unknown
};

struct ClassifierConfig
{
  double residual_threshold = 0.1; //!< tau, only used with use_residual
  bool use_residual = false;
  bool movable_only = true;
  NoCorrespondencePolicy no_correspondence = NoCorrespondencePolicy::Static;
  int vote_min = 1; //!< previous scans that must disagree

  void validate() const;
};

//! Per-pixel semantic class ids.
struct SegLabelImage
{
  Grid<std::uint32_t> class_id;
  Grid<std::uint8_t> valid;

  int width() const { return class_id.width(); }
  int height() const { return class_id.height(); }
};

//! Paints per-point semantic ids onto the pixels the points won.
SegLabelImage seg_labels_from_points(const RangeImage& img, std::span<const std::uint32_t> semantics);
//! Single-channel feature image holding the class id as a float.
FeatureImage to_feature_image(const SegLabelImage& seg);
//! Inverse of to_feature_image; reads channel 0.
SegLabelImage from_feature_image(const FeatureImage& features);

struct MovingMask
{
  Grid<std::uint8_t> moving;
  //! Equal to the current image's valid mask.
  Grid<std::uint8_t> valid;
  //! Pixels with no correspondence under NoCorrespondencePolicy::Unknown.
  Grid<std::uint8_t> unknown;

  std::size_t moving_count() const;
};

//! `residuals` must be empty unless cfg.use_residual, in which case it holds
//! one image per entry of `transformed`.
MovingMask classify_pixels(const SegLabelImage& current, std::span<const SegLabelImage> transformed,
                           std::span<const ResidualImage> residuals, const ClassifierConfig& cfg,
                           const MovingClassSpec& spec);

//! Pixel labels copied to the points that own the pixels; every other point
//! of the source cloud is static.
std::vector<std::uint8_t> classify_points(const MovingMask& mask, const RangeImage& img);

//------------------------------------------------------------------------------
// Plug-in point for feature-based moving-object heads.

struct MosInputs
{
  const RangeImage& current;
  const FeatureImage& current_features;
  //! Previous-scan features already scattered into the current frame.
  std::span<const FeatureImage> transformed_features;
  //! Empty unless the head asked for residuals.
  std::span<const ResidualImage> residuals;
};

class MosHead
{
public:
  virtual ~MosHead() = default;
  virtual bool wants_residuals() const { return false; }
  virtual MovingMask classify(const MosInputs& inputs) const = 0;
};

//! MosHead over single-channel class-id features.
class SemanticConsistencyHead : public MosHead
{
public:
  SemanticConsistencyHead(ClassifierConfig cfg, MovingClassSpec spec);

  bool wants_residuals() const override { return cfg_.use_residual; }
  MovingMask classify(const MosInputs& inputs) const override;

private:
  ClassifierConfig cfg_;
  MovingClassSpec spec_;
};

} // namespace rangemos
