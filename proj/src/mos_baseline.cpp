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

#include "rangemos/mos_baseline.hpp"
#include "rangemos/errors.hpp"

#include <algorithm>
#include <cmath>

namespace rangemos
{

void ClassifierConfig::validate() const
{
  if (!(residual_threshold >= 0.0))
    throw ContractError("ClassifierConfig: residual threshold must be >= 0");
  if (vote_min < 1)
    throw ContractError("ClassifierConfig: vote_min must be >= 1");
}

SegLabelImage seg_labels_from_points(const RangeImage& img, std::span<const std::uint32_t> semantics)
{
  if (semantics.size() != img.source_size)
    throw ContractError("seg_labels_from_points: " + std::to_string(semantics.size()) + " labels for " +
                        std::to_string(img.source_size) + " points");
  SegLabelImage seg{Grid<std::uint32_t>(img.width(), img.height(), 0),
                    Grid<std::uint8_t>(img.width(), img.height(), 0)};
  for (std::size_t q = 0; q < img.valid.size(); ++q)
  {
    if (!img.valid[q])
      continue;
    seg.class_id[q] = semantics[static_cast<std::size_t>(img.source_point[q])];
    seg.valid[q] = 1;
  }
  return seg;
}

FeatureImage to_feature_image(const SegLabelImage& seg)
{
  FeatureImage f(seg.width(), seg.height(), 1);
  for (std::size_t q = 0; q < seg.valid.size(); ++q)
  {
    f.data[q] = static_cast<float>(seg.class_id[q]);
    f.valid[q] = seg.valid[q];
  }
  return f;
}

SegLabelImage from_feature_image(const FeatureImage& features)
{
  SegLabelImage seg{Grid<std::uint32_t>(features.width, features.height, 0),
                    Grid<std::uint8_t>(features.width, features.height, 0)};
  for (std::size_t q = 0; q < seg.valid.size(); ++q)
  {
    if (!features.valid[q])
      continue;
    const float value = features.pixel(q)[0];
    seg.class_id[q] = value > 0.f ? static_cast<std::uint32_t>(std::lround(value)) : 0u;
    seg.valid[q] = 1;
  }
  return seg;
}

std::size_t MovingMask::moving_count() const
{
  return static_cast<std::size_t>(std::count(moving.data().begin(), moving.data().end(), 1));
}

MovingMask classify_pixels(const SegLabelImage& current, std::span<const SegLabelImage> transformed,
                           std::span<const ResidualImage> residuals, const ClassifierConfig& cfg,
                           const MovingClassSpec& spec)
{
  cfg.validate();
  const int w = current.width();
  const int h = current.height();
  for (const SegLabelImage& t : transformed)
    if (!t.class_id.same_shape(current.class_id))
      throw ContractError("classify_pixels: transformed label image differs in size");
  if (cfg.use_residual)
  {
    if (residuals.size() != transformed.size())
      throw ContractError("classify_pixels: use_residual needs one residual image per previous scan");
    for (const ResidualImage& r : residuals)
      if (!r.values.same_shape(current.class_id))
        throw ContractError("classify_pixels: residual image differs in size");
  }
  else if (!residuals.empty())
  {
    throw ContractError("classify_pixels: residual images given but use_residual is off");
  }

  MovingMask mask{Grid<std::uint8_t>(w, h, 0), current.valid, Grid<std::uint8_t>(w, h, 0)};
  for (std::size_t q = 0; q < current.valid.size(); ++q)
  {
    if (!current.valid[q])
      continue;
    const std::uint32_t cls = current.class_id[q];
    int correspondences = 0;
    int votes = 0;
    for (std::size_t i = 0; i < transformed.size(); ++i)
    {
      if (!transformed[i].valid[q])
        continue;
      ++correspondences;
      if (transformed[i].class_id[q] == cls)
        continue;
      if (cfg.use_residual && !(residuals[i].values[q] > cfg.residual_threshold))
        continue;
      ++votes;
    }
    if (correspondences == 0)
    {
      if (cfg.no_correspondence == NoCorrespondencePolicy::Unknown)
        mask.unknown[q] = 1;
      continue;
    }
    const bool gate = !cfg.movable_only || spec.is_movable(cls);
    mask.moving[q] = (gate && votes >= cfg.vote_min) ? 1 : 0;
  }
  return mask;
}

std::vector<std::uint8_t> classify_points(const MovingMask& mask, const RangeImage& img)
{
  if (!mask.moving.same_shape(img.valid))
    throw ContractError("classify_points: mask and image differ in size");
  std::vector<std::uint8_t> labels(img.source_size, 0);
  for (std::size_t q = 0; q < img.valid.size(); ++q)
  {
    if (!img.valid[q] || img.source_point[q] == kNoPoint)
      continue;
    labels[static_cast<std::size_t>(img.source_point[q])] = mask.moving[q];
  }
  return labels;
}

//-----------------------------------------------------------------------------
SemanticConsistencyHead::SemanticConsistencyHead(ClassifierConfig cfg, MovingClassSpec spec)
  : cfg_(cfg), spec_(std::move(spec))
{
  cfg_.validate();
  spec_.validate();
}

MovingMask SemanticConsistencyHead::classify(const MosInputs& inputs) const
{
  SegLabelImage current = from_feature_image(inputs.current_features);
  if (!current.valid.same_shape(inputs.current.valid))
    throw ContractError("SemanticConsistencyHead: features and range image differ in size");
  for (std::size_t q = 0; q < current.valid.size(); ++q)
    current.valid[q] = current.valid[q] && inputs.current.valid[q];

  std::vector<SegLabelImage> transformed;
  transformed.reserve(inputs.transformed_features.size());
  for (const FeatureImage& f : inputs.transformed_features)
    transformed.push_back(from_feature_image(f));

  MovingMask mask = classify_pixels(current, transformed, inputs.residuals, cfg_, spec_);
  // The output covers the range image's valid region.
  mask.valid = inputs.current.valid;
  return mask;
}

} // namespace rangemos
