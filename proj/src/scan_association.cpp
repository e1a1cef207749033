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

#include "rangemos/scan_association.hpp"
#include "rangemos/errors.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <limits>

namespace rangemos
{

namespace
{
void RequireShape(const RangeImage& img, const ProjectionConfig& cfg, const char* what)
{
  if (img.width() != cfg.width || img.height() != cfg.height)
  {
    throw ContractError(std::string(what) + ": image is " + std::to_string(img.width()) + "x" +
                        std::to_string(img.height()) + ", config expects " + std::to_string(cfg.width) + "x" +
                        std::to_string(cfg.height));
  }
}
} // namespace

std::size_t AssociationMap::present_count() const
{
  return static_cast<std::size_t>(std::count_if(entries.data().begin(), entries.data().end(),
                                                [](const auto& e) { return e.has_value(); }));
}

std::vector<std::int32_t> AssociationMap::export_indices(bool zero_sentinel) const
{
  std::vector<std::int32_t> out(entries.size());
  const std::int32_t absent = zero_sentinel ? 0 : -1;
  for (std::size_t s = 0; s < entries.size(); ++s)
    out[s] = entries[s] ? static_cast<std::int32_t>(*entries[s]) : absent;
  return out;
}

void AssociationMap::write(const std::filesystem::path& path, bool zero_sentinel) const
{
  const std::vector<std::int32_t> values = export_indices(zero_sentinel);
  std::vector<char> bytes(values.size() * 4);
  for (std::size_t i = 0; i < values.size(); ++i)
  {
    const auto bits = std::bit_cast<std::uint32_t>(values[i]);
    for (int b = 0; b < 4; ++b)
      bytes[4 * i + static_cast<std::size_t>(b)] = static_cast<char>((bits >> (8 * b)) & 0xFFu);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw IoError("cannot open for writing " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out)
    throw IoError("write failed: " + path.string());
}

FeatureImage::FeatureImage(int w, int h, int c)
  : width(w), height(h), channels(c),
    data(static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * static_cast<std::size_t>(c), 0.f),
    valid(w, h, 0)
{
  if (w < 1 || h < 1 || c < 1)
    throw ContractError("FeatureImage: dimensions and channel count must be >= 1");
}

FeatureImage features_from_range_image(const RangeImage& img)
{
  FeatureImage f(img.width(), img.height(), 5);
  for (std::size_t q = 0; q < img.valid.size(); ++q)
  {
    auto px = f.pixel(q);
    px[0] = img.range[q];
    px[1] = img.x[q];
    px[2] = img.y[q];
    px[3] = img.z[q];
    px[4] = img.intensity[q];
    f.valid[q] = img.valid[q];
  }
  return f;
}

PointCloud transform_cloud(const PointCloud& cloud, const SE3Pose& transform)
{
  PointCloud out;
  out.points.reserve(cloud.size());
  for (const Point& pt : cloud.points)
  {
    const Eigen::Vector3d p = transform * Eigen::Vector3d(pt.x, pt.y, pt.z);
    out.points.push_back(
      {static_cast<float>(p.x()), static_cast<float>(p.y()), static_cast<float>(p.z()), pt.intensity});
  }
  return out;
}

Reprojection reproject_previous(const RangeImage& previous, const SE3Pose& previous_to_current,
                                const ProjectionConfig& cfg)
{
  cfg.validate();
  RequireShape(previous, cfg, "reproject_previous");

  Reprojection out{RangeImage::blank(cfg, previous.source_size), {}};
  out.map.entries = Grid<std::optional<std::uint32_t>>(cfg.width, cfg.height, std::nullopt);
  out.map.transformed_range = Grid<double>(cfg.width, cfg.height, 0.0);
  RangeImage& img = out.image;
  Grid<double> best(cfg.width, cfg.height, std::numeric_limits<double>::infinity());

  // Ascending source order with a strict comparison gives the lowest source
  // index on range ties.
  for (std::size_t s = 0; s < previous.valid.size(); ++s)
  {
    if (!previous.valid[s])
      continue;
    const Eigen::Vector3d p = previous_to_current * Eigen::Vector3d(previous.x[s], previous.y[s], previous.z[s]);
    const auto proj = project_point(p.x(), p.y(), p.z(), cfg);
    if (!proj || !proj->in_fov)
      continue;

    const std::size_t q = best.flat(proj->u, proj->v);
    out.map.entries[s] = static_cast<std::uint32_t>(q);
    out.map.transformed_range[s] = proj->range;

    if (!(proj->range < best[q]))
      continue;
    best[q] = proj->range;
    img.range[q] = static_cast<float>(proj->range);
    img.x[q] = static_cast<float>(p.x());
    img.y[q] = static_cast<float>(p.y());
    img.z[q] = static_cast<float>(p.z());
    img.intensity[q] = previous.intensity[s];
    img.valid[q] = 1;
    img.source_point[q] = previous.source_point[s];
  }
  return out;
}

FeatureImage scatter_features(const FeatureImage& features, const AssociationMap& map)
{
  if (features.width != map.width() || features.height != map.height())
    throw ContractError("scatter_features: feature image and association map differ in size");

  FeatureImage out(features.width, features.height, features.channels);
  Grid<double> best(features.width, features.height, std::numeric_limits<double>::infinity());
  const std::size_t limit = map.entries.size();

  for (std::size_t s = 0; s < limit; ++s)
  {
    const auto& entry = map.entries[s];
    if (!entry)
      continue;
    const std::size_t q = *entry;
    if (q >= limit)
      throw ContractError("scatter_features: association entry out of range");
    const double r = map.transformed_range[s];
    if (!(r < best[q]))
      continue;
    best[q] = r;
    const auto src = features.pixel(s);
    std::copy(src.begin(), src.end(), out.pixel(q).begin());
    out.valid[q] = 1;
  }
  return out;
}

std::vector<Reprojection> associate_sequence(const RangeImage& current, std::span<const PreviousScan> previous,
                                             const ProjectionConfig& cfg)
{
  RequireShape(current, cfg, "associate_sequence");
  std::vector<Reprojection> out;
  out.reserve(previous.size());
  for (const PreviousScan& prev : previous)
    out.push_back(reproject_previous(prev.image, prev.to_current, cfg));
  return out;
}

} // namespace rangemos
