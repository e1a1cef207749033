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
#include "rangemos/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rangemos
{

void ProjectionConfig::validate() const
{
  if (width < 1 || height < 1)
    throw ContractError("ProjectionConfig: width and height must be >= 1");
  if (!std::isfinite(fov_up) || !std::isfinite(fov_down) || !(fov_up > fov_down))
    throw ContractError("ProjectionConfig: fov_up must exceed fov_down");
  if (!(min_range >= 0.0))
    throw ContractError("ProjectionConfig: min_range must be >= 0");
}

RangeImage RangeImage::blank(const ProjectionConfig& cfg, std::size_t source_size)
{
  cfg.validate();
  RangeImage img;
  img.range = Grid<float>(cfg.width, cfg.height, cfg.invalid_range);
  img.x = Grid<float>(cfg.width, cfg.height, cfg.invalid_fill);
  img.y = Grid<float>(cfg.width, cfg.height, cfg.invalid_fill);
  img.z = Grid<float>(cfg.width, cfg.height, cfg.invalid_fill);
  img.intensity = Grid<float>(cfg.width, cfg.height, cfg.invalid_fill);
  img.valid = Grid<std::uint8_t>(cfg.width, cfg.height, 0);
  img.source_point = Grid<std::int32_t>(cfg.width, cfg.height, kNoPoint);
  img.source_size = source_size;
  return img;
}

const Grid<float>& RangeImage::channel(Channel c) const
{
  switch (c)
  {
    case Channel::Range: return range;
    case Channel::X: return x;
    case Channel::Y: return y;
    case Channel::Z: return z;
    case Channel::Intensity: return intensity;
  }
  return range;
}

std::size_t RangeImage::valid_count() const
{
  return static_cast<std::size_t>(std::count(valid.data().begin(), valid.data().end(), 1));
}

std::optional<PointProjection> project_point(double x, double y, double z, const ProjectionConfig& cfg)
{
  const double range = std::sqrt(x * x + y * y + z * z);
  if (!(range >= cfg.min_range) || range == 0.0)
    return std::nullopt;

  PointProjection p;
  p.range = range;
  const double yaw = std::atan2(y, x);
  const double pitch = std::asin(std::clamp(z / range, -1.0, 1.0));
  p.u_f = 0.5 * (1.0 - yaw / std::numbers::pi) * cfg.width;
  p.v_f = (1.0 - (pitch - cfg.fov_down) / cfg.fov()) * cfg.height;
  p.in_fov = pitch >= cfg.fov_down && pitch <= cfg.fov_up;
  p.u = static_cast<int>(std::clamp(std::floor(p.u_f), 0.0, static_cast<double>(cfg.width - 1)));
  p.v = static_cast<int>(std::clamp(std::floor(p.v_f), 0.0, static_cast<double>(cfg.height - 1)));
  return p;
}

Projection spherical_project(const PointCloud& cloud, const ProjectionConfig& cfg)
{
  cfg.validate();
  if (cloud.size() > static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max()))
    throw ContractError("spherical_project: cloud too large for 32-bit point indices");

  Projection out{RangeImage::blank(cfg, cloud.size()), {}};
  RangeImage& img = out.image;
  out.pixels.pixel.assign(cloud.size(), std::nullopt);
  out.pixels.continuous.assign(cloud.size(), std::nullopt);

  // Exact double ranges drive the min-range reduction; the float channel is
  // only the stored copy.
  Grid<double> best(cfg.width, cfg.height, std::numeric_limits<double>::infinity());

  for (std::size_t i = 0; i < cloud.size(); ++i)
  {
    const Point& pt = cloud.points[i];
    const auto proj = project_point(pt.x, pt.y, pt.z, cfg);
    if (!proj)
      continue;
    out.pixels.continuous[i] = SubPixel{proj->u_f, proj->v_f};
    if (!proj->in_fov)
      continue;
    out.pixels.pixel[i] = PixelCoord{proj->u, proj->v};

    const std::size_t q = best.flat(proj->u, proj->v);
    if (!(proj->range < best[q]))
      continue;
    best[q] = proj->range;
    img.range[q] = static_cast<float>(proj->range);
    img.x[q] = pt.x;
    img.y[q] = pt.y;
    img.z[q] = pt.z;
    img.intensity[q] = pt.intensity;
    img.valid[q] = 1;
    img.source_point[q] = static_cast<std::int32_t>(i);
  }
  return out;
}

BackProjection back_project(const RangeImage& img)
{
  BackProjection out;
  for (std::size_t q = 0; q < img.valid.size(); ++q)
  {
    if (!img.valid[q])
      continue;
    out.cloud.points.push_back({img.x[q], img.y[q], img.z[q], img.intensity[q]});
    out.pixel_index.push_back(q);
  }
  return out;
}

} // namespace rangemos
