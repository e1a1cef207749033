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

#include "rangemos/postprocess.hpp"
#include "rangemos/errors.hpp"

#include <algorithm>
#include <cmath>

namespace rangemos
{

void KnnConfig::validate() const
{
  if (k < 1)
    throw ContractError("KnnConfig: k must be >= 1");
  if (window < 1 || window % 2 == 0)
    throw ContractError("KnnConfig: window must be odd and >= 1");
  if (!(range_cutoff > 0.0))
    throw ContractError("KnnConfig: range_cutoff must be > 0");
}

std::vector<std::uint8_t> knn_refine(const PointCloud& points, const PointPixelMap& point_pixels,
                                     const RangeImage& img, std::span<const std::uint8_t> labels,
                                     const KnnConfig& cfg)
{
  cfg.validate();
  const std::size_t n = points.size();
  if (labels.size() != n || point_pixels.pixel.size() != n || point_pixels.continuous.size() != n ||
      img.source_size != n)
  {
    throw ContractError("knn_refine: points, pixel map, labels and image disagree on point count");
  }

  const int w = img.width();
  const int h = img.height();
  const int half = cfg.window / 2;
  const auto k = static_cast<std::size_t>(cfg.k);

  std::vector<std::uint8_t> out(labels.begin(), labels.end());
  struct Candidate
  {
    double gap;
    std::size_t flat;
  };
  std::vector<Candidate> candidates;
  candidates.reserve(static_cast<std::size_t>(cfg.window) * static_cast<std::size_t>(cfg.window));

  for (std::size_t i = 0; i < n; ++i)
  {
    const auto& sub = point_pixels.continuous[i];
    if (!sub)
      continue;
    int uc = 0;
    int vc = 0;
    if (const auto& px = point_pixels.pixel[i])
    {
      uc = px->u;
      vc = px->v;
    }
    else
    {
      uc = static_cast<int>(std::clamp(std::floor(sub->u), 0.0, static_cast<double>(w - 1)));
      vc = static_cast<int>(std::clamp(std::floor(sub->v), 0.0, static_cast<double>(h - 1)));
    }

    const Point& pt = points.points[i];
    const double range = std::sqrt(double(pt.x) * pt.x + double(pt.y) * pt.y + double(pt.z) * pt.z);

    candidates.clear();
    for (int v = std::max(0, vc - half); v <= std::min(h - 1, vc + half); ++v)
    {
      for (int u = std::max(0, uc - half); u <= std::min(w - 1, uc + half); ++u)
      {
        const std::size_t q = img.valid.flat(u, v);
        if (!img.valid[q])
          continue;
        const double gap = std::abs(static_cast<double>(img.range[q]) - range);
        if (gap > cfg.range_cutoff)
          continue;
        candidates.push_back({gap, q});
      }
    }
    if (candidates.empty())
      continue;

    const std::size_t keep = std::min(k, candidates.size());
    std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(keep), candidates.end(),
                      [](const Candidate& a, const Candidate& b)
                      { return a.gap < b.gap || (a.gap == b.gap && a.flat < b.flat); });

    double moving = 0.0;
    double still = 0.0;
    for (std::size_t j = 0; j < keep; ++j)
    {
      const double weight =
        cfg.weighting == KnnWeighting::Uniform ? 1.0 : 1.0 / (candidates[j].gap + kInverseGapEpsilon);
      const auto owner = static_cast<std::size_t>(img.source_point[candidates[j].flat]);
      (labels[owner] ? moving : still) += weight;
    }
    if (moving > still)
      out[i] = 1;
    else if (still > moving)
      out[i] = 0;
  }
  return out;
}

} // namespace rangemos
