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

#include "rangemos/grid.hpp"
#include "rangemos/projection.hpp"
#include "rangemos/scan_association.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace rangemos
{

struct Rgb8Image
{
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb; // row-major, 3 bytes per pixel

  Rgb8Image(int w, int h);
  std::uint8_t* at(int u, int v) { return rgb.data() + 3 * (static_cast<std::size_t>(v) * width + u); }
  const std::uint8_t* at(int u, int v) const { return rgb.data() + 3 * (static_cast<std::size_t>(v) * width + u); }
};

struct Normalization
{
  double lo = 0.0;
  double hi = 1.0;
};

//! Min / max over valid pixels; {0, 1} when nothing is valid.
Normalization min_max(const Grid<float>& values, const Grid<std::uint8_t>& valid);

//! Grayscale; invalid pixels are black.
Rgb8Image render_scalar(const Grid<float>& values, const Grid<std::uint8_t>& valid, Normalization norm);
//! Grayscale range with moving pixels in pure red.
Rgb8Image render_labels(const RangeImage& img, const Grid<std::uint8_t>& moving);
//! Present entries colored by target (column -> red, row -> green, blue 255);
//! absent entries black.
Rgb8Image render_association(const AssociationMap& map);

void write_png(const Rgb8Image& img, const std::filesystem::path& path);
//! One "name lo hi" line per rendered image.
void write_normalization_sidecar(const std::vector<std::pair<std::string, Normalization>>& entries,
                                 const std::filesystem::path& path);

} // namespace rangemos
