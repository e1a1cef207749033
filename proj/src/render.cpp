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

#include "rangemos/render.hpp"
#include "rangemos/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <memory>

#include <png.h>

namespace rangemos
{

namespace
{
std::uint8_t Gray(double value, Normalization norm)
{
  const double span = norm.hi - norm.lo;
  const double t = span > 0.0 ? (value - norm.lo) / span : 0.0;
  return static_cast<std::uint8_t>(std::lround(std::clamp(t, 0.0, 1.0) * 255.0));
}

struct FileCloser
{
  void operator()(std::FILE* f) const { std::fclose(f); }
};
} // namespace

Rgb8Image::Rgb8Image(int w, int h) : width(w), height(h), rgb(static_cast<std::size_t>(w) * h * 3, 0) {}

Normalization min_max(const Grid<float>& values, const Grid<std::uint8_t>& valid)
{
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t q = 0; q < values.size(); ++q)
  {
    if (!valid[q])
      continue;
    lo = std::min(lo, static_cast<double>(values[q]));
    hi = std::max(hi, static_cast<double>(values[q]));
  }
  if (!(lo <= hi))
    return {0.0, 1.0};
  return {lo, hi};
}

Rgb8Image render_scalar(const Grid<float>& values, const Grid<std::uint8_t>& valid, Normalization norm)
{
  Rgb8Image img(values.width(), values.height());
  for (int v = 0; v < values.height(); ++v)
  {
    for (int u = 0; u < values.width(); ++u)
    {
      if (!valid(u, v))
        continue;
      const std::uint8_t g = Gray(values(u, v), norm);
      std::uint8_t* px = img.at(u, v);
      px[0] = px[1] = px[2] = g;
    }
  }
  return img;
}

Rgb8Image render_labels(const RangeImage& range_img, const Grid<std::uint8_t>& moving)
{
  if (!moving.same_shape(range_img.valid))
    throw ContractError("render_labels: mask and image differ in size");
  Rgb8Image img = render_scalar(range_img.range, range_img.valid, min_max(range_img.range, range_img.valid));
  for (int v = 0; v < img.height; ++v)
  {
    for (int u = 0; u < img.width; ++u)
    {
      if (!range_img.valid(u, v) || !moving(u, v))
        continue;
      std::uint8_t* px = img.at(u, v);
      px[0] = 255;
      px[1] = 0;
      px[2] = 0;
    }
  }
  return img;
}

Rgb8Image render_association(const AssociationMap& map)
{
  const int w = map.width();
  const int h = map.height();
  Rgb8Image img(w, h);
  for (int v = 0; v < h; ++v)
  {
    for (int u = 0; u < w; ++u)
    {
      const auto& entry = map.entries(u, v);
      if (!entry)
        continue;
      const int u0 = static_cast<int>(*entry % static_cast<std::uint32_t>(w));
      const int v0 = static_cast<int>(*entry / static_cast<std::uint32_t>(w));
      std::uint8_t* px = img.at(u, v);
      px[0] = w > 1 ? static_cast<std::uint8_t>(255 * u0 / (w - 1)) : 0;
      px[1] = h > 1 ? static_cast<std::uint8_t>(255 * v0 / (h - 1)) : 0;
      px[2] = 255;
    }
  }
  return img;
}

void write_png(const Rgb8Image& img, const std::filesystem::path& path)
{
  std::unique_ptr<std::FILE, FileCloser> file(std::fopen(path.c_str(), "wb"));
  if (!file)
    throw IoError("cannot open for writing " + path.string());

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info)
  {
    png_destroy_write_struct(&png, &info);
    throw IoError("libpng initialisation failed");
  }
  if (setjmp(png_jmpbuf(png)))
  {
    png_destroy_write_struct(&png, &info);
    throw IoError("PNG encoding failed: " + path.string());
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(img.width), static_cast<png_uint_32>(img.height), 8,
               PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int v = 0; v < img.height; ++v)
    png_write_row(png, const_cast<png_bytep>(img.at(0, v)));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

void write_normalization_sidecar(const std::vector<std::pair<std::string, Normalization>>& entries,
                                 const std::filesystem::path& path)
{
  std::ofstream out(path);
  if (!out)
    throw IoError("cannot open for writing " + path.string());
  out << std::setprecision(9);
  for (const auto& [name, norm] : entries)
    out << name << ' ' << norm.lo << ' ' << norm.hi << '\n';
  if (!out)
    throw IoError("write failed: " + path.string());
}

} // namespace rangemos
