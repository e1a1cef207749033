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

#include <cstddef>
#include <span>
#include <vector>

namespace rangemos
{

//! Row-major H x W image of T. Column u, row v; flat index u + v * width.
template <typename T>
class Grid
{
public:
  Grid() = default;
  Grid(int width, int height, T fill = T{})
    : width_(width), height_(height),
      data_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill)
  {
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }

  std::size_t flat(int u, int v) const
  {
    return static_cast<std::size_t>(u) + static_cast<std::size_t>(v) * static_cast<std::size_t>(width_);
  }

  T& operator()(int u, int v) { return data_[flat(u, v)]; }
  const T& operator()(int u, int v) const { return data_[flat(u, v)]; }
  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  std::span<T> data() { return data_; }
  std::span<const T> data() const { return data_; }

  template <typename U>
  bool same_shape(const Grid<U>& other) const
  {
    return width_ == other.width() && height_ == other.height();
  }

  bool operator==(const Grid&) const = default;

private:
  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

} // namespace rangemos
