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

namespace rangemos
{

struct ResidualImage
{
  Grid<float> values;
  //! Set where both operands are valid.
  Grid<std::uint8_t> valid;

  int width() const { return values.width(); }
  int height() const { return values.height(); }
};

//! |r_current - r_transformed| / r_current where both pixels are valid, 0 elsewhere.
ResidualImage range_residual(const RangeImage& current, const RangeImage& transformed);

} // namespace rangemos
