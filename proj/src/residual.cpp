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

#include "rangemos/residual.hpp"
#include "rangemos/errors.hpp"

#include <cmath>

namespace rangemos
{

ResidualImage range_residual(const RangeImage& current, const RangeImage& transformed)
{
  if (!current.range.same_shape(transformed.range))
    throw ContractError("range_residual: images differ in size");

  ResidualImage out{Grid<float>(current.width(), current.height(), 0.f),
                    Grid<std::uint8_t>(current.width(), current.height(), 0)};
  for (std::size_t q = 0; q < out.values.size(); ++q)
  {
    // range > 0 keeps the quotient finite even when min_range is 0.
    if (!current.valid[q] || !transformed.valid[q] || !(current.range[q] > 0.f))
      continue;
    const double r_cur = current.range[q];
    const double r_trans = transformed.range[q];
    out.values[q] = static_cast<float>(std::abs(r_cur - r_trans) / r_cur);
    out.valid[q] = 1;
  }
  return out;
}

} // namespace rangemos
