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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rangemos
{

//! Point-level counts for the moving class.
struct ConfusionMatrix
{
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  std::uint64_t total() const { return tp + fp + fn + tn; }
  ConfusionMatrix& operator+=(const ConfusionMatrix& o);
  friend ConfusionMatrix operator+(ConfusionMatrix a, const ConfusionMatrix& b) { return a += b; }
  bool operator==(const ConfusionMatrix&) const = default;
};

//! Returns cm with one count added per point. Throws ContractError on length mismatch.
ConfusionMatrix accumulate(std::span<const std::uint8_t> pred, std::span<const std::uint8_t> gt,
                           ConfusionMatrix cm = {});

//! tp / (tp + fp + fn); empty when the denominator is zero.
std::optional<double> iou_moving(const ConfusionMatrix& cm);

struct ScanEvaluation
{
  std::size_t index = 0;
  ConfusionMatrix cm;
};

struct EvaluationReport
{
  std::vector<ScanEvaluation> scans;

  ConfusionMatrix overall() const;
  //! Scans whose IoU is undefined.
  std::size_t excluded_scans() const;

  std::string to_text() const;
  //! Line-delimited key=value records, one per scan plus an overall block.
  std::string to_key_value() const;
};

} // namespace rangemos
