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

// File-level operations behind the command-line front end.

#pragma once

#include "rangemos/config.hpp"
#include "rangemos/projection.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace rangemos
{

// Range image file: "RIMG", uint32 width, uint32 height, then float32 planes
// range, x, y, z, intensity and an int32 source-point plane (-1 invalid), all
// little-endian and row-major.
void write_range_image(const RangeImage& img, const std::filesystem::path& path);
RangeImage read_range_image(const std::filesystem::path& path);

//! Projects one scan file and writes it as a range image file.
RangeImage run_project(const PipelineConfig& cfg, const std::filesystem::path& scan,
                       const std::filesystem::path& out_file);

//! Association maps of scan `index` against each of its n_prev predecessors,
//! written as int32 grids (assoc_<cur>_<prev>.bin) together with the
//! re-projected previous image (reprojected_<cur>_<prev>.rimg).
std::vector<std::filesystem::path> run_associate(const PipelineConfig& cfg, std::size_t index,
                                                 const std::filesystem::path& out_dir, bool zero_sentinel);

//! Range residual of scan `index` against each predecessor, written as
//! float32 grids (residual_<cur>_<prev>.bin).
std::vector<std::filesystem::path> run_residual(const PipelineConfig& cfg, std::size_t index,
                                                const std::filesystem::path& out_dir);

enum class RenderMode
{
  Range,
  Residual,
  Labels,
  Association,
};

//! Throws ContractError for unknown names.
RenderMode parse_render_mode(const std::string& name);

//! PNGs for scan `index` plus a normalization.txt sidecar. Labels mode reads
//! `labels` (a prediction or ground-truth label file) or, when empty, the
//! sequence's own label file.
std::vector<std::filesystem::path> run_render(const PipelineConfig& cfg, RenderMode mode, std::size_t index,
                                              const std::filesystem::path& out_dir,
                                              const std::optional<std::filesystem::path>& labels = std::nullopt);

//! Residual PNGs clip at this value.
constexpr double kResidualRenderClip = 1.0;

} // namespace rangemos
