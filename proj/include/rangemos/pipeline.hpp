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

// Cascaded per-scan pipeline: project, associate previous scans, classify,
// back-project and refine.

#pragma once

#include "rangemos/config.hpp"
#include "rangemos/evaluation.hpp"
#include "rangemos/mos_baseline.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rangemos
{

struct ScanFrame
{
  PointCloud cloud;
  //! Per-point semantic prediction, motion state excluded.
  std::vector<std::uint32_t> semantics;
  SE3Pose pose; //!< sensor to world
};

//! Moving labels for `current`; `previous` holds the earlier frames, nearest first.
std::vector<std::uint8_t> segment_frame(const ScanFrame& current, std::span<const ScanFrame* const> previous,
                                        const PipelineConfig& cfg, const MosHead& head);

//! Labels every frame of an in-memory sequence. Frames with fewer than n_prev
//! predecessors are all static. `head` defaults to the semantic-consistency rule.
std::vector<std::vector<std::uint8_t>> segment_sequence(std::span<const ScanFrame> frames,
                                                        const PipelineConfig& cfg, const MosHead* head = nullptr);

//! Files of one sequence on disk, index-aligned.
struct SequenceFiles
{
  std::vector<std::filesystem::path> scans;
  std::vector<std::filesystem::path> labels;    //!< empty when absent
  std::vector<std::filesystem::path> semantics; //!< empty when ground truth stands in
  std::vector<SE3Pose> poses;

  //! Throws on missing scan directory, pose file or calibration, or when the
  //! counts do not line up.
  static SequenceFiles discover(const PipelineConfig& cfg, bool need_semantics);

  //! Loads one frame with its semantics resolved.
  ScanFrame load_frame(std::size_t index, const MovingClassSpec& classes) const;
  std::filesystem::path prediction_name(std::size_t index) const;
};

struct ScanOutcome
{
  std::size_t index = 0;
  bool ok = false;
  std::string message;
};

struct SegmentReport
{
  std::vector<ScanOutcome> outcomes; //!< in scan order
  std::optional<EvaluationReport> evaluation;
  bool aborted = false; //!< strict mode stopped early

  std::size_t failed() const;
};

//! Runs the pipeline over the configured sequence and writes one prediction
//! label file per scan into cfg.out_dir.
SegmentReport run_segment(const PipelineConfig& cfg, const MosHead* head = nullptr);

//! Scores prediction files in `prediction_dir` against the sequence labels.
EvaluationReport run_evaluate(const PipelineConfig& cfg, const std::filesystem::path& prediction_dir);

//! Per-point prediction labels in the configured output ids.
LabelArray to_output_labels(std::span<const std::uint8_t> moving, const PipelineConfig& cfg);

} // namespace rangemos
