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

#include "rangemos/pipeline.hpp"
#include "rangemos/errors.hpp"
#include "rangemos/postprocess.hpp"
#include "rangemos/residual.hpp"
#include "rangemos/scan_association.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace fs = std::filesystem;

namespace rangemos
{

namespace
{
std::vector<fs::path> ListFiles(const fs::path& dir)
{
  std::vector<fs::path> files;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(dir, ec))
    if (entry.is_regular_file())
      files.push_back(entry.path());
  if (ec)
    throw IoError("cannot list " + dir.string() + ": " + ec.message());
  std::sort(files.begin(), files.end());
  return files;
}

// Matching per-scan files in `dir`, by scan stem.
std::vector<fs::path> Companions(const std::vector<fs::path>& scans, const fs::path& dir, const char* what)
{
  std::vector<fs::path> out;
  for (const fs::path& scan : scans)
  {
    fs::path p = dir / scan.stem();
    p += ".label";
    if (!fs::exists(p))
      throw IoError(std::string("missing ") + what + " file " + p.string());
    out.push_back(p);
  }
  return out;
}

std::vector<std::uint32_t> MotionFreeSemantics(const LabelArray& labels, const MovingClassSpec& classes)
{
  std::vector<std::uint32_t> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i)
    out[i] = classes.strip_motion(semantic_id(labels[i]));
  return out;
}

int WorkerCount(const PipelineConfig& cfg, std::size_t jobs)
{
  int n = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::thread::hardware_concurrency());
  n = std::max(n, 1);
  return static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(n), std::max<std::size_t>(jobs, 1)));
}

// Runs job(i) for i in [0, count) on a bounded pool. job returns false to stop
// the remaining work.
template <typename Job>
void ParallelFor(std::size_t count, int workers, Job job)
{
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto loop = [&]()
  {
    while (!stop.load())
    {
      const std::size_t i = next.fetch_add(1);
      if (i >= count)
        return;
      try
      {
        if (!job(i))
          stop.store(true);
      }
      catch (...)
      {
        const std::lock_guard lock(error_mutex);
        if (!error)
          error = std::current_exception();
        stop.store(true);
      }
    }
  };
  if (workers <= 1)
  {
    loop();
  }
  else
  {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back(loop);
  }
  if (error)
    std::rethrow_exception(error);
}
} // namespace

//-----------------------------------------------------------------------------
std::vector<std::uint8_t> segment_frame(const ScanFrame& current, std::span<const ScanFrame* const> previous,
                                        const PipelineConfig& cfg, const MosHead& head)
{
  const ProjectionConfig& proj = cfg.projection;
  const Projection cur = spherical_project(current.cloud, proj);
  const FeatureImage cur_features = to_feature_image(seg_labels_from_points(cur.image, current.semantics));

  std::vector<FeatureImage> transformed;
  std::vector<ResidualImage> residuals;
  for (const ScanFrame* prev : previous)
  {
    const Projection prev_proj = spherical_project(prev->cloud, proj);
    const Reprojection rep = reproject_previous(prev_proj.image, relative_pose(prev->pose, current.pose), proj);
    const FeatureImage prev_features = to_feature_image(seg_labels_from_points(prev_proj.image, prev->semantics));
    transformed.push_back(scatter_features(prev_features, rep.map));
    if (head.wants_residuals())
      residuals.push_back(range_residual(cur.image, rep.image));
  }

  const MovingMask mask = head.classify({cur.image, cur_features, transformed, residuals});
  std::vector<std::uint8_t> labels = classify_points(mask, cur.image);
  if (cfg.knn_enabled)
    labels = knn_refine(current.cloud, cur.pixels, cur.image, labels, cfg.knn);
  return labels;
}

std::vector<std::vector<std::uint8_t>> segment_sequence(std::span<const ScanFrame> frames, const PipelineConfig& cfg,
                                                        const MosHead* head)
{
  cfg.validate();
  const SemanticConsistencyHead rule(cfg.classifier, cfg.classes);
  const MosHead& use = head ? *head : rule;
  const auto n_prev = static_cast<std::size_t>(cfg.n_prev);

  std::vector<std::vector<std::uint8_t>> out(frames.size());
  ParallelFor(frames.size(), WorkerCount(cfg, frames.size()),
              [&](std::size_t t)
              {
                if (t < n_prev)
                {
                  out[t].assign(frames[t].cloud.size(), 0);
                  return true;
                }
                std::vector<const ScanFrame*> previous;
                for (std::size_t i = 1; i <= n_prev; ++i)
                  previous.push_back(&frames[t - i]);
                out[t] = segment_frame(frames[t], previous, cfg, use);
                return true;
              });
  return out;
}

//-----------------------------------------------------------------------------
SequenceFiles SequenceFiles::discover(const PipelineConfig& cfg, bool need_semantics)
{
  const SequencePaths& paths = cfg.sequence;
  const fs::path scan_dir = paths.resolve(paths.scans);
  if (!fs::is_directory(scan_dir))
    throw IoError("scan directory not found: " + scan_dir.string());

  SequenceFiles files;
  files.scans = ListFiles(scan_dir);
  files.poses = read_poses(paths.resolve(paths.poses), paths.resolve(paths.calib), paths.calib_key);
  if (files.poses.size() != files.scans.size())
  {
    throw FormatError("pose file has " + std::to_string(files.poses.size()) + " poses for " +
                      std::to_string(files.scans.size()) + " scans");
  }

  const fs::path label_dir = paths.resolve(paths.labels);
  if (!paths.labels.empty() && fs::is_directory(label_dir))
    files.labels = Companions(files.scans, label_dir, "label");
  if (!paths.semantics.empty())
    files.semantics = Companions(files.scans, paths.resolve(paths.semantics), "semantic prediction");
  if (need_semantics && files.semantics.empty() && files.labels.empty())
    throw IoError("no semantic predictions and no labels under " + label_dir.string());
  return files;
}

ScanFrame SequenceFiles::load_frame(std::size_t index, const MovingClassSpec& classes) const
{
  ScanFrame frame;
  frame.cloud = read_scan(scans.at(index));
  frame.pose = poses.at(index);
  const fs::path& sem_path = semantics.empty() ? labels.at(index) : semantics.at(index);
  const LabelArray raw = read_labels(sem_path);
  check_pairing(frame.cloud, raw, sem_path.string());
  frame.semantics = MotionFreeSemantics(raw, classes);
  return frame;
}

fs::path SequenceFiles::prediction_name(std::size_t index) const
{
  fs::path name = scans.at(index).stem();
  name += ".label";
  return name;
}

std::size_t SegmentReport::failed() const
{
  return static_cast<std::size_t>(std::count_if(outcomes.begin(), outcomes.end(), [](const auto& o) { return !o.ok; }));
}

LabelArray to_output_labels(std::span<const std::uint8_t> moving, const PipelineConfig& cfg)
{
  LabelArray out(moving.size());
  for (std::size_t i = 0; i < moving.size(); ++i)
    out[i] = moving[i] ? cfg.moving_output_id : cfg.static_output_id;
  return out;
}

SegmentReport run_segment(const PipelineConfig& cfg, const MosHead* head)
{
  cfg.validate();
  const SequenceFiles files = SequenceFiles::discover(cfg, true);
  if (cfg.evaluate && files.labels.empty())
    throw IoError("evaluation requested but no label directory found");
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec)
    throw IoError("cannot create " + cfg.out_dir.string() + ": " + ec.message());

  const SemanticConsistencyHead rule(cfg.classifier, cfg.classes);
  const MosHead& use = head ? *head : rule;
  const auto n_prev = static_cast<std::size_t>(cfg.n_prev);
  const std::size_t count = files.scans.size();

  std::vector<ScanOutcome> outcomes(count);
  std::vector<std::optional<ConfusionMatrix>> matrices(count);
  std::vector<std::uint8_t> attempted(count, 0);

  ParallelFor(count, WorkerCount(cfg, count),
              [&](std::size_t t)
              {
                attempted[t] = 1;
                ScanOutcome& outcome = outcomes[t];
                outcome.index = t;
                try
                {
                  const ScanFrame current = files.load_frame(t, cfg.classes);
                  std::vector<std::uint8_t> moving;
                  if (t < n_prev)
                  {
                    moving.assign(current.cloud.size(), 0);
                  }
                  else
                  {
                    std::vector<ScanFrame> history;
                    for (std::size_t i = 1; i <= n_prev; ++i)
                      history.push_back(files.load_frame(t - i, cfg.classes));
                    std::vector<const ScanFrame*> previous;
                    for (const ScanFrame& f : history)
                      previous.push_back(&f);
                    moving = segment_frame(current, previous, cfg, use);
                  }
                  write_labels(to_output_labels(moving, cfg), cfg.out_dir / files.prediction_name(t));
                  if (cfg.evaluate)
                  {
                    const LabelArray gt = read_labels(files.labels[t]);
                    check_pairing(current.cloud, gt, files.labels[t].string());
                    matrices[t] = accumulate(moving, to_mos_labels(gt, cfg.classes));
                  }
                  outcome.ok = true;
                }
                catch (const std::exception& e)
                {
                  outcome.ok = false;
                  outcome.message = e.what();
                  return !cfg.strict;
                }
                return true;
              });

  SegmentReport report;
  for (std::size_t t = 0; t < count; ++t)
  {
    if (!attempted[t])
    {
      report.aborted = true;
      continue;
    }
    report.outcomes.push_back(outcomes[t]);
  }
  if (cfg.evaluate)
  {
    EvaluationReport eval;
    for (std::size_t t = 0; t < count; ++t)
      if (matrices[t])
        eval.scans.push_back({t, *matrices[t]});
    report.evaluation = std::move(eval);
  }
  return report;
}

EvaluationReport run_evaluate(const PipelineConfig& cfg, const fs::path& prediction_dir)
{
  cfg.classes.validate();
  const SequencePaths& paths = cfg.sequence;
  const fs::path scan_dir = paths.resolve(paths.scans);
  const std::vector<fs::path> scans = ListFiles(scan_dir);
  const fs::path label_dir = paths.resolve(paths.labels);
  const std::vector<fs::path> labels = Companions(scans, label_dir, "label");
  const std::vector<fs::path> predictions = Companions(scans, prediction_dir, "prediction");

  EvaluationReport report;
  for (std::size_t t = 0; t < scans.size(); ++t)
  {
    const LabelArray gt = read_labels(labels[t]);
    const LabelArray pred = read_labels(predictions[t]);
    if (gt.size() != pred.size())
    {
      throw FormatError(predictions[t].string() + ": " + std::to_string(pred.size()) + " predictions for " +
                        std::to_string(gt.size()) + " labels");
    }
    std::vector<std::uint8_t> pred_moving(pred.size());
    for (std::size_t i = 0; i < pred.size(); ++i)
    {
      const std::uint32_t id = semantic_id(pred[i]);
      pred_moving[i] = (id == cfg.moving_output_id || cfg.classes.is_moving(id)) ? 1 : 0;
    }
    report.scans.push_back({t, accumulate(pred_moving, to_mos_labels(gt, cfg.classes))});
  }
  return report;
}

} // namespace rangemos
