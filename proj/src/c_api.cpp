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

#include "rangemos/rangemos.h"

#include "rangemos/commands.hpp"
#include "rangemos/config.hpp"
#include "rangemos/errors.hpp"
#include "rangemos/pipeline.hpp"
#include "rangemos/synth.hpp"

#include <algorithm>
#include <cstring>
#include <memory>
#include <string>

struct rmos_config
{
  rangemos::PipelineConfig cfg;
};

struct rmos_cloud
{
  rangemos::PointCloud cloud;
};

struct rmos_image
{
  rangemos::RangeImage image;
};

struct rmos_report
{
  rangemos::SegmentReport segment;
  std::vector<rangemos::ScanOutcome> failures;
  std::string text;
  std::string key_value;
};

namespace
{
thread_local std::string g_last_error;

// Runs fn, mapping exceptions onto status codes.
template <typename Fn>
rmos_status Guard(Fn&& fn)
{
  g_last_error.clear();
  try
  {
    fn();
    return RMOS_OK;
  }
  catch (const rangemos::IoError& e)
  {
    g_last_error = e.what();
    return RMOS_ERR_IO;
  }
  catch (const rangemos::FormatError& e)
  {
    g_last_error = e.what();
    return RMOS_ERR_FORMAT;
  }
  catch (const rangemos::ContractError& e)
  {
    g_last_error = e.what();
    return RMOS_ERR_CONTRACT;
  }
  catch (const std::exception& e)
  {
    g_last_error = e.what();
    return RMOS_ERR_INTERNAL;
  }
  catch (...)
  {
    g_last_error = "unknown error";
    return RMOS_ERR_INTERNAL;
  }
}

void Require(bool condition, const char* what)
{
  if (!condition)
    throw rangemos::ContractError(what);
}

void CopyOut(const std::string& text, char* buf, size_t cap, size_t* needed)
{
  if (needed)
    *needed = text.size();
  if (buf && cap > 0)
  {
    const size_t n = std::min(cap - 1, text.size());
    std::memcpy(buf, text.data(), n);
    buf[n] = '\0';
  }
}

rmos_report* MakeReport(rangemos::SegmentReport segment)
{
  auto report = std::make_unique<rmos_report>();
  report->segment = std::move(segment);
  for (const auto& o : report->segment.outcomes)
    if (!o.ok)
      report->failures.push_back(o);
  if (report->segment.evaluation)
  {
    report->text = report->segment.evaluation->to_text();
    report->key_value = report->segment.evaluation->to_key_value();
  }
  return report.release();
}
} // namespace

extern "C" {

const char* rmos_last_error(void) { return g_last_error.c_str(); }

const char* rmos_version(void) { return "1.0.0"; }

//-----------------------------------------------------------------------------
rmos_status rmos_config_create(rmos_config** out)
{
  return Guard(
    [&]
    {
      Require(out != nullptr, "rmos_config_create: null output");
      *out = new rmos_config();
    });
}

void rmos_config_destroy(rmos_config* cfg) { delete cfg; }

rmos_status rmos_config_load(rmos_config* cfg, const char* path)
{
  return Guard(
    [&]
    {
      Require(cfg && path, "rmos_config_load: null argument");
      rangemos::PipelineConfig updated = cfg->cfg;
      rangemos::load_config_file(updated, path);
      cfg->cfg = std::move(updated);
    });
}

rmos_status rmos_config_set(rmos_config* cfg, const char* key, const char* value)
{
  return Guard(
    [&]
    {
      Require(cfg && key && value, "rmos_config_set: null argument");
      rangemos::PipelineConfig updated = cfg->cfg;
      rangemos::set_option(updated, key, value);
      cfg->cfg = std::move(updated);
    });
}

rmos_status rmos_config_get(const rmos_config* cfg, const char* key, char* buf, size_t cap, size_t* needed)
{
  return Guard(
    [&]
    {
      Require(cfg && key, "rmos_config_get: null argument");
      CopyOut(rangemos::get_option(cfg->cfg, key), buf, cap, needed);
    });
}

rmos_status rmos_config_validate(const rmos_config* cfg)
{
  return Guard(
    [&]
    {
      Require(cfg != nullptr, "rmos_config_validate: null config");
      cfg->cfg.validate();
    });
}

rmos_status rmos_config_dump(const rmos_config* cfg, char* buf, size_t cap, size_t* needed)
{
  return Guard(
    [&]
    {
      Require(cfg != nullptr, "rmos_config_dump: null config");
      CopyOut(rangemos::dump_config(cfg->cfg), buf, cap, needed);
    });
}

//-----------------------------------------------------------------------------
rmos_status rmos_cloud_read(const char* path, rmos_cloud** out)
{
  return Guard(
    [&]
    {
      Require(path && out, "rmos_cloud_read: null argument");
      auto cloud = std::make_unique<rmos_cloud>();
      cloud->cloud = rangemos::read_scan(path);
      *out = cloud.release();
    });
}

void rmos_cloud_destroy(rmos_cloud* cloud) { delete cloud; }

size_t rmos_cloud_size(const rmos_cloud* cloud) { return cloud ? cloud->cloud.size() : 0; }

rmos_status rmos_cloud_point(const rmos_cloud* cloud, size_t i, float xyzi[4])
{
  return Guard(
    [&]
    {
      Require(cloud && xyzi, "rmos_cloud_point: null argument");
      Require(i < cloud->cloud.size(), "rmos_cloud_point: index out of range");
      const rangemos::Point& p = cloud->cloud.points[i];
      xyzi[0] = p.x;
      xyzi[1] = p.y;
      xyzi[2] = p.z;
      xyzi[3] = p.intensity;
    });
}

//-----------------------------------------------------------------------------
rmos_status rmos_project(const rmos_cloud* cloud, const rmos_config* cfg, rmos_image** out)
{
  return Guard(
    [&]
    {
      Require(cloud && cfg && out, "rmos_project: null argument");
      auto img = std::make_unique<rmos_image>();
      img->image = rangemos::spherical_project(cloud->cloud, cfg->cfg.projection).image;
      *out = img.release();
    });
}

void rmos_image_destroy(rmos_image* img) { delete img; }

int rmos_image_width(const rmos_image* img) { return img ? img->image.width() : 0; }

int rmos_image_height(const rmos_image* img) { return img ? img->image.height() : 0; }

size_t rmos_image_valid_count(const rmos_image* img) { return img ? img->image.valid_count() : 0; }

rmos_status rmos_image_pixel(const rmos_image* img, int u, int v, int channel, float* value, int32_t* source_point)
{
  return Guard(
    [&]
    {
      Require(img && value, "rmos_image_pixel: null argument");
      const rangemos::RangeImage& r = img->image;
      Require(u >= 0 && v >= 0 && u < r.width() && v < r.height(), "rmos_image_pixel: pixel out of range");
      Require(channel >= 0 && channel <= 4, "rmos_image_pixel: channel must be 0..4");
      *value = r.channel(static_cast<rangemos::Channel>(channel))(u, v);
      if (source_point)
        *source_point = r.source_point(u, v);
    });
}

rmos_status rmos_image_write(const rmos_image* img, const char* path)
{
  return Guard(
    [&]
    {
      Require(img && path, "rmos_image_write: null argument");
      rangemos::write_range_image(img->image, path);
    });
}

//-----------------------------------------------------------------------------
rmos_status rmos_project_file(const rmos_config* cfg, const char* scan_path, const char* out_path)
{
  return Guard(
    [&]
    {
      Require(cfg && scan_path && out_path, "rmos_project_file: null argument");
      rangemos::run_project(cfg->cfg, scan_path, out_path);
    });
}

rmos_status rmos_associate(const rmos_config* cfg, size_t index, const char* out_dir, int zero_sentinel)
{
  return Guard(
    [&]
    {
      Require(cfg && out_dir, "rmos_associate: null argument");
      rangemos::run_associate(cfg->cfg, index, out_dir, zero_sentinel != 0);
    });
}

rmos_status rmos_residual(const rmos_config* cfg, size_t index, const char* out_dir)
{
  return Guard(
    [&]
    {
      Require(cfg && out_dir, "rmos_residual: null argument");
      rangemos::run_residual(cfg->cfg, index, out_dir);
    });
}

rmos_status rmos_render(const rmos_config* cfg, const char* mode, size_t index, const char* out_dir,
                        const char* labels_path)
{
  return Guard(
    [&]
    {
      Require(cfg && mode && out_dir, "rmos_render: null argument");
      std::optional<std::filesystem::path> labels;
      if (labels_path)
        labels = labels_path;
      rangemos::run_render(cfg->cfg, rangemos::parse_render_mode(mode), index, out_dir, labels);
    });
}

rmos_status rmos_synth(const rmos_config* cfg, const char* scene_path, size_t scans, double noise,
                       const char* out_dir)
{
  return Guard(
    [&]
    {
      Require(cfg && out_dir, "rmos_synth: null argument");
      rangemos::SceneConfig scene;
      if (scene_path)
      {
        scene = rangemos::load_scene_file(scene_path);
        if (noise >= 0.0)
          scene.range_noise = noise;
      }
      else
      {
        Require(noise >= 0.0, "rmos_synth: noise must be >= 0");
        scene = rangemos::SceneConfig::acceptance_scene(scans);
        scene.range_noise = noise;
        scene.seed = cfg->cfg.seed;
      }
      const auto generated = rangemos::generate(scene);
      rangemos::write_sequence(generated, out_dir);
    });
}

//-----------------------------------------------------------------------------
rmos_status rmos_segment(const rmos_config* cfg, rmos_report** out)
{
  return Guard(
    [&]
    {
      Require(cfg && out, "rmos_segment: null argument");
      *out = MakeReport(rangemos::run_segment(cfg->cfg));
    });
}

rmos_status rmos_evaluate(const rmos_config* cfg, const char* prediction_dir, rmos_report** out)
{
  return Guard(
    [&]
    {
      Require(cfg && prediction_dir && out, "rmos_evaluate: null argument");
      rangemos::SegmentReport segment;
      segment.evaluation = rangemos::run_evaluate(cfg->cfg, prediction_dir);
      for (const auto& s : segment.evaluation->scans)
        segment.outcomes.push_back({s.index, true, {}});
      *out = MakeReport(std::move(segment));
    });
}

void rmos_report_destroy(rmos_report* report) { delete report; }

size_t rmos_report_scans(const rmos_report* report) { return report ? report->segment.outcomes.size() : 0; }

size_t rmos_report_failed(const rmos_report* report) { return report ? report->failures.size() : 0; }

rmos_status rmos_report_failure(const rmos_report* report, size_t i, size_t* scan_index, const char** message)
{
  return Guard(
    [&]
    {
      Require(report != nullptr, "rmos_report_failure: null report");
      Require(i < report->failures.size(), "rmos_report_failure: index out of range");
      if (scan_index)
        *scan_index = report->failures[i].index;
      if (message)
        *message = report->failures[i].message.c_str();
    });
}

int rmos_report_aborted(const rmos_report* report) { return report && report->segment.aborted ? 1 : 0; }

int rmos_report_has_evaluation(const rmos_report* report)
{
  return report && report->segment.evaluation ? 1 : 0;
}

rmos_status rmos_report_counts(const rmos_report* report, uint64_t* tp, uint64_t* fp, uint64_t* fn, uint64_t* tn)
{
  return Guard(
    [&]
    {
      Require(report && report->segment.evaluation, "rmos_report_counts: report has no evaluation");
      const rangemos::ConfusionMatrix cm = report->segment.evaluation->overall();
      if (tp)
        *tp = cm.tp;
      if (fp)
        *fp = cm.fp;
      if (fn)
        *fn = cm.fn;
      if (tn)
        *tn = cm.tn;
    });
}

int rmos_report_iou(const rmos_report* report, double* iou)
{
  if (!report || !report->segment.evaluation)
    return 0;
  const auto value = rangemos::iou_moving(report->segment.evaluation->overall());
  if (!value)
    return 0;
  if (iou)
    *iou = *value;
  return 1;
}

const char* rmos_report_text(const rmos_report* report, int format)
{
  if (!report)
    return "";
  return format == 1 ? report->key_value.c_str() : report->text.c_str();
}

} // extern "C"
