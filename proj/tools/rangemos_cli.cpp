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

// Command-line front end. Talks to the library through the C interface only.

#include "rangemos/rangemos.h"

#include "CLI11.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace fs = std::filesystem;

namespace
{

constexpr int kExitFailure = 1;

struct ApiError
{
  rmos_status status;
  std::string message;
};

void Check(rmos_status status)
{
  if (status != RMOS_OK)
    throw ApiError{status, rmos_last_error()};
}

struct ConfigHandle
{
  rmos_config* ptr = nullptr;
  ConfigHandle() { Check(rmos_config_create(&ptr)); }
  ~ConfigHandle() { rmos_config_destroy(ptr); }
  ConfigHandle(const ConfigHandle&) = delete;
  ConfigHandle& operator=(const ConfigHandle&) = delete;
};

struct ReportHandle
{
  rmos_report* ptr = nullptr;
  ~ReportHandle() { rmos_report_destroy(ptr); }
};

std::string Quote(const std::string& s)
{
  std::string out = "\"";
  for (char c : s)
  {
    if (c == '"' || c == '\\')
      out += '\\';
    out += c;
  }
  return out + "\"";
}

// Options shared by every command; unset ones leave the config untouched.
struct CommonOptions
{
  std::string config_file;
  std::vector<std::string> overrides;
  std::optional<std::string> seq_dir, poses, calib, out;
  std::optional<int> n_prev, width, height, knn_k, knn_window, threads;
  std::optional<double> fov_up, fov_down, tau, knn_cutoff;
  std::optional<std::uint64_t> seed;
  bool use_residual = false;
  bool no_knn = false;
  bool evaluate = false;
  bool strict = false;

  void attach(CLI::App& app)
  {
    app.add_option("--config", config_file, "JSON config file layered over the defaults")->check(CLI::ExistingFile);
    app.add_option("--set", overrides, "Override one config key, e.g. --set knn.k=7");
    app.add_option("--seq-dir", seq_dir, "Sequence directory");
    app.add_option("--poses", poses, "Pose file (relative to the sequence directory unless absolute)");
    app.add_option("--calib", calib, "Calibration file (relative to the sequence directory unless absolute)");
    app.add_option("--out", out, "Output directory");
    app.add_option("--n-prev", n_prev, "Number of previous scans");
    app.add_option("--width", width, "Range image width");
    app.add_option("--height", height, "Range image height");
    app.add_option("--fov-up", fov_up, "Upper vertical field of view, degrees");
    app.add_option("--fov-down", fov_down, "Lower vertical field of view, degrees");
    app.add_option("--tau", tau, "Residual threshold");
    app.add_flag("--use-residual", use_residual, "Require the range residual to exceed tau");
    app.add_option("--knn-k", knn_k, "kNN neighbour count");
    app.add_option("--knn-window", knn_window, "kNN search window (odd)");
    app.add_option("--knn-cutoff", knn_cutoff, "kNN range-gap cutoff, meters");
    app.add_flag("--no-knn", no_knn, "Skip kNN refinement");
    app.add_flag("--evaluate", evaluate, "Score predictions against the sequence labels");
    app.add_flag("--strict", strict, "Stop at the first failed scan and exit nonzero");
    app.add_option("--seed", seed, "Random seed");
    app.add_option("--threads", threads, "Worker threads (0: one per core)");
  }

  void apply(rmos_config* cfg) const
  {
    if (!config_file.empty())
      Check(rmos_config_load(cfg, config_file.c_str()));
    for (const std::string& kv : overrides)
    {
      const auto eq = kv.find('=');
      if (eq == std::string::npos)
        throw ApiError{RMOS_ERR_CONTRACT, "--set expects KEY=VALUE, got '" + kv + "'"};
      Check(rmos_config_set(cfg, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()));
    }
    auto set = [&](const char* key, const std::string& value) { Check(rmos_config_set(cfg, key, value.c_str())); };
    auto num = [](auto v)
    {
      std::ostringstream s;
      s.precision(17);
      s << v;
      return s.str();
    };
    if (seq_dir)
      set("sequence.dir", Quote(*seq_dir));
    if (poses)
      set("sequence.poses", Quote(*poses));
    if (calib)
      set("sequence.calib", Quote(*calib));
    if (out)
      set("output.dir", Quote(*out));
    if (n_prev)
      set("pipeline.n_prev", num(*n_prev));
    if (width)
      set("projection.width", num(*width));
    if (height)
      set("projection.height", num(*height));
    if (fov_up)
      set("projection.fov_up_deg", num(*fov_up));
    if (fov_down)
      set("projection.fov_down_deg", num(*fov_down));
    if (tau)
      set("classifier.tau", num(*tau));
    if (use_residual)
      set("classifier.use_residual", "true");
    if (knn_k)
      set("knn.k", num(*knn_k));
    if (knn_window)
      set("knn.window", num(*knn_window));
    if (knn_cutoff)
      set("knn.cutoff", num(*knn_cutoff));
    if (no_knn)
      set("knn.enabled", "false");
    if (evaluate)
      set("pipeline.evaluate", "true");
    if (strict)
      set("pipeline.strict", "true");
    if (seed)
      set("pipeline.seed", num(*seed));
    if (threads)
      set("pipeline.threads", num(*threads));
  }
};

std::string GetOption(const rmos_config* cfg, const char* key)
{
  size_t needed = 0;
  Check(rmos_config_get(cfg, key, nullptr, 0, &needed));
  std::string text(needed + 1, '\0');
  Check(rmos_config_get(cfg, key, text.data(), text.size(), &needed));
  text.resize(needed);
  return text;
}

void WriteText(const fs::path& path, const std::string& text)
{
  std::ofstream out(path);
  out << text;
  if (!out)
    throw ApiError{RMOS_ERR_IO, "cannot write " + path.string()};
}

int ReportFailures(const rmos_report* report)
{
  const size_t failed = rmos_report_failed(report);
  for (size_t i = 0; i < failed; ++i)
  {
    size_t index = 0;
    const char* message = nullptr;
    Check(rmos_report_failure(report, i, &index, &message));
    std::cerr << "rangemos: scan " << index << " failed: " << message << '\n';
  }
  if (rmos_report_aborted(report))
    std::cerr << "rangemos: stopped after the first failure (--strict)\n";
  return static_cast<int>(failed);
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Range-image moving object segmentation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(rmos_version()));

  CommonOptions common;
  auto add = [&](const char* name, const char* help)
  {
    CLI::App* sub = app.add_subcommand(name, help);
    common.attach(*sub);
    return sub;
  };

  std::string scan_path;
  std::size_t index = 0;
  bool zero_sentinel = false;
  std::string render_mode = "range";
  std::string labels_path;
  std::string predictions;
  bool key_value = false;
  std::string scene_path;
  std::size_t synth_scans = 10;
  double synth_noise = -1.0;

  CLI::App* project = add("project", "Project one scan to a range image file");
  project->add_option("scan", scan_path, "Scan file (.bin)")->required()->check(CLI::ExistingFile);

  CLI::App* associate = add("associate", "Association maps of one scan against its predecessors");
  associate->add_option("--index", index, "Scan index")->required();
  associate->add_flag("--zero-sentinel", zero_sentinel, "Write absent entries as 0 instead of -1");

  CLI::App* residual = add("residual", "Range residual images of one scan");
  residual->add_option("--index", index, "Scan index")->required();

  CLI::App* segment = add("segment", "Segment a sequence into moving and static points");

  CLI::App* evaluate = add("evaluate", "Score prediction files against ground truth");
  evaluate->add_option("--pred", predictions, "Prediction directory (default: the output directory)");
  evaluate->add_flag("--kv", key_value, "Print key=value lines instead of the text report");

  CLI::App* render = add("render", "Render range, residual, label or association images to PNG");
  render->add_option("--mode", render_mode, "range, residual, labels or association");
  render->add_option("--index", index, "Scan index")->required();
  render->add_option("--labels", labels_path, "Label file for labels mode (default: the sequence labels)");

  CLI::App* synth = add("synth", "Write a synthetic sequence with exact ground truth");
  synth->add_option("--scene", scene_path, "JSON scene description (default: built-in scene)")
    ->check(CLI::ExistingFile);
  synth->add_option("--scans", synth_scans, "Scan count for the built-in scene");
  synth->add_option("--noise", synth_noise, "Range noise sigma, meters");

  CLI::App* config = add("config", "Configuration utilities");
  CLI::App* dump = config->add_subcommand("dump", "Print the effective configuration as JSON");
  config->require_subcommand(1);
  dump->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try
  {
    ConfigHandle cfg;
    common.apply(cfg.ptr);
    Check(rmos_config_validate(cfg.ptr));

    if (dump->parsed())
    {
      size_t needed = 0;
      Check(rmos_config_dump(cfg.ptr, nullptr, 0, &needed));
      std::string text(needed + 1, '\0');
      Check(rmos_config_dump(cfg.ptr, text.data(), text.size(), &needed));
      text.resize(needed);
      std::cout << text << '\n';
      return 0;
    }

    const std::string out_dir = GetOption(cfg.ptr, "output.dir");

    if (project->parsed())
    {
      const fs::path target = fs::path(out_dir) / (fs::path(scan_path).stem().string() + ".rimg");
      Check(rmos_project_file(cfg.ptr, scan_path.c_str(), target.c_str()));
      std::cout << target.string() << '\n';
    }
    else if (associate->parsed())
    {
      Check(rmos_associate(cfg.ptr, index, out_dir.c_str(), zero_sentinel ? 1 : 0));
    }
    else if (residual->parsed())
    {
      Check(rmos_residual(cfg.ptr, index, out_dir.c_str()));
    }
    else if (render->parsed())
    {
      Check(rmos_render(cfg.ptr, render_mode.c_str(), index, out_dir.c_str(),
                        labels_path.empty() ? nullptr : labels_path.c_str()));
    }
    else if (synth->parsed())
    {
      const double noise = scene_path.empty() && synth_noise < 0.0 ? 0.0 : synth_noise;
      Check(rmos_synth(cfg.ptr, scene_path.empty() ? nullptr : scene_path.c_str(), synth_scans, noise,
                       out_dir.c_str()));
    }
    else if (segment->parsed())
    {
      ReportHandle report;
      Check(rmos_segment(cfg.ptr, &report.ptr));
      const int failed = ReportFailures(report.ptr);
      std::cerr << "rangemos: " << rmos_report_scans(report.ptr) << " scans, " << failed << " failed\n";
      if (rmos_report_has_evaluation(report.ptr))
      {
        std::cout << rmos_report_text(report.ptr, 0);
        WriteText(fs::path(out_dir) / "evaluation.txt", rmos_report_text(report.ptr, 0));
        WriteText(fs::path(out_dir) / "evaluation.kv", rmos_report_text(report.ptr, 1));
      }
      if (GetOption(cfg.ptr, "pipeline.strict") == "true" && failed > 0)
        return kExitFailure;
    }
    else if (evaluate->parsed())
    {
      ReportHandle report;
      const std::string dir = predictions.empty() ? out_dir : predictions;
      Check(rmos_evaluate(cfg.ptr, dir.c_str(), &report.ptr));
      std::cout << rmos_report_text(report.ptr, key_value ? 1 : 0);
    }
  }
  catch (const ApiError& e)
  {
    std::cerr << "rangemos: error: " << e.message << '\n';
    return kExitFailure;
  }
  return 0;
}
