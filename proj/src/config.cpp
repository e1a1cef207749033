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

#include "rangemos/config.hpp"
#include "rangemos/errors.hpp"

#include <fstream>

using nlohmann::json;

namespace rangemos
{

namespace
{
//-----------------------------------------------------------------------------
// Reads j[key] into out when present; type errors surface as ContractError.
template <typename T>
void Read(const json& j, const char* key, T& out, const std::string& section)
{
  const auto it = j.find(key);
  if (it == j.end())
    return;
  try
  {
    out = it->get<T>();
  }
  catch (const json::exception& e)
  {
    throw ContractError("config " + section + "." + key + ": " + e.what());
  }
}

void CheckKeys(const json& j, std::initializer_list<const char*> allowed, const std::string& section)
{
  if (!j.is_object())
    throw ContractError("config " + section + ": expected an object");
  for (const auto& [key, value] : j.items())
  {
    bool known = false;
    for (const char* a : allowed)
      known = known || key == a;
    if (!known)
      throw ContractError("config: unknown key " + (section.empty() ? key : section + "." + key));
  }
}

const char* ToString(NoCorrespondencePolicy p) { return p == NoCorrespondencePolicy::Static ? "static" : "unknown"; }
const char* ToString(KnnWeighting w) { return w == KnnWeighting::Uniform ? "uniform" : "inverse_range_gap"; }

json VecToJson(const Eigen::Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); }
Eigen::Vector3d VecFromJson(const json& j)
{
  if (!j.is_array() || j.size() != 3)
    throw ContractError("scene: expected a 3-vector");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json BoxToJson(const Box& b)
{
  return {{"center", VecToJson(b.center)}, {"size", VecToJson(b.size)}, {"semantic_id", b.semantic_id},
          {"intensity", b.intensity}};
}

Box BoxFromJson(const json& j)
{
  CheckKeys(j, {"center", "size", "semantic_id", "intensity", "velocity"}, "scene.box");
  Box b;
  if (j.contains("center"))
    b.center = VecFromJson(j["center"]);
  if (j.contains("size"))
    b.size = VecFromJson(j["size"]);
  Read(j, "semantic_id", b.semantic_id, "scene.box");
  Read(j, "intensity", b.intensity, "scene.box");
  return b;
}
} // namespace

//-----------------------------------------------------------------------------
std::filesystem::path SequencePaths::resolve(const std::string& entry) const
{
  const std::filesystem::path p(entry);
  return p.is_absolute() ? p : dir / p;
}

void PipelineConfig::validate() const
{
  projection.validate();
  classifier.validate();
  knn.validate();
  classes.validate();
  if (n_prev < 1)
    throw ContractError("config: n_prev must be >= 1");
  if (threads < 0)
    throw ContractError("config: threads must be >= 0");
  if (static_output_id == moving_output_id)
    throw ContractError("config: static and moving output ids must differ");
}

json to_json(const PipelineConfig& cfg)
{
  json counterparts = json::object();
  for (const auto& [moving, resting] : cfg.classes.static_counterpart)
    counterparts[std::to_string(moving)] = resting;

  return {
    {"projection",
     {{"width", cfg.projection.width},
      {"height", cfg.projection.height},
      {"fov_up_deg", rad2deg(cfg.projection.fov_up)},
      {"fov_down_deg", rad2deg(cfg.projection.fov_down)},
      {"min_range", cfg.projection.min_range},
      {"invalid_range", cfg.projection.invalid_range},
      {"invalid_fill", cfg.projection.invalid_fill}}},
    {"classifier",
     {{"tau", cfg.classifier.residual_threshold},
      {"use_residual", cfg.classifier.use_residual},
      {"movable_only", cfg.classifier.movable_only},
      {"no_correspondence", ToString(cfg.classifier.no_correspondence)},
      {"vote_min", cfg.classifier.vote_min}}},
    {"knn",
     {{"enabled", cfg.knn_enabled},
      {"k", cfg.knn.k},
      {"window", cfg.knn.window},
      {"cutoff", cfg.knn.range_cutoff},
      {"weighting", ToString(cfg.knn.weighting)}}},
    {"classes",
     {{"moving", cfg.classes.moving_class_ids},
      {"movable", cfg.classes.movable_class_ids},
      {"static_counterpart", counterparts}}},
    {"sequence",
     {{"dir", cfg.sequence.dir.string()},
      {"scans", cfg.sequence.scans},
      {"labels", cfg.sequence.labels},
      {"semantics", cfg.sequence.semantics},
      {"poses", cfg.sequence.poses},
      {"calib", cfg.sequence.calib},
      {"calib_key", cfg.sequence.calib_key}}},
    {"output",
     {{"dir", cfg.out_dir.string()}, {"static_id", cfg.static_output_id}, {"moving_id", cfg.moving_output_id}}},
    {"pipeline",
     {{"n_prev", cfg.n_prev},
      {"evaluate", cfg.evaluate},
      {"strict", cfg.strict},
      {"seed", cfg.seed},
      {"threads", cfg.threads}}},
  };
}

void apply_json(PipelineConfig& cfg, const json& j)
{
  CheckKeys(j, {"projection", "classifier", "knn", "classes", "sequence", "output", "pipeline"}, "");

  if (const auto it = j.find("projection"); it != j.end())
  {
    const json& p = *it;
    CheckKeys(p, {"width", "height", "fov_up_deg", "fov_down_deg", "min_range", "invalid_range", "invalid_fill"},
              "projection");
    Read(p, "width", cfg.projection.width, "projection");
    Read(p, "height", cfg.projection.height, "projection");
    double deg = rad2deg(cfg.projection.fov_up);
    Read(p, "fov_up_deg", deg, "projection");
    cfg.projection.fov_up = deg2rad(deg);
    deg = rad2deg(cfg.projection.fov_down);
    Read(p, "fov_down_deg", deg, "projection");
    cfg.projection.fov_down = deg2rad(deg);
    Read(p, "min_range", cfg.projection.min_range, "projection");
    Read(p, "invalid_range", cfg.projection.invalid_range, "projection");
    Read(p, "invalid_fill", cfg.projection.invalid_fill, "projection");
  }
  if (const auto it = j.find("classifier"); it != j.end())
  {
    const json& c = *it;
    CheckKeys(c, {"tau", "use_residual", "movable_only", "no_correspondence", "vote_min"}, "classifier");
    Read(c, "tau", cfg.classifier.residual_threshold, "classifier");
    Read(c, "use_residual", cfg.classifier.use_residual, "classifier");
    Read(c, "movable_only", cfg.classifier.movable_only, "classifier");
    Read(c, "vote_min", cfg.classifier.vote_min, "classifier");
    std::string policy = ToString(cfg.classifier.no_correspondence);
    Read(c, "no_correspondence", policy, "classifier");
    if (policy == "static")
      cfg.classifier.no_correspondence = NoCorrespondencePolicy::Static;
    else if (policy == "unknown")
      cfg.classifier.no_correspondence = NoCorrespondencePolicy::Unknown;
    else
      throw ContractError("config classifier.no_correspondence: expected static or unknown");
  }
  if (const auto it = j.find("knn"); it != j.end())
  {
    const json& k = *it;
    CheckKeys(k, {"enabled", "k", "window", "cutoff", "weighting"}, "knn");
    Read(k, "enabled", cfg.knn_enabled, "knn");
    Read(k, "k", cfg.knn.k, "knn");
    Read(k, "window", cfg.knn.window, "knn");
    Read(k, "cutoff", cfg.knn.range_cutoff, "knn");
    std::string weighting = ToString(cfg.knn.weighting);
    Read(k, "weighting", weighting, "knn");
    if (weighting == "uniform")
      cfg.knn.weighting = KnnWeighting::Uniform;
    else if (weighting == "inverse_range_gap")
      cfg.knn.weighting = KnnWeighting::InverseRangeGap;
    else
      throw ContractError("config knn.weighting: expected uniform or inverse_range_gap");
  }
  if (const auto it = j.find("classes"); it != j.end())
  {
    const json& c = *it;
    CheckKeys(c, {"moving", "movable", "static_counterpart"}, "classes");
    Read(c, "moving", cfg.classes.moving_class_ids, "classes");
    Read(c, "movable", cfg.classes.movable_class_ids, "classes");
    if (const auto sc = c.find("static_counterpart"); sc != c.end())
    {
      if (!sc->is_object())
        throw ContractError("config classes.static_counterpart: expected an object");
      cfg.classes.static_counterpart.clear();
      for (const auto& [key, value] : sc->items())
      {
        try
        {
          cfg.classes.static_counterpart[static_cast<std::uint32_t>(std::stoul(key))] = value.get<std::uint32_t>();
        }
        catch (const std::exception& e)
        {
          throw ContractError("config classes.static_counterpart." + key + ": " + e.what());
        }
      }
    }
  }
  if (const auto it = j.find("sequence"); it != j.end())
  {
    const json& s = *it;
    CheckKeys(s, {"dir", "scans", "labels", "semantics", "poses", "calib", "calib_key"}, "sequence");
    std::string dir = cfg.sequence.dir.string();
    Read(s, "dir", dir, "sequence");
    cfg.sequence.dir = dir;
    Read(s, "scans", cfg.sequence.scans, "sequence");
    Read(s, "labels", cfg.sequence.labels, "sequence");
    Read(s, "semantics", cfg.sequence.semantics, "sequence");
    Read(s, "poses", cfg.sequence.poses, "sequence");
    Read(s, "calib", cfg.sequence.calib, "sequence");
    Read(s, "calib_key", cfg.sequence.calib_key, "sequence");
  }
  if (const auto it = j.find("output"); it != j.end())
  {
    const json& o = *it;
    CheckKeys(o, {"dir", "static_id", "moving_id"}, "output");
    std::string dir = cfg.out_dir.string();
    Read(o, "dir", dir, "output");
    cfg.out_dir = dir;
    Read(o, "static_id", cfg.static_output_id, "output");
    Read(o, "moving_id", cfg.moving_output_id, "output");
  }
  if (const auto it = j.find("pipeline"); it != j.end())
  {
    const json& p = *it;
    CheckKeys(p, {"n_prev", "evaluate", "strict", "seed", "threads"}, "pipeline");
    Read(p, "n_prev", cfg.n_prev, "pipeline");
    Read(p, "evaluate", cfg.evaluate, "pipeline");
    Read(p, "strict", cfg.strict, "pipeline");
    Read(p, "seed", cfg.seed, "pipeline");
    Read(p, "threads", cfg.threads, "pipeline");
  }
}

void load_config_file(PipelineConfig& cfg, const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in)
    throw IoError("cannot open config " + path.string());
  json j;
  try
  {
    j = json::parse(in, nullptr, true, true);
  }
  catch (const json::exception& e)
  {
    throw FormatError(path.string() + ": " + e.what());
  }
  apply_json(cfg, j);
}

void set_option(PipelineConfig& cfg, const std::string& key, const std::string& value)
{
  const auto dot = key.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == key.size())
    throw ContractError("config key must look like section.name: " + key);

  // Numbers, booleans and arrays parse as JSON; anything else is a string.
  json parsed = json::parse(value, nullptr, false);
  if (parsed.is_discarded() || parsed.is_object())
    parsed = value;
  json patch;
  patch[key.substr(0, dot)][key.substr(dot + 1)] = parsed;
  apply_json(cfg, patch);
}

std::string get_option(const PipelineConfig& cfg, const std::string& key)
{
  const auto dot = key.find('.');
  const json all = to_json(cfg);
  if (dot == std::string::npos)
    throw ContractError("config key must look like section.name: " + key);
  const auto section = all.find(key.substr(0, dot));
  if (section == all.end() || !section->contains(key.substr(dot + 1)))
    throw ContractError("config: unknown key " + key);
  const json& value = section->at(key.substr(dot + 1));
  return value.is_string() ? value.get<std::string>() : value.dump();
}

std::string dump_config(const PipelineConfig& cfg)
{
  return to_json(cfg).dump(2) + "\n";
}

//-----------------------------------------------------------------------------
json scene_to_json(const SceneConfig& scene)
{
  json statics = json::array();
  for (const Box& b : scene.static_boxes)
    statics.push_back(BoxToJson(b));
  json movers = json::array();
  for (const MovingBox& m : scene.moving_boxes)
  {
    json b = BoxToJson(m.box);
    b["velocity"] = VecToJson(m.velocity);
    movers.push_back(b);
  }
  json trajectory = json::array();
  for (const SE3Pose& p : scene.trajectory)
  {
    json rows = json::array();
    const Eigen::Matrix4d m = p.matrix();
    for (int r = 0; r < 3; ++r)
      rows.push_back(json::array({m(r, 0), m(r, 1), m(r, 2), m(r, 3)}));
    trajectory.push_back(rows);
  }
  return {{"ground_extent", scene.ground_extent},
          {"ground_id", scene.ground_id},
          {"static_boxes", statics},
          {"moving_boxes", movers},
          {"trajectory", trajectory},
          {"beams",
           {{"rings", scene.beams.rings},
            {"azimuth_steps", scene.beams.azimuth_steps},
            {"fov_up_deg", rad2deg(scene.beams.fov_up)},
            {"fov_down_deg", rad2deg(scene.beams.fov_down)}}},
          {"max_range", scene.max_range},
          {"range_noise", scene.range_noise},
          {"seed", scene.seed}};
}

SceneConfig scene_from_json(const json& j)
{
  CheckKeys(j,
            {"ground_extent", "ground_id", "static_boxes", "moving_boxes", "trajectory", "beams", "max_range",
             "range_noise", "seed"},
            "scene");
  SceneConfig scene;
  Read(j, "ground_extent", scene.ground_extent, "scene");
  Read(j, "ground_id", scene.ground_id, "scene");
  Read(j, "max_range", scene.max_range, "scene");
  Read(j, "range_noise", scene.range_noise, "scene");
  Read(j, "seed", scene.seed, "scene");
  if (const auto it = j.find("static_boxes"); it != j.end())
    for (const json& b : *it)
      scene.static_boxes.push_back(BoxFromJson(b));
  if (const auto it = j.find("moving_boxes"); it != j.end())
  {
    for (const json& b : *it)
    {
      MovingBox m{BoxFromJson(b), Eigen::Vector3d::Zero()};
      if (b.contains("velocity"))
        m.velocity = VecFromJson(b["velocity"]);
      scene.moving_boxes.push_back(m);
    }
  }
  if (const auto it = j.find("trajectory"); it != j.end())
  {
    for (const json& rows : *it)
    {
      if (!rows.is_array() || rows.size() != 3)
        throw ContractError("scene.trajectory: each pose is three rows of four numbers");
      Eigen::Matrix<double, 3, 4> m;
      for (int r = 0; r < 3; ++r)
      {
        if (!rows[r].is_array() || rows[r].size() != 4)
          throw ContractError("scene.trajectory: each pose is three rows of four numbers");
        for (int c = 0; c < 4; ++c)
          m(r, c) = rows[r][c].get<double>();
      }
      scene.trajectory.push_back(SE3Pose::from_matrix(m));
    }
  }
  if (const auto it = j.find("beams"); it != j.end())
  {
    const json& b = *it;
    CheckKeys(b, {"rings", "azimuth_steps", "fov_up_deg", "fov_down_deg"}, "scene.beams");
    Read(b, "rings", scene.beams.rings, "scene.beams");
    Read(b, "azimuth_steps", scene.beams.azimuth_steps, "scene.beams");
    double deg = rad2deg(scene.beams.fov_up);
    Read(b, "fov_up_deg", deg, "scene.beams");
    scene.beams.fov_up = deg2rad(deg);
    deg = rad2deg(scene.beams.fov_down);
    Read(b, "fov_down_deg", deg, "scene.beams");
    scene.beams.fov_down = deg2rad(deg);
  }
  scene.validate();
  return scene;
}

SceneConfig load_scene_file(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in)
    throw IoError("cannot open scene " + path.string());
  try
  {
    return scene_from_json(json::parse(in, nullptr, true, true));
  }
  catch (const json::exception& e)
  {
    throw FormatError(path.string() + ": " + e.what());
  }
}

} // namespace rangemos
