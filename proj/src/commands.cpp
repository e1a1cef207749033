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

#include "rangemos/commands.hpp"
#include "rangemos/errors.hpp"
#include "rangemos/pipeline.hpp"
#include "rangemos/render.hpp"
#include "rangemos/residual.hpp"
#include "rangemos/scan_association.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace fs = std::filesystem;

namespace rangemos
{

namespace
{
void Put32(std::vector<char>& out, std::uint32_t value)
{
  for (int b = 0; b < 4; ++b)
    out.push_back(static_cast<char>((value >> (8 * b)) & 0xFFu));
}

std::uint32_t Get32(const std::vector<char>& in, std::size_t offset)
{
  std::uint32_t value = 0;
  for (int b = 0; b < 4; ++b)
    value |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[offset + static_cast<std::size_t>(b)])) << (8 * b);
  return value;
}

void WriteBytes(const fs::path& path, const std::vector<char>& bytes)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw IoError("cannot open for writing " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out)
    throw IoError("write failed: " + path.string());
}

void EnsureDir(const fs::path& dir)
{
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec)
    throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

std::string Stem(const SequenceFiles& files, std::size_t index) { return files.scans.at(index).stem().string(); }

// Loads scan `index` and its predecessors and runs the association step.
struct Associated
{
  Projection current;
  std::vector<std::size_t> previous_index;
  std::vector<Reprojection> reprojections;
};

Associated Associate(const PipelineConfig& cfg, const SequenceFiles& files, std::size_t index)
{
  if (index >= files.scans.size())
    throw ContractError("scan index " + std::to_string(index) + " out of range (" +
                        std::to_string(files.scans.size()) + " scans)");
  Associated out;
  out.current = spherical_project(read_scan(files.scans[index]), cfg.projection);
  std::vector<PreviousScan> previous;
  for (std::size_t i = 1; i <= static_cast<std::size_t>(cfg.n_prev) && i <= index; ++i)
  {
    const std::size_t j = index - i;
    previous.push_back({spherical_project(read_scan(files.scans[j]), cfg.projection).image,
                        relative_pose(files.poses[j], files.poses[index])});
    out.previous_index.push_back(j);
  }
  out.reprojections = associate_sequence(out.current.image, previous, cfg.projection);
  return out;
}
} // namespace

//-----------------------------------------------------------------------------
void write_range_image(const RangeImage& img, const fs::path& path)
{
  std::vector<char> bytes{'R', 'I', 'M', 'G'};
  Put32(bytes, static_cast<std::uint32_t>(img.width()));
  Put32(bytes, static_cast<std::uint32_t>(img.height()));
  for (const Grid<float>* plane : {&img.range, &img.x, &img.y, &img.z, &img.intensity})
    for (float v : plane->data())
      Put32(bytes, std::bit_cast<std::uint32_t>(v));
  for (std::int32_t v : img.source_point.data())
    Put32(bytes, std::bit_cast<std::uint32_t>(v));
  WriteBytes(path, bytes);
}

RangeImage read_range_image(const fs::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open " + path.string());
  const std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIMG", 4) != 0)
    throw FormatError(path.string() + ": not a range image file");
  const auto w = static_cast<int>(Get32(bytes, 4));
  const auto h = static_cast<int>(Get32(bytes, 8));
  const std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  if (w < 1 || h < 1 || bytes.size() != 12 + 24 * n)
    throw FormatError(path.string() + ": size does not match header");

  ProjectionConfig cfg;
  cfg.width = w;
  cfg.height = h;
  RangeImage img = RangeImage::blank(cfg);
  std::size_t offset = 12;
  for (Grid<float>* plane : {&img.range, &img.x, &img.y, &img.z, &img.intensity})
    for (float& v : plane->data())
    {
      v = std::bit_cast<float>(Get32(bytes, offset));
      offset += 4;
    }
  std::int32_t max_point = -1;
  for (std::size_t q = 0; q < n; ++q, offset += 4)
  {
    img.source_point[q] = std::bit_cast<std::int32_t>(Get32(bytes, offset));
    img.valid[q] = img.source_point[q] >= 0 ? 1 : 0;
    max_point = std::max(max_point, img.source_point[q]);
  }
  img.source_size = static_cast<std::size_t>(max_point + 1);
  return img;
}

RangeImage run_project(const PipelineConfig& cfg, const fs::path& scan, const fs::path& out_file)
{
  Projection proj = spherical_project(read_scan(scan), cfg.projection);
  if (out_file.has_parent_path())
    EnsureDir(out_file.parent_path());
  write_range_image(proj.image, out_file);
  return std::move(proj.image);
}

std::vector<fs::path> run_associate(const PipelineConfig& cfg, std::size_t index, const fs::path& out_dir,
                                    bool zero_sentinel)
{
  cfg.validate();
  const SequenceFiles files = SequenceFiles::discover(cfg, false);
  const Associated assoc = Associate(cfg, files, index);
  EnsureDir(out_dir);
  std::vector<fs::path> written;
  for (std::size_t k = 0; k < assoc.reprojections.size(); ++k)
  {
    const std::string tag = Stem(files, index) + "_" + Stem(files, assoc.previous_index[k]);
    const fs::path map_path = out_dir / ("assoc_" + tag + ".bin");
    const fs::path img_path = out_dir / ("reprojected_" + tag + ".rimg");
    assoc.reprojections[k].map.write(map_path, zero_sentinel);
    write_range_image(assoc.reprojections[k].image, img_path);
    written.push_back(map_path);
    written.push_back(img_path);
  }
  return written;
}

std::vector<fs::path> run_residual(const PipelineConfig& cfg, std::size_t index, const fs::path& out_dir)
{
  cfg.validate();
  const SequenceFiles files = SequenceFiles::discover(cfg, false);
  const Associated assoc = Associate(cfg, files, index);
  EnsureDir(out_dir);
  std::vector<fs::path> written;
  for (std::size_t k = 0; k < assoc.reprojections.size(); ++k)
  {
    const ResidualImage res = range_residual(assoc.current.image, assoc.reprojections[k].image);
    std::vector<char> bytes;
    for (float v : res.values.data())
      Put32(bytes, std::bit_cast<std::uint32_t>(v));
    const fs::path path =
      out_dir / ("residual_" + Stem(files, index) + "_" + Stem(files, assoc.previous_index[k]) + ".bin");
    WriteBytes(path, bytes);
    written.push_back(path);
  }
  return written;
}

RenderMode parse_render_mode(const std::string& name)
{
  if (name == "range")
    return RenderMode::Range;
  if (name == "residual")
    return RenderMode::Residual;
  if (name == "labels")
    return RenderMode::Labels;
  if (name == "association")
    return RenderMode::Association;
  throw ContractError("unknown render mode '" + name + "' (expected range, residual, labels or association)");
}

std::vector<fs::path> run_render(const PipelineConfig& cfg, RenderMode mode, std::size_t index,
                                 const fs::path& out_dir, const std::optional<fs::path>& labels)
{
  cfg.validate();
  const SequenceFiles files = SequenceFiles::discover(cfg, false);
  if (index >= files.scans.size())
    throw ContractError("scan index " + std::to_string(index) + " out of range");
  EnsureDir(out_dir);
  const std::string stem = Stem(files, index);
  std::vector<fs::path> written;
  std::vector<std::pair<std::string, Normalization>> bounds;
  auto emit = [&](const Rgb8Image& img, const std::string& name, std::optional<Normalization> norm)
  {
    const fs::path path = out_dir / (name + ".png");
    write_png(img, path);
    written.push_back(path);
    if (norm)
      bounds.emplace_back(name, *norm);
  };

  switch (mode)
  {
    case RenderMode::Range:
    {
      const Projection proj = spherical_project(read_scan(files.scans[index]), cfg.projection);
      const std::pair<const char*, Channel> channels[] = {{"range", Channel::Range},
                                                          {"x", Channel::X},
                                                          {"y", Channel::Y},
                                                          {"z", Channel::Z},
                                                          {"intensity", Channel::Intensity}};
      for (const auto& [name, channel] : channels)
      {
        const Grid<float>& values = proj.image.channel(channel);
        const Normalization norm = min_max(values, proj.image.valid);
        emit(render_scalar(values, proj.image.valid, norm), stem + "_" + name, norm);
      }
      break;
    }
    case RenderMode::Residual:
    {
      const Associated assoc = Associate(cfg, files, index);
      for (std::size_t k = 0; k < assoc.reprojections.size(); ++k)
      {
        const ResidualImage res = range_residual(assoc.current.image, assoc.reprojections[k].image);
        const Normalization norm{0.0, kResidualRenderClip};
        emit(render_scalar(res.values, res.valid, norm),
             "residual_" + stem + "_" + Stem(files, assoc.previous_index[k]), norm);
      }
      break;
    }
    case RenderMode::Labels:
    {
      const PointCloud cloud = read_scan(files.scans[index]);
      fs::path label_path;
      if (labels)
        label_path = *labels;
      else if (!files.labels.empty())
        label_path = files.labels[index];
      else
        throw IoError("labels mode needs a label file");
      const LabelArray raw = read_labels(label_path);
      check_pairing(cloud, raw, label_path.string());
      const Projection proj = spherical_project(cloud, cfg.projection);
      Grid<std::uint8_t> moving(proj.image.width(), proj.image.height(), 0);
      for (std::size_t q = 0; q < moving.size(); ++q)
      {
        if (!proj.image.valid[q])
          continue;
        const std::uint32_t id = semantic_id(raw[static_cast<std::size_t>(proj.image.source_point[q])]);
        moving[q] = (id == cfg.moving_output_id || cfg.classes.is_moving(id)) ? 1 : 0;
      }
      emit(render_labels(proj.image, moving), stem + "_labels", min_max(proj.image.range, proj.image.valid));
      break;
    }
    case RenderMode::Association:
    {
      const Associated assoc = Associate(cfg, files, index);
      for (std::size_t k = 0; k < assoc.reprojections.size(); ++k)
        emit(render_association(assoc.reprojections[k].map),
             "association_" + stem + "_" + Stem(files, assoc.previous_index[k]), std::nullopt);
      break;
    }
  }
  if (!bounds.empty())
  {
    const fs::path sidecar = out_dir / (stem + "_normalization.txt");
    write_normalization_sidecar(bounds, sidecar);
    written.push_back(sidecar);
  }
  return written;
}

} // namespace rangemos
