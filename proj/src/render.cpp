// SPDX-FileCopyrightText: 2026 blobfield authors
// SPDX-License-Identifier: Apache-2.0

#include "blobfield/render.hpp"

#include "blobfield/error.hpp"
#include "blobfield/png_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <set>

namespace blobfield {

std::string_view to_string(RenderMode mode) {
  switch (mode) {
    case RenderMode::Layout: return "layout";
    case RenderMode::Weights: return "weights";
    case RenderMode::Features: return "features";
    case RenderMode::Styles: return "styles";
  }
  return "unknown";
}

std::optional<RenderMode> parse_render_mode(std::string_view name) {
  for (RenderMode m : {RenderMode::Layout, RenderMode::Weights, RenderMode::Features, RenderMode::Styles}) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

namespace {

SamplingConfig sampling_for(const Camera& camera, const RenderSettings& settings) {
  SamplingConfig cfg = SamplingConfig::for_camera(camera, settings.samples_per_ray);
  cfg.stratified_seed = settings.stratified_seed;
  return cfg;
}

}  // namespace

RenderOutput render(const SceneLayout& scene, const Camera& camera, RenderMode mode, const RenderSettings& settings) {
  if (mode == RenderMode::Styles) {
    const OpacityHierarchy h = render_hierarchy(
        scene, camera, settings, UpsamplerParams::zero_init(1, scene.feature_dim));
    const StyleGridSet styles = hierarchy_style_grids(scene, h);
    Bg3dTensor t;
    for (const Grid& g : styles.levels) t.add("style_" + std::to_string(g.height()), g);
    return {"application/octet-stream", encode_bg3d(t)};
  }

  const SceneComposite composite = composite_scene(scene, camera, sampling_for(camera, settings), settings.threads);
  switch (mode) {
    case RenderMode::Layout: {
      const auto palette = default_palette(scene.size());
      const Grid rgb = layout_image(composite.weights, palette, default_background_color());
      return {"image/png", encode_png(quantize_rgb(rgb))};
    }
    case RenderMode::Weights: {
      const auto h = static_cast<std::uint32_t>(camera.height());
      const auto w = static_cast<std::uint32_t>(camera.width());
      Bg3dEntry e{"weights", {static_cast<std::uint32_t>(scene.size() + 1), h, w}, {}};
      e.values.reserve(static_cast<std::size_t>(scene.size() + 1) * h * w);
      auto append = [&e](const Map2D& m) {
        for (Eigen::Index k = 0; k < m.size(); ++k) e.values.push_back(static_cast<float>(m.data()[k]));
      };
      for (const Map2D& m : composite.weights.blobs) append(m);
      append(composite.weights.background);
      Bg3dTensor t;
      t.add(std::move(e));
      return {"application/octet-stream", encode_bg3d(t)};
    }
    case RenderMode::Features: {
      Bg3dTensor t;
      t.add("features", scene_features(scene, composite));
      return {"application/octet-stream", encode_bg3d(t)};
    }
    case RenderMode::Styles: break;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown render mode", "mode");
}

OpacityHierarchy render_hierarchy(const SceneLayout& scene, const Camera& camera, const RenderSettings& settings,
                                  const UpsamplerParams& upsampler, int coarsest) {
  OpacityHierarchy out;
  out.depth = depth_sort(scene, camera);
  const SamplingConfig cfg = sampling_for(camera, settings);
  int low_levels = 0;
  for (int side = std::min(camera.width(), camera.height()); side % 2 == 0 && side / 2 >= coarsest; side /= 2)
    ++low_levels;
  for (const Blob& b : scene.blobs) {
    const Map2D base = opacity_map(b, scene.sharpness, camera, cfg, settings.threads);
    std::vector<Map2D> levels;
    levels.push_back(upsample_map(base, upsampler, b.feature).cwiseMax(0.0).cwiseMin(1.0));
    for (Map2D& m : opacity_pyramid(base, low_levels)) levels.push_back(std::move(m));
    out.levels_by_blob.push_back(std::move(levels));
  }
  return out;
}

StyleGridSet hierarchy_style_grids(const SceneLayout& scene, const OpacityHierarchy& hierarchy) {
  std::vector<std::vector<Map2D>> pyramids;
  std::vector<VecX> styles;
  for (int i : hierarchy.depth.order) {
    pyramids.push_back(hierarchy.levels_by_blob[static_cast<std::size_t>(i)]);
    styles.push_back(scene.blobs[static_cast<std::size_t>(i)].style);
  }
  return style_grids(pyramids, styles, scene.background_style);
}

Camera camera_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::MalformedDocument, e.what(), "camera");
  }
  if (!doc.is_object()) throw Error(ErrorKind::SchemaViolation, "camera must be an object", "camera");
  static const std::set<std::string> known = {"yaw", "pitch", "radius", "focal", "width", "height"};
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (!known.count(it.key())) throw Error(ErrorKind::SchemaViolation, "unknown field", "camera." + it.key());
  }
  auto real = [&doc](const char* key, double fallback) {
    if (!doc.contains(key)) return fallback;
    if (!doc[key].is_number()) throw Error(ErrorKind::SchemaViolation, "expected a number", std::string("camera.") + key);
    return doc[key].get<double>();
  };
  auto count = [&doc](const char* key, int fallback) {
    if (!doc.contains(key)) return fallback;
    if (!doc[key].is_number_integer())
      throw Error(ErrorKind::SchemaViolation, "expected an integer", std::string("camera.") + key);
    return doc[key].get<int>();
  };
  return Camera::make(real("yaw", 0.0), real("pitch", 0.0), real("radius", kDefaultRadius), real("focal", kDefaultFocal),
                      count("width", 256), count("height", 256));
}

std::string camera_to_json(const Camera& camera) {
  nlohmann::ordered_json doc;
  doc["yaw"] = camera.yaw();
  doc["pitch"] = camera.pitch();
  doc["radius"] = camera.radius();
  doc["focal"] = camera.focal();
  doc["width"] = camera.width();
  doc["height"] = camera.height();
  return doc.dump();
}

}  // namespace blobfield
