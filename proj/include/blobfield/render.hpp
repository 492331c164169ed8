// SPDX-FileCopyrightText: 2026 blobfield authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "blobfield/bg3d.hpp"
#include "blobfield/camera.hpp"
#include "blobfield/compositor.hpp"
#include "blobfield/scene.hpp"
#include "blobfield/upsampler.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace blobfield {

inline constexpr int kMaxRenderResolution = 512;

/// layout: PNG of the false-color layout map. weights: BG3D entry `weights`
/// [M+1, H, W], background last. features: BG3D entry `features` [H, W, d_s].
/// styles: BG3D entries `style_<side>` for the hierarchical style grids.
enum class RenderMode { Layout, Weights, Features, Styles };

std::string_view to_string(RenderMode mode);
std::optional<RenderMode> parse_render_mode(std::string_view name);

struct RenderSettings {
  int samples_per_ray = kDefaultSamplesPerRay;
  std::optional<std::uint64_t> stratified_seed;
  int threads = 0;
};

struct RenderOutput {
  std::string content_type;
  std::string bytes;
};

/// Shared rendering path of the CLI and the service. The camera's pixel grid
/// is the render resolution.
RenderOutput render(const SceneLayout& scene, const Camera& camera, RenderMode mode, const RenderSettings& settings);

/// Opacity maps at every level of the hierarchy, finest first: the upsampled
/// L_H level, the rendered L_{H-1} level, then 2x pooled levels down to
/// `coarsest` (or as far as the side stays even).
struct OpacityHierarchy {
  DepthOrder depth;
  std::vector<std::vector<Map2D>> levels_by_blob;  // [blob index][level]
};

/// Volume-renders at the camera resolution, pools down to `coarsest`, and
/// lifts one level up with the upsampler (output clamped to [0, 1]).
OpacityHierarchy render_hierarchy(const SceneLayout& scene, const Camera& camera, const RenderSettings& settings,
                                  const UpsamplerParams& upsampler, int coarsest = 16);

StyleGridSet hierarchy_style_grids(const SceneLayout& scene, const OpacityHierarchy& hierarchy);

/// {yaw, pitch, radius, focal, width, height}; missing keys take defaults
/// (radius 3, focal 2.5, 256 x 256). Throws InvalidArgument / SchemaViolation.
Camera camera_from_json(std::string_view json_text);
std::string camera_to_json(const Camera& camera);

}  // namespace blobfield
