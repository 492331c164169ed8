// SPDX-FileCopyrightText: 2026 blobfield authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "blobfield/camera.hpp"
#include "blobfield/scene.hpp"
#include "blobfield/types.hpp"
#include "blobfield/volume.hpp"

#include <span>
#include <vector>

namespace blobfield {

/// Active blobs ordered back to front (farthest first).
struct DepthOrder {
  std::vector<int> order;
  std::vector<double> depths;  // centroid depth of every blob, by blob index
};

/// `candidates` (every index of `depths` when empty) sorted by descending
/// depth with ties kept in ascending index order.
std::vector<int> order_by_depth(std::span<const double> depths, std::span<const int> candidates = {});

/// Throws EmptyScene when no blob is active.
DepthOrder depth_sort(const SceneLayout& scene, const Camera& camera);

struct CompositeWeights {
  std::vector<Map2D> blobs;  // same order as the input opacity maps
  Map2D background;
};

/// w_i = O_i * prod_{j in front of i} (1 - O_j), w_bg = prod_j (1 - O_j) for
/// opacity maps given back to front. Throws ResolutionMismatch.
CompositeWeights composite_weights(std::span<const Map2D> back_to_front);

/// F = sum_i w_i f_i + w_bg f_bg, summed back to front. Throws DimensionMismatch.
Grid composite_features(const CompositeWeights& weights, std::span<const VecX> features, const VecX& background);

struct StyleGridSet {
  std::vector<Grid> levels;  // finest first, matching the opacity pyramid
};

/// Splats style vectors with the compositing weights at every pyramid level.
/// `pyramids[i]` is blob i's pyramid (blobs back to front). Throws ResolutionMismatch.
StyleGridSet style_grids(std::span<const std::vector<Map2D>> pyramids, std::span<const VecX> styles,
                         const VecX& background_style);

using Rgb = Eigen::Vector3d;

/// Distinct fully saturated colors by golden-ratio hue stepping; entry 0 is red.
std::vector<Rgb> default_palette(int count);
inline Rgb default_background_color() { return Rgb(0.08, 0.08, 0.08); }

/// Per-pixel sum_i w_i color_i + w_bg background, clamped to [0,1]. Returns an
/// H x W x 3 grid. Throws PaletteTooShort.
Grid layout_image(const CompositeWeights& weights, std::span<const Rgb> palette, const Rgb& background);

/// Everything a frame of a scene composites to, with per-blob data indexed by
/// blob index (inactive blobs carry zero maps).
struct SceneComposite {
  DepthOrder depth;
  std::vector<Map2D> opacity;
  CompositeWeights weights;
};

SceneComposite composite_scene(const SceneLayout& scene, const Camera& camera, const SamplingConfig& cfg,
                               int threads = 0);

/// Feature grid of a whole scene.
Grid scene_features(const SceneLayout& scene, const SceneComposite& composite);

}  // namespace blobfield
