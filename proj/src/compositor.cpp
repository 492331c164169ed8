// SPDX-FileCopyrightText: 2026 blobfield authors
// SPDX-License-Identifier: Apache-2.0

#include "blobfield/compositor.hpp"

#include "blobfield/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace blobfield {

std::vector<int> order_by_depth(std::span<const double> depths, std::span<const int> candidates) {
  std::vector<int> order;
  if (candidates.empty()) {
    order.resize(depths.size());
    std::iota(order.begin(), order.end(), 0);
  } else {
    order.assign(candidates.begin(), candidates.end());
    std::sort(order.begin(), order.end());
  }
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return depths[static_cast<std::size_t>(a)] > depths[static_cast<std::size_t>(b)];
  });
  return order;
}

DepthOrder depth_sort(const SceneLayout& scene, const Camera& camera) {
  DepthOrder out;
  std::vector<int> active;
  out.depths.reserve(scene.blobs.size());
  for (int i = 0; i < scene.size(); ++i) {
    const Blob& b = scene.blobs[static_cast<std::size_t>(i)];
    out.depths.push_back(centroid_depth(camera, b.center));
    if (b.active) active.push_back(i);
  }
  if (active.empty()) throw Error(ErrorKind::EmptyScene, "no active blobs to order");
  out.order = order_by_depth(out.depths, active);
  return out;
}

namespace {

void check_same_shape(const Map2D& a, const Map2D& b, std::size_t index) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorKind::ResolutionMismatch, "maps must share one resolution", "map[" + std::to_string(index) + "]");
}

}  // namespace

CompositeWeights composite_weights(std::span<const Map2D> back_to_front) {
  if (back_to_front.empty()) throw Error(ErrorKind::ResolutionMismatch, "no opacity maps to composite");
  const Map2D& first = back_to_front.front();
  for (std::size_t i = 1; i < back_to_front.size(); ++i) check_same_shape(first, back_to_front[i], i);

  CompositeWeights out;
  out.blobs.resize(back_to_front.size());
  // Transmittance seen from the camera down to (and excluding) layer i.
  Map2D transmittance = Map2D::Ones(first.rows(), first.cols());
  for (std::size_t k = back_to_front.size(); k-- > 0;) {
    const Map2D& opacity = back_to_front[k];
    out.blobs[k] = opacity.cwiseProduct(transmittance);
    transmittance = transmittance.cwiseProduct((1.0 - opacity.array()).matrix());
  }
  out.background = std::move(transmittance);
  return out;
}

Grid composite_features(const CompositeWeights& weights, std::span<const VecX> features, const VecX& background) {
  if (features.size() != weights.blobs.size())
    throw Error(ErrorKind::DimensionMismatch, "one feature vector per weight map required");
  const Eigen::Index dim = background.size();
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (features[i].size() != dim)
      throw Error(ErrorKind::DimensionMismatch, "feature length differs from background", "features[" + std::to_string(i) + "]");
  }
  const Map2D& wbg = weights.background;
  Grid out(wbg.rows(), wbg.cols(), dim);
  for (Eigen::Index y = 0; y < wbg.rows(); ++y) {
    for (Eigen::Index x = 0; x < wbg.cols(); ++x) {
      auto px = out.pixel(y, x);
      px = wbg(y, x) * background.transpose();
      for (std::size_t i = 0; i < features.size(); ++i) px += weights.blobs[i](y, x) * features[i].transpose();
    }
  }
  return out;
}

StyleGridSet style_grids(std::span<const std::vector<Map2D>> pyramids, std::span<const VecX> styles,
                         const VecX& background_style) {
  if (pyramids.empty()) throw Error(ErrorKind::ResolutionMismatch, "no pyramids to splat");
  const std::size_t levels = pyramids.front().size();
  for (std::size_t i = 1; i < pyramids.size(); ++i) {
    if (pyramids[i].size() != levels)
      throw Error(ErrorKind::ResolutionMismatch, "pyramids differ in level count", "pyramids[" + std::to_string(i) + "]");
  }
  StyleGridSet out;
  std::vector<Map2D> level_maps(pyramids.size());
  for (std::size_t l = 0; l < levels; ++l) {
    for (std::size_t i = 0; i < pyramids.size(); ++i) level_maps[i] = pyramids[i][l];
    out.levels.push_back(composite_features(composite_weights(level_maps), styles, background_style));
  }
  return out;
}

std::vector<Rgb> default_palette(int count) {
  std::vector<Rgb> palette;
  palette.reserve(static_cast<std::size_t>(std::max(count, 0)));
  constexpr double golden = 0.6180339887498949;
  for (int i = 0; i < count; ++i) {
    const double hue = std::fmod(i * golden, 1.0) * 6.0;
    const int sector = static_cast<int>(hue) % 6;
    const double f = hue - std::floor(hue);
    const double q = 1.0 - f;
    switch (sector) {
      case 0: palette.emplace_back(1.0, f, 0.0); break;
      case 1: palette.emplace_back(q, 1.0, 0.0); break;
      case 2: palette.emplace_back(0.0, 1.0, f); break;
      case 3: palette.emplace_back(0.0, q, 1.0); break;
      case 4: palette.emplace_back(f, 0.0, 1.0); break;
      default: palette.emplace_back(1.0, 0.0, q); break;
    }
  }
  return palette;
}

Grid layout_image(const CompositeWeights& weights, std::span<const Rgb> palette, const Rgb& background) {
  if (palette.size() < weights.blobs.size())
    throw Error(ErrorKind::PaletteTooShort,
                "need " + std::to_string(weights.blobs.size()) + " colors, have " + std::to_string(palette.size()));
  const Map2D& wbg = weights.background;
  Grid out(wbg.rows(), wbg.cols(), 3);
  for (Eigen::Index y = 0; y < wbg.rows(); ++y) {
    for (Eigen::Index x = 0; x < wbg.cols(); ++x) {
      Rgb c = wbg(y, x) * background;
      for (std::size_t i = 0; i < weights.blobs.size(); ++i) c += weights.blobs[i](y, x) * palette[i];
      out.pixel(y, x) = c.cwiseMax(0.0).cwiseMin(1.0).transpose();
    }
  }
  return out;
}

SceneComposite composite_scene(const SceneLayout& scene, const Camera& camera, const SamplingConfig& cfg,
                               int threads) {
  SceneComposite out;
  out.depth = depth_sort(scene, camera);
  out.opacity.reserve(scene.blobs.size());
  for (const Blob& b : scene.blobs) out.opacity.push_back(opacity_map(b, scene.sharpness, camera, cfg, threads));

  std::vector<Map2D> sorted;
  sorted.reserve(out.depth.order.size());
  for (int i : out.depth.order) sorted.push_back(out.opacity[static_cast<std::size_t>(i)]);
  CompositeWeights by_depth = composite_weights(sorted);

  out.weights.background = std::move(by_depth.background);
  out.weights.blobs.assign(scene.blobs.size(), Map2D::Zero(camera.height(), camera.width()));
  for (std::size_t k = 0; k < out.depth.order.size(); ++k)
    out.weights.blobs[static_cast<std::size_t>(out.depth.order[k])] = std::move(by_depth.blobs[k]);
  return out;
}

Grid scene_features(const SceneLayout& scene, const SceneComposite& composite) {
  CompositeWeights sorted;
  std::vector<VecX> features;
  for (int i : composite.depth.order) {
    sorted.blobs.push_back(composite.weights.blobs[static_cast<std::size_t>(i)]);
    features.push_back(scene.blobs[static_cast<std::size_t>(i)].feature);
  }
  sorted.background = composite.weights.background;
  return composite_features(sorted, features, scene.background_feature);
}

}  // namespace blobfield
