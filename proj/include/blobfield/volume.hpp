// SPDX-FileCopyrightText: 2026 blobfield authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "blobfield/camera.hpp"
#include "blobfield/geometry.hpp"
#include "blobfield/scene.hpp"
#include "blobfield/types.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace blobfield {

inline constexpr int kDefaultSamplesPerRay = 32;

struct SamplingConfig {
  double near = kDefaultRadius - 1.0;
  double far = kDefaultRadius + 1.0;
  int samples = kDefaultSamplesPerRay;
  /// When set, each sample is jittered uniformly inside its stratum using a
  /// generator seeded from (seed, ray index). Unset: stratum midpoints.
  std::optional<std::uint64_t> stratified_seed;

  /// near/far = radius -/+ 1, which brackets the unit cube from the orbit.
  static SamplingConfig for_camera(const Camera& camera, int samples = kDefaultSamplesPerRay);

  /// Throws InvalidArgument unless 0 < near < far and samples >= 2.
  void validate() const;

  [[nodiscard]] double spacing() const { return (far - near) / samples; }
};

struct RaySamples {
  std::vector<Vec3> points;
  std::vector<double> distances;  // along the ray, strictly increasing
  std::vector<double> deltas;     // delta_k, uniform including the last sample
};

/// Distances along the ray of the N samples (stratum midpoints, or jittered
/// inside each stratum in stratified mode).
void sample_distances(const SamplingConfig& cfg, std::uint64_t ray_index, std::vector<double>& out);

/// t_k = near + (k - 0.5) * delta for k = 1..N (midpoint mode).
RaySamples sample_ray(const Ray& ray, const SamplingConfig& cfg, std::uint64_t ray_index = 0);

/// Front-to-back accumulation O = sum_k T_k (1 - exp(-sigma_k delta_k)),
/// T_k = exp(-sum_{j<k} sigma_j delta_j), in ascending k.
double accumulate_opacity(const std::vector<double>& sigmas, const std::vector<double>& deltas);

double opacity_along_ray(const Blob& blob, double sharpness, const Ray& ray, const SamplingConfig& cfg,
                         std::uint64_t ray_index = 0);

/// Per-pixel opacity of one blob at the camera's resolution. Inactive blobs
/// yield an all-zero map. Output is bit-identical for any `threads`.
Map2D opacity_map(const Blob& blob, double sharpness, const Camera& camera, const SamplingConfig& cfg,
                  int threads = 0);

/// M_i(x_p) = O_i(x_p) f_i.
Grid feature_map(const Map2D& opacity, const VecX& feature);

/// 2x2 area-average pooling. Throws IndivisibleResolution for odd sides.
Map2D pool_2x(const Map2D& map);

/// [base, base/2, ..., base/2^low_levels]. Throws IndivisibleResolution.
std::vector<Map2D> opacity_pyramid(const Map2D& base, int low_levels);

}  // namespace blobfield
