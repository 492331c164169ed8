// SPDX-FileCopyrightText: 2026 blobfield authors
// SPDX-License-Identifier: Apache-2.0

#include "blobfield/volume.hpp"

#include "blobfield/error.hpp"
#include "blobfield/parallel.hpp"
#include "blobfield/random.hpp"

#include <cmath>
#include <string>

namespace blobfield {

SamplingConfig SamplingConfig::for_camera(const Camera& camera, int samples) {
  SamplingConfig cfg;
  cfg.near = camera.radius() - 1.0;
  cfg.far = camera.radius() + 1.0;
  cfg.samples = samples;
  return cfg;
}

void SamplingConfig::validate() const {
  if (!(near > 0.0) || !(far > near) || !std::isfinite(far))
    throw Error(ErrorKind::InvalidArgument, "require 0 < near < far", "sampling");
  if (samples < 2) throw Error(ErrorKind::InvalidArgument, "require at least 2 samples per ray", "sampling.samples");
}

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed ^ (index + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

void sample_distances(const SamplingConfig& cfg, std::uint64_t ray_index, std::vector<double>& t) {
  const double delta = cfg.spacing();
  t.resize(static_cast<std::size_t>(cfg.samples));
  if (cfg.stratified_seed) {
    Rng rng(mix_seed(*cfg.stratified_seed, ray_index));
    for (int k = 0; k < cfg.samples; ++k) t[static_cast<std::size_t>(k)] = cfg.near + (k + rng.uniform()) * delta;
  } else {
    for (int k = 0; k < cfg.samples; ++k) t[static_cast<std::size_t>(k)] = cfg.near + (k + 0.5) * delta;
  }
}

RaySamples sample_ray(const Ray& ray, const SamplingConfig& cfg, std::uint64_t ray_index) {
  cfg.validate();
  RaySamples out;
  sample_distances(cfg, ray_index, out.distances);
  out.deltas.assign(out.distances.size(), cfg.spacing());
  out.points.reserve(out.distances.size());
  for (double t : out.distances) out.points.emplace_back(ray.origin + t * ray.direction);
  return out;
}

double accumulate_opacity(const std::vector<double>& sigmas, const std::vector<double>& deltas) {
  double optical_depth = 0.0;
  double opacity = 0.0;
  for (std::size_t k = 0; k < sigmas.size(); ++k) {
    const double transmittance = std::exp(-optical_depth);
    const double tau = sigmas[k] * deltas[k];
    opacity += transmittance * -std::expm1(-tau);
    optical_depth += tau;
  }
  return opacity;
}

namespace {

double march(const BlobFrame<double>& frame, const Ray& ray, const SamplingConfig& cfg, std::uint64_t ray_index,
             std::vector<double>& t, std::vector<double>& sigma, std::vector<double>& deltas) {
  if (!frame.active) return 0.0;
  sample_distances(cfg, ray_index, t);
  sigma.resize(t.size());
  deltas.assign(t.size(), cfg.spacing());
  for (std::size_t k = 0; k < t.size(); ++k) sigma[k] = frame.density(ray.origin + t[k] * ray.direction);
  return accumulate_opacity(sigma, deltas);
}

}  // namespace

double opacity_along_ray(const Blob& blob, double sharpness, const Ray& ray, const SamplingConfig& cfg,
                         std::uint64_t ray_index) {
  cfg.validate();
  std::vector<double> t, sigma, deltas;
  return march(make_frame(blob, sharpness), ray, cfg, ray_index, t, sigma, deltas);
}

Map2D opacity_map(const Blob& blob, double sharpness, const Camera& camera, const SamplingConfig& cfg, int threads) {
  cfg.validate();
  const int h = camera.height();
  const int w = camera.width();
  Map2D out = Map2D::Zero(h, w);
  if (!blob.active) return out;
  const BlobFrame<double> frame = make_frame(blob, sharpness);
  parallel_for_rows(h, threads, [&](int py) {
    std::vector<double> t, sigma, deltas;
    for (int px = 0; px < w; ++px) {
      const auto index = static_cast<std::uint64_t>(py) * static_cast<std::uint64_t>(w) + static_cast<std::uint64_t>(px);
      out(py, px) = march(frame, ray_for_pixel(camera, px, py), cfg, index, t, sigma, deltas);
    }
  });
  return out;
}

Grid feature_map(const Map2D& opacity, const VecX& feature) {
  Grid out(opacity.rows(), opacity.cols(), feature.size());
  for (Eigen::Index y = 0; y < opacity.rows(); ++y)
    for (Eigen::Index x = 0; x < opacity.cols(); ++x) out.pixel(y, x) = opacity(y, x) * feature.transpose();
  return out;
}

Map2D pool_2x(const Map2D& map) {
  if (map.rows() % 2 != 0 || map.cols() % 2 != 0)
    throw Error(ErrorKind::IndivisibleResolution, "side lengths must be even to pool",
                std::to_string(map.rows()) + "x" + std::to_string(map.cols()));
  Map2D out(map.rows() / 2, map.cols() / 2);
  for (Eigen::Index y = 0; y < out.rows(); ++y) {
    for (Eigen::Index x = 0; x < out.cols(); ++x) {
      out(y, x) = 0.25 * (map(2 * y, 2 * x) + map(2 * y, 2 * x + 1) + map(2 * y + 1, 2 * x) + map(2 * y + 1, 2 * x + 1));
    }
  }
  return out;
}

std::vector<Map2D> opacity_pyramid(const Map2D& base, int low_levels) {
  if (low_levels < 0) throw Error(ErrorKind::InvalidArgument, "low_levels must be >= 0");
  const Eigen::Index divisor = Eigen::Index{1} << low_levels;
  if (base.rows() % divisor != 0 || base.cols() % divisor != 0)
    throw Error(ErrorKind::IndivisibleResolution,
                "base side not divisible by 2^" + std::to_string(low_levels),
                std::to_string(base.rows()) + "x" + std::to_string(base.cols()));
  std::vector<Map2D> levels;
  levels.reserve(static_cast<std::size_t>(low_levels) + 1);
  levels.push_back(base);
  for (int l = 0; l < low_levels; ++l) levels.push_back(pool_2x(levels.back()));
  return levels;
}

}  // namespace blobfield
