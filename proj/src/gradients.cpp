// SPDX-FileCopyrightText: 2026 blobfield authors
// SPDX-License-Identifier: Apache-2.0

#include "blobfield/gradients.hpp"

#include "blobfield/error.hpp"
#include "blobfield/geometry.hpp"
#include "blobfield/parallel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace blobfield {

ParamVector BlobParamGrad::packed() const {
  ParamVector v;
  v << d_center, d_scale, d_aspect, d_euler;
  return v;
}

BlobParamGrad& BlobParamGrad::operator+=(const BlobParamGrad& o) {
  d_center += o.d_center;
  d_scale += o.d_scale;
  d_aspect += o.d_aspect;
  d_euler += o.d_euler;
  return *this;
}

double& geometric_param(Blob& blob, int k) {
  if (k < 3) return blob.center(k);
  if (k == 3) return blob.scale;
  if (k < 7) return blob.aspect(k - 4);
  return blob.euler(k - 7);
}

double geometric_param(const Blob& blob, int k) { return geometric_param(const_cast<Blob&>(blob), k); }

std::string_view geometric_param_name(int k) {
  static constexpr std::array<std::string_view, kGeometricParams> names = {
      "center.x", "center.y", "center.z", "scale", "aspect[0]", "aspect[1]", "aspect[2]", "euler[0]", "euler[1]", "euler[2]"};
  return names.at(static_cast<std::size_t>(k));
}

DepthMap::DepthMap(Map2D values) : values_(std::move(values)) {
  for (Eigen::Index y = 0; y < values_.rows(); ++y) {
    for (Eigen::Index x = 0; x < values_.cols(); ++x) {
      const double v = values_(y, x);
      if (!std::isfinite(v) || v <= 0.0)
        throw Error(ErrorKind::InvariantViolation, "depths must be finite and > 0",
                    "depth[" + std::to_string(y) + "][" + std::to_string(x) + "]");
    }
  }
}

std::vector<double> opacity_sigma_gradient(std::span<const double> sigmas, std::span<const double> deltas) {
  double optical_depth = 0.0;
  for (std::size_t k = 0; k < sigmas.size(); ++k) optical_depth += sigmas[k] * deltas[k];
  const double transmittance = std::exp(-optical_depth);
  std::vector<double> out(sigmas.size());
  for (std::size_t k = 0; k < sigmas.size(); ++k) out[k] = deltas[k] * transmittance;
  return out;
}

namespace {

// Per-row sufficient statistics; the parameter gradient is a fixed linear
// function of their totals, so rows can be reduced in order afterwards.
struct RayGradAccumulator {
  double scale = 0.0;
  Vec3 weighted_local = Vec3::Zero();     // sum coeff * g,  g_k = local_k / (c a_k)
  Vec3 weighted_local_sq = Vec3::Zero();  // sum coeff * local_k^2
  Mat3 weighted_outer = Mat3::Zero();     // sum coeff * (x - center) g^T

  RayGradAccumulator& operator+=(const RayGradAccumulator& o) {
    scale += o.scale;
    weighted_local += o.weighted_local;
    weighted_local_sq += o.weighted_local_sq;
    weighted_outer += o.weighted_outer;
    return *this;
  }
};

}  // namespace

BlobParamGrad grad_opacity_map(const Blob& blob, double sharpness, const Camera& camera, const SamplingConfig& cfg,
                               const Map2D& upstream, int threads) {
  cfg.validate();
  const int h = camera.height();
  const int w = camera.width();
  if (upstream.rows() != h || upstream.cols() != w)
    throw Error(ErrorKind::ShapeMismatch, "upstream grid must match the camera resolution", "upstream");
  BlobParamGrad grad;
  if (!blob.active) return grad;

  const BlobFrame<double> frame = make_frame(blob, sharpness);
  const Mat3 rt = frame.rotation.transpose();
  const double delta = cfg.spacing();
  std::vector<RayGradAccumulator> rows(static_cast<std::size_t>(h));

  parallel_for_rows(h, threads, [&](int py) {
    std::vector<double> t;
    std::vector<Vec3> rel(static_cast<std::size_t>(cfg.samples));
    std::vector<double> sigma(static_cast<std::size_t>(cfg.samples));
    RayGradAccumulator& acc = rows[static_cast<std::size_t>(py)];
    for (int px = 0; px < w; ++px) {
      const double up = upstream(py, px);
      if (up == 0.0) continue;
      const Ray ray = ray_for_pixel(camera, px, py);
      const auto index = static_cast<std::uint64_t>(py) * static_cast<std::uint64_t>(w) + static_cast<std::uint64_t>(px);
      sample_distances(cfg, index, t);
      double optical_depth = 0.0;
      for (std::size_t k = 0; k < t.size(); ++k) {
        rel[k] = ray.origin + t[k] * ray.direction - frame.center;
        const Vec3 local = rt * rel[k];
        sigma[k] = logistic(frame.scale - local.cwiseAbs2().dot(frame.inv_axis));
        optical_depth += sigma[k] * delta;
      }
      const double ray_coeff = up * delta * std::exp(-optical_depth);
      for (std::size_t k = 0; k < t.size(); ++k) {
        const double coeff = ray_coeff * sigma[k] * (1.0 - sigma[k]);
        const Vec3 local = rt * rel[k];
        const Vec3 g = local.cwiseProduct(frame.inv_axis);
        acc.scale += coeff;
        acc.weighted_local += coeff * g;
        acc.weighted_local_sq += coeff * local.cwiseAbs2();
        acc.weighted_outer += coeff * rel[k] * g.transpose();
      }
    }
  });

  RayGradAccumulator total;
  for (const RayGradAccumulator& r : rows) total += r;

  // sigma = logistic(s - d): dO/dtheta = sum coeff * (ds/dtheta - dd/dtheta).
  grad.d_scale = total.scale;
  grad.d_center = 2.0 * frame.rotation * total.weighted_local;
  grad.d_aspect = total.weighted_local_sq.cwiseProduct(frame.inv_axis).cwiseQuotient(blob.aspect);
  const auto partials = rotation_partials<double>(blob.euler);
  for (int m = 0; m < 3; ++m) grad.d_euler(m) = -2.0 * partials[static_cast<std::size_t>(m)].cwiseProduct(total.weighted_outer).sum();
  return grad;
}

std::vector<Map2D> weights_backward(std::span<const Map2D> back_to_front, std::span<const Map2D> d_weights,
                                    const Map2D& d_background) {
  const std::size_t n = back_to_front.size();
  if (d_weights.size() != n) throw Error(ErrorKind::ShapeMismatch, "one weight gradient per layer required");
  for (std::size_t i = 0; i < n; ++i) {
    if (back_to_front[i].rows() != d_background.rows() || back_to_front[i].cols() != d_background.cols() ||
        d_weights[i].rows() != d_background.rows() || d_weights[i].cols() != d_background.cols())
      throw Error(ErrorKind::ShapeMismatch, "maps must share one resolution", "layer[" + std::to_string(i) + "]");
  }
  // front[k]: transmittance of everything in front of layer k.
  std::vector<Map2D> front(n);
  Map2D trans = Map2D::Ones(d_background.rows(), d_background.cols());
  for (std::size_t k = n; k-- > 0;) {
    front[k] = trans;
    trans = trans.cwiseProduct((1.0 - back_to_front[k].array()).matrix());
  }
  // behind: upstream of everything behind layer k composited as one layer.
  std::vector<Map2D> d_opacity(n);
  Map2D behind = d_background;
  for (std::size_t k = 0; k < n; ++k) {
    const Map2D& o = back_to_front[k];
    d_opacity[k] = front[k].cwiseProduct(d_weights[k] - behind);
    behind = behind.cwiseProduct((1.0 - o.array()).matrix()) + d_weights[k].cwiseProduct(o);
  }
  return d_opacity;
}

std::vector<BlobParamGrad> grad_weights(const SceneLayout& scene, const SceneComposite& composite, const Camera& camera,
                                        const SamplingConfig& cfg, std::span<const Map2D> d_weights,
                                        const Map2D& d_background, int threads) {
  if (d_weights.size() != scene.blobs.size())
    throw Error(ErrorKind::ShapeMismatch, "one weight gradient per blob required");
  std::vector<Map2D> sorted_opacity, sorted_dw;
  for (int i : composite.depth.order) {
    sorted_opacity.push_back(composite.opacity[static_cast<std::size_t>(i)]);
    sorted_dw.push_back(d_weights[static_cast<std::size_t>(i)]);
  }
  const std::vector<Map2D> d_opacity = weights_backward(sorted_opacity, sorted_dw, d_background);
  std::vector<BlobParamGrad> out(scene.blobs.size());
  for (std::size_t k = 0; k < composite.depth.order.size(); ++k) {
    const auto i = static_cast<std::size_t>(composite.depth.order[k]);
    out[i] = grad_opacity_map(scene.blobs[i], scene.sharpness, camera, cfg, d_opacity[k], threads);
  }
  return out;
}

CompositeGrad grad_composite(const SceneLayout& scene, const Camera& camera, const SamplingConfig& cfg,
                             const Grid& upstream, int threads) {
  if (upstream.height() != camera.height() || upstream.width() != camera.width() ||
      upstream.channels() != scene.feature_dim)
    throw Error(ErrorKind::ShapeMismatch, "upstream must be H x W x feature_dim", "upstream");
  const SceneComposite composite = composite_scene(scene, camera, cfg, threads);
  const int h = camera.height(), w = camera.width();
  auto as_map = [h, w](const VecX& flat) {
    Map2D m(h, w);
    Eigen::Map<VecX>(m.data(), m.size()) = flat;
    return m;
  };

  std::vector<Map2D> d_weights;
  d_weights.reserve(scene.blobs.size());
  for (const Blob& b : scene.blobs) d_weights.push_back(as_map(upstream.data() * b.feature));
  const Map2D d_background = as_map(upstream.data() * scene.background_feature);

  CompositeGrad out;
  out.blobs = grad_weights(scene, composite, camera, cfg, d_weights, d_background, threads);
  for (std::size_t i = 0; i < scene.blobs.size(); ++i) {
    const Map2D& wi = composite.weights.blobs[i];
    out.d_feature.push_back(upstream.data().transpose() * Eigen::Map<const VecX>(wi.data(), wi.size()));
  }
  const Map2D& wbg = composite.weights.background;
  out.d_background = upstream.data().transpose() * Eigen::Map<const VecX>(wbg.data(), wbg.size());
  return out;
}

namespace {

struct DepthResidual {
  int blob;
  double residual;  // z_s - D(u, v)
};

std::vector<DepthResidual> depth_residuals(const SceneLayout& scene, const Camera& camera, const DepthMap& depth) {
  if (depth.height() != camera.height() || depth.width() != camera.width())
    throw Error(ErrorKind::ShapeMismatch, "depth map must match the camera resolution", "depth");
  std::vector<DepthResidual> out;
  for (int i = 0; i < scene.size(); ++i) {
    const Blob& b = scene.blobs[static_cast<std::size_t>(i)];
    if (!b.active) continue;
    const double z = centroid_depth(camera, b.center);
    if (!(z > 0.0)) throw Error(ErrorKind::BehindCamera, "blob centroid is behind the camera", "blobs[" + std::to_string(i) + "]");
    const PixelCoord uv = project(camera, b.center);
    const double px = std::floor(uv.u), py = std::floor(uv.v);
    if (!(px >= 0.0 && px < camera.width() && py >= 0.0 && py < camera.height()))
      throw Error(ErrorKind::OutOfImage, "blob centroid projects outside the image", "blobs[" + std::to_string(i) + "]");
    out.push_back({i, z - depth.values()(static_cast<Eigen::Index>(py), static_cast<Eigen::Index>(px))});
  }
  return out;
}

}  // namespace

double depth_loss(const SceneLayout& scene, const Camera& camera, const DepthMap& depth) {
  const auto residuals = depth_residuals(scene, camera, depth);
  if (residuals.empty()) return 0.0;
  double sum = 0.0;
  for (const DepthResidual& r : residuals) sum += r.residual * r.residual;
  return sum / static_cast<double>(residuals.size());
}

std::vector<Vec3> grad_depth_loss(const SceneLayout& scene, const Camera& camera, const DepthMap& depth) {
  const auto residuals = depth_residuals(scene, camera, depth);
  std::vector<Vec3> out(scene.blobs.size(), Vec3::Zero());
  const double count = static_cast<double>(residuals.size());
  for (const DepthResidual& r : residuals)
    out[static_cast<std::size_t>(r.blob)] = (2.0 * r.residual / count) * camera.forward();
  return out;
}

std::string FdReport::offending_parameter() const {
  if (blob < 0) return "none";
  return "blobs[" + std::to_string(blob) + "]." + std::string(geometric_param_name(param));
}

namespace {

std::vector<int> resolve_params(std::span<const int> params) {
  if (!params.empty()) return {params.begin(), params.end()};
  std::vector<int> all(kGeometricParams);
  for (int k = 0; k < kGeometricParams; ++k) all[static_cast<std::size_t>(k)] = k;
  return all;
}

double evaluate(const SceneObjective& objective, const SceneLayout& scene, const std::string& where) {
  const double v = objective(scene);
  if (!std::isfinite(v)) throw Error(ErrorKind::NonFiniteObjective, "objective returned a non-finite value", where);
  return v;
}

double central_difference(const SceneObjective& objective, const SceneLayout& scene, int blob, int param, double step) {
  SceneLayout probe = scene;
  double& value = geometric_param(probe.blobs[static_cast<std::size_t>(blob)], param);
  const double original = value;
  const std::string where = "blobs[" + std::to_string(blob) + "]." + std::string(geometric_param_name(param));
  value = original + step;
  const double plus = evaluate(objective, probe, where);
  value = original - step;
  const double minus = evaluate(objective, probe, where);
  return (plus - minus) / (2.0 * step);
}

}  // namespace

std::vector<BlobParamGrad> fd_gradient(const SceneObjective& objective, const SceneLayout& scene, double step,
                                       std::span<const int> params) {
  if (!(step > 0.0)) throw Error(ErrorKind::InvalidArgument, "step must be > 0", "step");
  evaluate(objective, scene, "base");
  std::vector<BlobParamGrad> out(scene.blobs.size());
  for (int i = 0; i < scene.size(); ++i) {
    if (!scene.blobs[static_cast<std::size_t>(i)].active) continue;
    ParamVector g = ParamVector::Zero();
    for (int k : resolve_params(params)) g(k) = central_difference(objective, scene, i, k, step);
    BlobParamGrad& b = out[static_cast<std::size_t>(i)];
    b.d_center = g.head<3>();
    b.d_scale = g(3);
    b.d_aspect = g.segment<3>(4);
    b.d_euler = g.tail<3>();
  }
  return out;
}

FdReport fd_check(const SceneObjective& objective, const SceneLayout& scene, double step,
                  std::span<const BlobParamGrad> analytic, std::span<const int> params) {
  if (analytic.size() != scene.blobs.size())
    throw Error(ErrorKind::ShapeMismatch, "one analytic gradient per blob required", "analytic");
  const std::vector<BlobParamGrad> numeric = fd_gradient(objective, scene, step, params);
  FdReport report;
  for (int i = 0; i < scene.size(); ++i) {
    if (!scene.blobs[static_cast<std::size_t>(i)].active) continue;
    const ParamVector a = analytic[static_cast<std::size_t>(i)].packed();
    const ParamVector g = numeric[static_cast<std::size_t>(i)].packed();
    for (int k : resolve_params(params)) {
      const double err = std::abs(a(k) - g(k)) / std::max({std::abs(a(k)), std::abs(g(k)), 1e-8});
      ++report.checked;
      if (report.blob < 0 || err > report.max_relative_error) {
        report.max_relative_error = err;
        report.blob = i;
        report.param = k;
        report.analytic = a(k);
        report.numeric = g(k);
      }
    }
  }
  return report;
}

}  // namespace blobfield
