// SPDX-FileCopyrightText: 2026 blobfield authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "blobfield/camera.hpp"
#include "blobfield/compositor.hpp"
#include "blobfield/scene.hpp"
#include "blobfield/types.hpp"
#include "blobfield/volume.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace blobfield {

using ParamVector = Eigen::Matrix<double, kGeometricParams, 1>;

/// Gradient of a scalar objective with respect to one blob's geometric parameters.
struct BlobParamGrad {
  Vec3 d_center = Vec3::Zero();
  double d_scale = 0.0;
  Vec3 d_aspect = Vec3::Zero();
  Vec3 d_euler = Vec3::Zero();

  /// Packed as center(3), scale, aspect(3), euler(3).
  [[nodiscard]] ParamVector packed() const;
  BlobParamGrad& operator+=(const BlobParamGrad& o);
};

/// Mutable access to geometric parameter `k` of a blob in packed order.
double& geometric_param(Blob& blob, int k);
double geometric_param(const Blob& blob, int k);
std::string_view geometric_param_name(int k);

/// Positive depth map sampled by the depth loss. Throws InvariantViolation
/// for non-positive or non-finite entries.
class DepthMap {
 public:
  explicit DepthMap(Map2D values);
  [[nodiscard]] const Map2D& values() const { return values_; }
  [[nodiscard]] Eigen::Index height() const { return values_.rows(); }
  [[nodiscard]] Eigen::Index width() const { return values_.cols(); }

 private:
  Map2D values_;
};

/// dO/dsigma_k = delta_k * exp(-sum_j sigma_j delta_j), the derivative of the
/// telescoped form of the front-to-back accumulation.
std::vector<double> opacity_sigma_gradient(std::span<const double> sigmas, std::span<const double> deltas);

/// sum_p upstream(p) * dO(p)/dtheta for one blob's opacity map.
/// Throws ShapeMismatch when `upstream` is not camera-sized.
BlobParamGrad grad_opacity_map(const Blob& blob, double sharpness, const Camera& camera, const SamplingConfig& cfg,
                               const Map2D& upstream, int threads = 0);

/// Back-propagates weight-map gradients to opacity-map gradients through the
/// compositing product. Layers are given back to front.
std::vector<Map2D> weights_backward(std::span<const Map2D> back_to_front, std::span<const Map2D> d_weights,
                                    const Map2D& d_background);

/// Gradients of an objective whose upstream is given on per-blob weight maps
/// (indexed by blob index) and the background weight map. The depth order is
/// held fixed.
std::vector<BlobParamGrad> grad_weights(const SceneLayout& scene, const SceneComposite& composite, const Camera& camera,
                                        const SamplingConfig& cfg, std::span<const Map2D> d_weights,
                                        const Map2D& d_background, int threads = 0);

struct CompositeGrad {
  std::vector<BlobParamGrad> blobs;
  std::vector<VecX> d_feature;
  VecX d_background;
};

/// Gradients of sum_p <upstream(p), F(p)> for the scene's feature grid.
CompositeGrad grad_composite(const SceneLayout& scene, const Camera& camera, const SamplingConfig& cfg,
                             const Grid& upstream, int threads = 0);

/// Mean over active blobs of (z_s - D(u, v))^2 with D read at the nearest
/// pixel. Throws BehindCamera / OutOfImage naming the blob, ShapeMismatch when
/// the map is not camera-sized.
double depth_loss(const SceneLayout& scene, const Camera& camera, const DepthMap& depth);

/// d depth_loss / d center per blob (zero for inactive blobs).
std::vector<Vec3> grad_depth_loss(const SceneLayout& scene, const Camera& camera, const DepthMap& depth);

struct FdReport {
  double max_relative_error = 0.0;
  int blob = -1;
  int param = -1;
  double analytic = 0.0;
  double numeric = 0.0;
  int checked = 0;

  [[nodiscard]] std::string offending_parameter() const;
};

using SceneObjective = std::function<double(const SceneLayout&)>;

/// Central differences over every geometric parameter of every active blob
/// (restricted to `params` when non-empty), compared with `analytic`.
/// Relative error is |a - g| / max(|a|, |g|, 1e-8). Throws NonFiniteObjective.
FdReport fd_check(const SceneObjective& objective, const SceneLayout& scene, double step,
                  std::span<const BlobParamGrad> analytic, std::span<const int> params = {});

/// Central-difference gradient of `objective` for every blob.
std::vector<BlobParamGrad> fd_gradient(const SceneObjective& objective, const SceneLayout& scene, double step,
                                       std::span<const int> params = {});

}  // namespace blobfield
