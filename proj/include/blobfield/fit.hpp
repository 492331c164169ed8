// SPDX-FileCopyrightText: 2026 blobfield authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "blobfield/camera.hpp"
#include "blobfield/gradients.hpp"
#include "blobfield/scene.hpp"

#include <optional>
#include <string>
#include <vector>

namespace blobfield {

struct ParamMask {
  bool center = true;
  bool scale = false;
  bool aspect = false;
  bool euler = false;

  [[nodiscard]] bool allows(int packed_index) const;
};

enum class GradientSource { Analytic, FiniteDifference };

struct FitConfig {
  double learning_rate = 0.5;
  int steps = 500;
  /// Weight of the depth term; 0 disables it.
  double depth_lambda = 0.0;
  ParamMask mask;
  int samples_per_ray = kDefaultSamplesPerRay;
  GradientSource gradient = GradientSource::Analytic;
  double fd_step = 1e-5;
  int threads = 0;

  /// Throws InvalidArgument.
  void validate() const;
};

/// Target weight maps for each view: per view, one map per blob (blob index
/// order) followed by the background map.
struct FitTarget {
  std::vector<Camera> cameras;
  std::vector<std::vector<Map2D>> weights;
  /// Depth map seen from cameras[0], used when depth_lambda > 0.
  std::optional<DepthMap> depth;
};

struct FitReport {
  std::vector<double> loss_trace;  // steps + 1 entries, trace[k] after k steps
  SceneLayout final_scene;
  std::vector<double> center_error;  // per blob, when a ground truth was given

  [[nodiscard]] double final_loss() const { return loss_trace.back(); }
  [[nodiscard]] std::string to_json() const;
};

/// Per-view blob weight maps plus the background map, ready to use as a target.
std::vector<Map2D> render_weight_stack(const SceneLayout& scene, const Camera& camera, int samples_per_ray,
                                       int threads = 0);

/// Loss of `scene` against `target`: per view, the sum over all weight maps
/// of the mean squared pixel error; views are summed, plus lambda * depth loss.
double fit_loss(const SceneLayout& scene, const FitTarget& target, const FitConfig& cfg);

/// Analytic gradient of fit_loss for every blob, depth order held fixed.
std::vector<BlobParamGrad> fit_loss_gradient(const SceneLayout& scene, const FitTarget& target, const FitConfig& cfg);

/// Fixed-step gradient descent on the masked geometric parameters. Aspect
/// components are kept inside [1e-3, 1] after every step. Throws
/// ShapeMismatch, NonFiniteObjective (path names the step).
FitReport fit_scene(const SceneLayout& initial, const FitTarget& target, const FitConfig& cfg,
                    const std::optional<SceneLayout>& ground_truth = std::nullopt);

}  // namespace blobfield
