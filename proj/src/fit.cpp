// SPDX-FileCopyrightText: 2026 blobfield authors
// SPDX-License-Identifier: Apache-2.0

#include "blobfield/fit.hpp"

#include "blobfield/compositor.hpp"
#include "blobfield/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>

namespace blobfield {

bool ParamMask::allows(int k) const {
  if (k < 3) return center;
  if (k == 3) return scale;
  if (k < 7) return aspect;
  return euler;
}

void FitConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate))
    throw Error(ErrorKind::InvalidArgument, "learning rate must be > 0", "learning_rate");
  if (steps < 1) throw Error(ErrorKind::InvalidArgument, "steps must be >= 1", "steps");
  if (!(depth_lambda >= 0.0) || !std::isfinite(depth_lambda))
    throw Error(ErrorKind::InvalidArgument, "depth lambda must be >= 0", "depth_lambda");
  if (samples_per_ray < 2) throw Error(ErrorKind::InvalidArgument, "samples per ray must be >= 2", "samples_per_ray");
  if (!(fd_step > 0.0)) throw Error(ErrorKind::InvalidArgument, "finite-difference step must be > 0", "fd_step");
}

std::vector<Map2D> render_weight_stack(const SceneLayout& scene, const Camera& camera, int samples_per_ray,
                                       int threads) {
  const SceneComposite c = composite_scene(scene, camera, SamplingConfig::for_camera(camera, samples_per_ray), threads);
  std::vector<Map2D> stack = c.weights.blobs;
  stack.push_back(c.weights.background);
  return stack;
}

namespace {

void check_target(const SceneLayout& scene, const FitTarget& target) {
  if (target.cameras.empty()) throw Error(ErrorKind::ShapeMismatch, "at least one view is required", "cameras");
  if (target.weights.size() != target.cameras.size())
    throw Error(ErrorKind::ShapeMismatch, "one weight stack per view required", "weights");
  for (std::size_t v = 0; v < target.cameras.size(); ++v) {
    const Camera& cam = target.cameras[v];
    const auto& stack = target.weights[v];
    if (stack.size() != scene.blobs.size() + 1)
      throw Error(ErrorKind::ShapeMismatch, "expected blob count + 1 weight maps", "weights[" + std::to_string(v) + "]");
    for (const Map2D& m : stack) {
      if (m.rows() != cam.height() || m.cols() != cam.width())
        throw Error(ErrorKind::ShapeMismatch, "target resolution differs from the render resolution",
                    "weights[" + std::to_string(v) + "]");
    }
  }
}

struct Evaluation {
  double loss = 0.0;
  std::vector<BlobParamGrad> grads;
};

Evaluation evaluate(const SceneLayout& scene, const FitTarget& target, const FitConfig& cfg, bool with_gradient) {
  Evaluation out;
  out.grads.assign(scene.blobs.size(), BlobParamGrad{});
  for (std::size_t v = 0; v < target.cameras.size(); ++v) {
    const Camera& cam = target.cameras[v];
    const SamplingConfig sampling = SamplingConfig::for_camera(cam, cfg.samples_per_ray);
    const SceneComposite composite = composite_scene(scene, cam, sampling, cfg.threads);
    const auto& stack = target.weights[v];
    const double norm = 1.0 / static_cast<double>(cam.width() * cam.height());

    std::vector<Map2D> d_weights;
    d_weights.reserve(scene.blobs.size());
    for (std::size_t i = 0; i < scene.blobs.size(); ++i) {
      const Map2D diff = composite.weights.blobs[i] - stack[i];
      out.loss += norm * diff.squaredNorm();
      d_weights.push_back(2.0 * norm * diff);
    }
    const Map2D diff_bg = composite.weights.background - stack.back();
    out.loss += norm * diff_bg.squaredNorm();

    if (with_gradient) {
      const auto g = grad_weights(scene, composite, cam, sampling, d_weights, 2.0 * norm * diff_bg, cfg.threads);
      for (std::size_t i = 0; i < g.size(); ++i) out.grads[i] += g[i];
    }
  }
  if (cfg.depth_lambda > 0.0 && target.depth) {
    out.loss += cfg.depth_lambda * depth_loss(scene, target.cameras.front(), *target.depth);
    if (with_gradient) {
      const auto g = grad_depth_loss(scene, target.cameras.front(), *target.depth);
      for (std::size_t i = 0; i < g.size(); ++i) out.grads[i].d_center += cfg.depth_lambda * g[i];
    }
  }
  return out;
}

}  // namespace

double fit_loss(const SceneLayout& scene, const FitTarget& target, const FitConfig& cfg) {
  check_target(scene, target);
  return evaluate(scene, target, cfg, false).loss;
}

std::vector<BlobParamGrad> fit_loss_gradient(const SceneLayout& scene, const FitTarget& target, const FitConfig& cfg) {
  check_target(scene, target);
  return evaluate(scene, target, cfg, true).grads;
}

FitReport fit_scene(const SceneLayout& initial, const FitTarget& target, const FitConfig& cfg,
                    const std::optional<SceneLayout>& ground_truth) {
  cfg.validate();
  validate(initial);
  check_target(initial, target);
  if (ground_truth && ground_truth->blobs.size() != initial.blobs.size())
    throw Error(ErrorKind::ShapeMismatch, "ground truth blob count differs", "ground_truth");

  FitReport report;
  SceneLayout scene = initial;
  report.loss_trace.reserve(static_cast<std::size_t>(cfg.steps) + 1);
  const SceneObjective objective = [&](const SceneLayout& s) { return evaluate(s, target, cfg, false).loss; };

  for (int step = 0; step <= cfg.steps; ++step) {
    const bool last = step == cfg.steps;
    Evaluation e = evaluate(scene, target, cfg, !last && cfg.gradient == GradientSource::Analytic);
    if (!std::isfinite(e.loss))
      throw Error(ErrorKind::NonFiniteObjective, "loss became non-finite", "step " + std::to_string(step));
    report.loss_trace.push_back(e.loss);
    if (last) break;
    if (cfg.gradient == GradientSource::FiniteDifference) e.grads = fd_gradient(objective, scene, cfg.fd_step);

    for (std::size_t i = 0; i < scene.blobs.size(); ++i) {
      Blob& b = scene.blobs[i];
      if (!b.active) continue;
      const ParamVector g = e.grads[i].packed();
      if (!g.allFinite())
        throw Error(ErrorKind::NonFiniteObjective, "gradient became non-finite", "step " + std::to_string(step));
      for (int k = 0; k < kGeometricParams; ++k) {
        if (cfg.mask.allows(k)) geometric_param(b, k) -= cfg.learning_rate * g(k);
      }
      b.aspect = b.aspect.cwiseMax(1e-3).cwiseMin(1.0);
    }
  }

  report.final_scene = std::move(scene);
  if (ground_truth) {
    for (std::size_t i = 0; i < initial.blobs.size(); ++i)
      report.center_error.push_back((report.final_scene.blobs[i].center - ground_truth->blobs[i].center).norm());
  }
  return report;
}

std::string FitReport::to_json() const {
  nlohmann::ordered_json doc;
  doc["steps"] = loss_trace.empty() ? 0 : loss_trace.size() - 1;
  doc["final_loss"] = loss_trace.empty() ? 0.0 : loss_trace.back();
  doc["loss_trace"] = loss_trace;
  doc["center_error"] = center_error;
  doc["final_scene"] = nlohmann::ordered_json::parse(save_scene(final_scene));
  return doc.dump() + "\n";
}

}  // namespace blobfield
