// SPDX-FileCopyrightText: 2026 blobfield authors
// SPDX-License-Identifier: Apache-2.0

#include "blobfield/gradcheck.hpp"

#include "blobfield/error.hpp"
#include "blobfield/fit.hpp"
#include "blobfield/random.hpp"

#include <json.hpp>

#include <algorithm>
#include <limits>

namespace blobfield {

void GradcheckConfig::validate() const {
  if (trials < 1) throw Error(ErrorKind::InvalidArgument, "trials must be >= 1", "trials");
  if (min_blobs < 1 || max_blobs < min_blobs)
    throw Error(ErrorKind::InvalidArgument, "blob range must satisfy 1 <= min <= max", "blobs");
  if (resolution < 1) throw Error(ErrorKind::InvalidArgument, "resolution must be >= 1", "resolution");
  if (samples_per_ray < 2) throw Error(ErrorKind::InvalidArgument, "samples per ray must be >= 2", "samples_per_ray");
  if (!(step > 0.0)) throw Error(ErrorKind::InvalidArgument, "step must be > 0", "step");
}

namespace {

constexpr int kTrialDims = 4;

double min_depth_gap(const SceneLayout& scene, const Camera& camera) {
  std::vector<double> depths;
  for (const Blob& b : scene.blobs)
    if (b.active) depths.push_back(centroid_depth(camera, b.center));
  std::sort(depths.begin(), depths.end());
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < depths.size(); ++i) gap = std::min(gap, depths[i] - depths[i - 1]);
  return gap;
}

}  // namespace

GradcheckReport run_gradcheck(const GradcheckConfig& cfg) {
  cfg.validate();
  GradcheckReport report;
  Rng rng(cfg.seed);

  FitConfig fit;
  fit.samples_per_ray = cfg.samples_per_ray;
  fit.depth_lambda = cfg.depth_lambda;
  fit.threads = cfg.threads;

  for (int trial = 0; trial < cfg.trials; ++trial) {
    const int span = cfg.max_blobs - cfg.min_blobs + 1;
    const int blobs = cfg.min_blobs + static_cast<int>(rng.next() % static_cast<std::uint64_t>(span));
    SceneLayout scene;
    Camera camera = Camera::make(0.0, 0.0);
    for (;;) {
      scene = sample_scene(rng.next(), blobs, kTrialDims, kTrialDims);
      camera = Camera::make(rng.uniform(-0.6, 0.6), rng.uniform(-0.4, 0.4), kDefaultRadius, kDefaultFocal,
                            cfg.resolution, cfg.resolution);
      if (min_depth_gap(scene, camera) >= cfg.min_depth_gap) break;
      ++report.redrawn;
    }
    const SceneLayout other = sample_scene(rng.next(), blobs, kTrialDims, kTrialDims);

    FitTarget target;
    target.cameras = {camera};
    target.weights = {render_weight_stack(other, camera, cfg.samples_per_ray, cfg.threads)};
    target.depth = DepthMap(Map2D::Constant(cfg.resolution, cfg.resolution, kDefaultRadius));

    const auto analytic = fit_loss_gradient(scene, target, fit);
    const SceneObjective objective = [&](const SceneLayout& s) { return fit_loss(s, target, fit); };
    const FdReport r = fd_check(objective, scene, cfg.step, analytic);
    report.checked += r.checked;
    ++report.trials;
    if (report.worst_trial < 0 || r.max_relative_error > report.max_relative_error) {
      report.max_relative_error = r.max_relative_error;
      report.worst_trial = trial;
      report.worst = r;
    }
  }
  return report;
}

std::string GradcheckReport::to_json() const {
  nlohmann::ordered_json doc;
  doc["max_relative_error"] = max_relative_error;
  doc["trials"] = trials;
  doc["redrawn"] = redrawn;
  doc["checked"] = checked;
  doc["worst_trial"] = worst_trial;
  doc["worst_parameter"] = worst.offending_parameter();
  doc["analytic"] = worst.analytic;
  doc["numeric"] = worst.numeric;
  return doc.dump();
}

}  // namespace blobfield
