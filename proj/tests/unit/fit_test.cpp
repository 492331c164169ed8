// SPDX-FileCopyrightText: 2026 blobfield authors
// SPDX-License-Identifier: Apache-2.0

#include "blobfield/error.hpp"
#include "blobfield/fit.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <json.hpp>

#include <cmath>

using namespace blobfield;
using blobfield::testing::make_blob;
using blobfield::testing::make_scene;

namespace {

struct Problem {
  SceneLayout truth;
  SceneLayout init;
  FitTarget target;
};

Problem problem(int res) {
  Problem p;
  p.truth = make_scene({make_blob(Vec3(0.45, 0.5, 0.45), 4.0, Vec3(0.9, 0.6, 0.8)),
                        make_blob(Vec3(0.6, 0.55, 0.6), 3.5, Vec3(0.5, 0.9, 0.7), Vec3(0.2, 0.3, 0.1))});
  p.init = p.truth;
  p.init.blobs[0].center += Vec3(0.03, -0.02, 0.0);
  p.init.blobs[1].center += Vec3(-0.02, 0.03, 0.0);
  const Camera cam = Camera::make(0, 0, 3, 2.5, res, res);
  p.target.cameras = {cam};
  p.target.weights = {render_weight_stack(p.truth, cam, 32)};
  return p;
}

}  // namespace

TEST(Fit, LossGradientMatchesFiniteDifferences) {
  Problem p = problem(16);
  FitConfig cfg;
  cfg.depth_lambda = 0.3;
  p.target.depth = DepthMap(Map2D::Constant(16, 16, 2.9));
  const auto analytic = fit_loss_gradient(p.init, p.target, cfg);
  const FdReport r = fd_check([&](const SceneLayout& s) { return fit_loss(s, p.target, cfg); }, p.init, 1e-5, analytic);
  EXPECT_LT(r.max_relative_error, 1e-4) << r.offending_parameter();
}

TEST(Fit, ZeroLossAtTruth) {
  const Problem p = problem(16);
  EXPECT_EQ(fit_loss(p.truth, p.target, FitConfig{}), 0.0);
}

TEST(Fit, DescentReducesLossAndCenterError) {
  const Problem p = problem(24);
  FitConfig cfg;
  cfg.steps = 60;
  const FitReport r = fit_scene(p.init, p.target, cfg, p.truth);
  ASSERT_EQ(r.loss_trace.size(), 61u);
  EXPECT_LT(r.final_loss(), 0.2 * r.loss_trace.front());
  ASSERT_EQ(r.center_error.size(), 2u);
  EXPECT_LT(r.center_error[0], 0.03);
  // Masked parameters never move.
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(r.final_scene.blobs[i].scale, p.init.blobs[i].scale);
    EXPECT_EQ(r.final_scene.blobs[i].aspect, p.init.blobs[i].aspect);
    EXPECT_EQ(r.final_scene.blobs[i].euler, p.init.blobs[i].euler);
  }
}

TEST(Fit, FiniteDifferenceSourceTracksAnalytic) {
  const Problem p = problem(12);
  FitConfig cfg;
  cfg.steps = 3;
  const FitReport a = fit_scene(p.init, p.target, cfg);
  cfg.gradient = GradientSource::FiniteDifference;
  const FitReport f = fit_scene(p.init, p.target, cfg);
  for (std::size_t k = 0; k < a.loss_trace.size(); ++k) EXPECT_NEAR(a.loss_trace[k], f.loss_trace[k], 1e-8);
}

TEST(Fit, ReportJson) {
  const Problem p = problem(8);
  FitConfig cfg;
  cfg.steps = 2;
  const auto doc = nlohmann::json::parse(fit_scene(p.init, p.target, cfg, p.truth).to_json());
  EXPECT_EQ(doc["steps"], 2);
  EXPECT_EQ(doc["loss_trace"].size(), 3u);
  EXPECT_EQ(doc["center_error"].size(), 2u);
  EXPECT_TRUE(doc["final_scene"].is_object());
}

TEST(Fit, Errors) {
  Problem p = problem(8);
  FitConfig cfg;
  cfg.learning_rate = 0.0;
  EXPECT_THROW(fit_scene(p.init, p.target, cfg), Error);
  cfg = FitConfig{};
  p.target.weights[0].pop_back();
  try {
    (void)fit_scene(p.init, p.target, cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ShapeMismatch);
  }
  p = problem(8);
  p.target.weights[0][0] = Map2D::Zero(4, 4);
  EXPECT_THROW(fit_loss(p.init, p.target, cfg), Error);
}

TEST(Fit, NonFiniteLossIsReported) {
  Problem p = problem(8);
  p.target.weights[0][1](3, 3) = std::nan("");
  FitConfig cfg;
  cfg.steps = 5;
  try {
    (void)fit_scene(p.init, p.target, cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonFiniteObjective);
    EXPECT_EQ(e.path(), "step 0");
  }
}
