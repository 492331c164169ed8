// SPDX-FileCopyrightText: 2026 blobfield authors
// SPDX-License-Identifier: Apache-2.0

#include "blobfield/error.hpp"
#include "blobfield/random.hpp"
#include "blobfield/volume.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace blobfield;
using blobfield::testing::make_blob;

namespace {

// Independent scalar reference: ray built from the pinhole formula, density
// from the explicit inverse covariance, opacity from the closed form.
double reference_opacity(const Blob& b, double c, const Camera& cam, int px, int py, int n) {
  const double w = cam.width(), h = cam.height(), f = cam.focal();
  const double x = (px + 0.5 - w / 2) / (f * w / 2);
  const double y = -(py + 0.5 - h / 2) / (f * h / 2);
  const Vec3 dir = (x * cam.right() + y * cam.up() + cam.forward()).normalized();
  const Mat3 r = (Eigen::AngleAxisd(b.euler.z(), Vec3::UnitZ()) * Eigen::AngleAxisd(b.euler.y(), Vec3::UnitY()) *
                  Eigen::AngleAxisd(b.euler.x(), Vec3::UnitX()))
                     .toRotationMatrix();
  const Mat3 inv_cov = (r * (c * b.aspect).asDiagonal() * r.transpose()).inverse();
  const double near = cam.radius() - 1, far = cam.radius() + 1, delta = (far - near) / n;
  double tau = 0;
  for (int k = 1; k <= n; ++k) {
    const Vec3 p = cam.position() + (near + (k - 0.5) * delta) * dir - b.center;
    tau += delta / (1 + std::exp(p.dot(inv_cov * p) - b.scale));
  }
  return 1 - std::exp(-tau);
}

}  // namespace

TEST(Accumulate, SingleSample) {
  EXPECT_NEAR(accumulate_opacity({0.8}, {2.0}), 0.7981034820053446, 1e-15);
}

TEST(Accumulate, MatchesClosedForm) {
  Rng rng(2);
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> s(32), d(32, 2.0 / 32);
    double tau = 0;
    for (double& v : s) {
      v = rng.uniform(0, 3);
      tau += v * d[0];
    }
    EXPECT_NEAR(accumulate_opacity(s, d), -std::expm1(-tau), 1e-13);
  }
}

TEST(Accumulate, EmptyAndZeroDensity) {
  EXPECT_EQ(accumulate_opacity({}, {}), 0.0);
  EXPECT_EQ(accumulate_opacity({0, 0, 0}, {1, 1, 1}), 0.0);
}

TEST(Sampling, MidpointsAndStrata) {
  SamplingConfig cfg;
  cfg.near = 2;
  cfg.far = 4;
  cfg.samples = 4;
  std::vector<double> t;
  sample_distances(cfg, 0, t);
  EXPECT_EQ(t, (std::vector<double>{2.25, 2.75, 3.25, 3.75}));

  cfg.stratified_seed = 17;
  std::vector<double> a, b, c;
  sample_distances(cfg, 5, a);
  sample_distances(cfg, 5, b);
  sample_distances(cfg, 6, c);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  for (int k = 0; k < 4; ++k) {
    EXPECT_GE(a[static_cast<std::size_t>(k)], 2 + 0.5 * k);
    EXPECT_LT(a[static_cast<std::size_t>(k)], 2 + 0.5 * (k + 1));
  }
}

TEST(Sampling, RejectsBadConfig) {
  SamplingConfig cfg;
  cfg.samples = 1;
  EXPECT_THROW(cfg.validate(), Error);
  cfg.samples = 8;
  cfg.near = 5;
  cfg.far = 4;
  EXPECT_THROW(cfg.validate(), Error);
}

TEST(OpacityMap, MatchesScalarReference) {
  const Blob b = make_blob(Vec3(0.45, 0.55, 0.5), 3.5, Vec3(0.9, 0.4, 0.6), Vec3(0.3, -0.4, 0.2));
  const Camera cam = Camera::make(0.4, 0.2, 3.0, 2.5, 24, 16);
  const Map2D m = opacity_map(b, 0.02, cam, SamplingConfig::for_camera(cam, 32));
  for (int py = 0; py < 16; ++py)
    for (int px = 0; px < 24; ++px) EXPECT_NEAR(m(py, px), reference_opacity(b, 0.02, cam, px, py, 32), 1e-12);
  EXPECT_GT(m.maxCoeff(), 0.3);
}

TEST(OpacityMap, InactiveBlobIsTransparent) {
  Blob b = make_blob(Vec3::Constant(0.5), 4.0);
  b.active = false;
  const Camera cam = Camera::make(0, 0, 3, 2.5, 8, 8);
  EXPECT_TRUE(opacity_map(b, 0.02, cam, SamplingConfig::for_camera(cam)).isZero(0.0));
}

TEST(OpacityMap, ThreadCountDoesNotChangeValues) {
  const Blob b = make_blob(Vec3(0.5, 0.4, 0.6), 4.0, Vec3(0.5, 0.8, 0.3));
  const Camera cam = Camera::make(0.2, -0.1, 3, 2.5, 32, 32);
  SamplingConfig cfg = SamplingConfig::for_camera(cam);
  cfg.stratified_seed = 4;
  const Map2D one = opacity_map(b, 0.02, cam, cfg, 1);
  EXPECT_EQ(one, opacity_map(b, 0.02, cam, cfg, 3));
  EXPECT_EQ(one, opacity_map(b, 0.02, cam, cfg, 8));
}

TEST(OpacityMap, StaysInUnitInterval) {
  Rng rng(8);
  for (int i = 0; i < 10; ++i) {
    const Blob b = make_blob(Vec3(rng.uniform(0.2, 0.8), rng.uniform(0.2, 0.8), rng.uniform(0.2, 0.8)),
                             rng.uniform(2, 8), Vec3(rng.uniform(0.3, 1), rng.uniform(0.3, 1), rng.uniform(0.3, 1)));
    const Camera cam = Camera::make(rng.uniform(-3, 3), rng.uniform(-1, 1), 3, 2.5, 16, 16);
    const Map2D m = opacity_map(b, 0.02, cam, SamplingConfig::for_camera(cam));
    EXPECT_GE(m.minCoeff(), 0.0);
    EXPECT_LT(m.maxCoeff(), 1.0);
  }
}

TEST(FeatureMap, ScalesFeatureByOpacity) {
  Map2D o(1, 2);
  o << 0.25, 1.0;
  const Grid g = feature_map(o, Eigen::Vector3d(1, 2, 4));
  EXPECT_EQ(g(0, 0, 2), 1.0);
  EXPECT_EQ(g(0, 1, 1), 2.0);
}

TEST(Pyramid, AreaAveragePooling) {
  Map2D m(2, 4);
  m << 1, 2, 3, 4, 5, 6, 7, 8;
  const Map2D p = pool_2x(m);
  ASSERT_EQ(p.rows(), 1);
  EXPECT_EQ(p(0, 0), 3.5);
  EXPECT_EQ(p(0, 1), 5.5);
  EXPECT_THROW(pool_2x(Map2D::Zero(3, 4)), Error);
}

TEST(Pyramid, LevelsHalveAndPreserveMean) {
  Rng rng(1);
  Map2D base(64, 64);
  for (Eigen::Index k = 0; k < base.size(); ++k) base.data()[k] = rng.uniform();
  const auto levels = opacity_pyramid(base, 2);
  ASSERT_EQ(levels.size(), 3u);
  EXPECT_EQ(levels[2].rows(), 16);
  EXPECT_NEAR(levels[2].mean(), base.mean(), 1e-14);
  try {
    (void)opacity_pyramid(Map2D::Zero(12, 12), 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::IndivisibleResolution);
  }
}
