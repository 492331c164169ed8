// SPDX-FileCopyrightText: 2026 blobfield authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "blobfield/scene.hpp"

namespace blobfield::testing {

inline Blob make_blob(const Vec3& center, double scale, const Vec3& aspect = Vec3::Ones(),
                      const Vec3& euler = Vec3::Zero(), int feature_dim = 4, int style_dim = 2) {
  Blob b;
  b.center = center;
  b.scale = scale;
  b.aspect = aspect;
  b.euler = euler;
  b.feature = VecX::LinSpaced(feature_dim, 0.1, 0.4);
  b.style = VecX::LinSpaced(style_dim, -1.0, 1.0);
  return b;
}

inline SceneLayout make_scene(std::vector<Blob> blobs, int feature_dim = 4, int style_dim = 2) {
  SceneLayout s;
  s.blobs = std::move(blobs);
  s.feature_dim = feature_dim;
  s.style_dim = style_dim;
  s.background_feature = VecX::Zero(feature_dim);
  s.background_style = VecX::Zero(style_dim);
  return s;
}

}  // namespace blobfield::testing
