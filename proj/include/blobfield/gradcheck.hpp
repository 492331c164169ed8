// SPDX-FileCopyrightText: 2026 blobfield authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "blobfield/gradients.hpp"

#include <cstdint>
#include <string>

namespace blobfield {

struct GradcheckConfig {
  std::uint64_t seed = 1;
  int trials = 100;
  int min_blobs = 1;
  int max_blobs = 4;
  int resolution = 32;
  int samples_per_ray = kDefaultSamplesPerRay;
  double step = 1e-5;
  /// Scenes whose closest pair of centroid depths is nearer than this are
  /// redrawn: the depth order is not differentiable at a tie.
  double min_depth_gap = 1e-3;
  double depth_lambda = 0.1;
  int threads = 0;

  /// Throws InvalidArgument.
  void validate() const;
};

struct GradcheckReport {
  double max_relative_error = 0.0;
  int trials = 0;
  int redrawn = 0;
  int checked = 0;
  int worst_trial = -1;
  FdReport worst;

  [[nodiscard]] std::string to_json() const;
};

/// Compares the analytic gradient of the fitting loss (weight maps against a
/// second random scene, plus a depth term) with central differences over
/// random scenes and cameras.
GradcheckReport run_gradcheck(const GradcheckConfig& cfg);

}  // namespace blobfield
