// SPDX-FileCopyrightText: 2026 blobfield authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "blobfield/types.hpp"

namespace blobfield {

/// Parameters of the learned branch X_up = Bilinear(X) + PixelShuffle(ModConv(X)).
struct UpsamplerParams {
  /// (4C) x C weights of the 1x1 convolution.
  Eigen::MatrixXd conv_weights;
  /// C x d_s affine map from a blob feature vector to the per-input-channel
  /// modulation m = A f + b.
  Eigen::MatrixXd mod_affine_w;
  Eigen::VectorXd mod_affine_b;
  bool demodulate = false;

  [[nodiscard]] Eigen::Index channels() const { return conv_weights.cols(); }

  /// Zero conv weights (the block starts out as plain bilinear upsampling) and
  /// an identity-like affine map truncated or zero-padded from d_s to C.
  static UpsamplerParams zero_init(Eigen::Index channels, Eigen::Index feature_dim);

  /// Throws ShapeMismatch when the shapes disagree or a value is non-finite.
  void validate() const;
};

/// 2x bilinear resize, half-pixel centers (source coordinate (i + 0.5)/2 - 0.5),
/// edge clamped.
Grid bilinear_2x(const Grid& x);

/// Per-pixel y = W' x with W'[o, i] = W[o, i] * m[i]; rows of W' rescaled to
/// unit norm (+1e-8) when demodulating. Output has 4C channels.
Grid mod_conv_1x1(const Grid& x, const UpsamplerParams& params, const VecX& blob_feature);

/// Channels 4c..4c+3 become the top-left, top-right, bottom-left and
/// bottom-right outputs of channel c. Throws ChannelsNotDivisible.
Grid pixel_shuffle_2x(const Grid& x);

/// Inverse rearrangement of pixel_shuffle_2x. Throws IndivisibleResolution.
Grid pixel_unshuffle_2x(const Grid& x);

Grid upsample_block(const Grid& x, const UpsamplerParams& params, const VecX& blob_feature);

/// Lifts a single-channel map with the block.
Map2D upsample_map(const Map2D& map, const UpsamplerParams& params, const VecX& blob_feature);

}  // namespace blobfield
