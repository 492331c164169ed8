// SPDX-FileCopyrightText: 2026 blobfield authors
// SPDX-License-Identifier: Apache-2.0

#include "blobfield/upsampler.hpp"

#include "blobfield/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace blobfield {

UpsamplerParams UpsamplerParams::zero_init(Eigen::Index channels, Eigen::Index feature_dim) {
  UpsamplerParams p;
  p.conv_weights = Eigen::MatrixXd::Zero(4 * channels, channels);
  p.mod_affine_w = Eigen::MatrixXd::Identity(channels, feature_dim);
  p.mod_affine_b = Eigen::VectorXd::Zero(channels);
  return p;
}

void UpsamplerParams::validate() const {
  const Eigen::Index c = conv_weights.cols();
  if (c < 1 || conv_weights.rows() != 4 * c)
    throw Error(ErrorKind::ShapeMismatch, "conv_weights must be (4C) x C", "conv_weights");
  if (mod_affine_w.rows() != c) throw Error(ErrorKind::ShapeMismatch, "mod_affine_w must have C rows", "mod_affine_w");
  if (mod_affine_b.size() != c) throw Error(ErrorKind::ShapeMismatch, "mod_affine_b must have C entries", "mod_affine_b");
  if (!conv_weights.allFinite() || !mod_affine_w.allFinite() || !mod_affine_b.allFinite())
    throw Error(ErrorKind::ShapeMismatch, "parameters must be finite");
}

namespace {

struct Tap {
  Eigen::Index lo;
  Eigen::Index hi;
  double frac;
};

Tap tap(Eigen::Index out_index, Eigen::Index in_size) {
  const double src = std::clamp((out_index + 0.5) / 2.0 - 0.5, 0.0, static_cast<double>(in_size - 1));
  const auto lo = static_cast<Eigen::Index>(std::floor(src));
  return {lo, std::min(lo + 1, in_size - 1), src - static_cast<double>(lo)};
}

}  // namespace

Grid bilinear_2x(const Grid& x) {
  const Eigen::Index h = x.height(), w = x.width(), c = x.channels();
  Grid out(2 * h, 2 * w, c);
  for (Eigen::Index oy = 0; oy < 2 * h; ++oy) {
    const Tap ty = tap(oy, h);
    for (Eigen::Index ox = 0; ox < 2 * w; ++ox) {
      const Tap tx = tap(ox, w);
      for (Eigen::Index ch = 0; ch < c; ++ch) {
        // a + f (b - a) keeps constant inputs exact.
        const double a0 = x(ty.lo, tx.lo, ch), b0 = x(ty.lo, tx.hi, ch);
        const double a1 = x(ty.hi, tx.lo, ch), b1 = x(ty.hi, tx.hi, ch);
        const double top = a0 + tx.frac * (b0 - a0);
        const double bottom = a1 + tx.frac * (b1 - a1);
        out(oy, ox, ch) = top + ty.frac * (bottom - top);
      }
    }
  }
  return out;
}

Grid mod_conv_1x1(const Grid& x, const UpsamplerParams& params, const VecX& blob_feature) {
  params.validate();
  if (x.channels() != params.channels())
    throw Error(ErrorKind::ShapeMismatch,
                "input has " + std::to_string(x.channels()) + " channels, weights expect " + std::to_string(params.channels()));
  if (blob_feature.size() != params.mod_affine_w.cols())
    throw Error(ErrorKind::ShapeMismatch, "blob feature length does not match mod_affine_w", "blob_feature");

  const VecX modulation = params.mod_affine_w * blob_feature + params.mod_affine_b;
  Eigen::MatrixXd weights = params.conv_weights * modulation.asDiagonal();
  if (params.demodulate) {
    const VecX scale = (weights.rowwise().squaredNorm().array() + 1e-8).rsqrt();
    weights = scale.asDiagonal() * weights;
  }
  Grid out(x.height(), x.width(), weights.rows());
  out.data() = x.data() * weights.transpose();
  return out;
}

Grid pixel_shuffle_2x(const Grid& x) {
  if (x.channels() % 4 != 0)
    throw Error(ErrorKind::ChannelsNotDivisible, "channel count " + std::to_string(x.channels()) + " is not divisible by 4");
  const Eigen::Index c = x.channels() / 4;
  Grid out(2 * x.height(), 2 * x.width(), c);
  for (Eigen::Index y = 0; y < x.height(); ++y)
    for (Eigen::Index xx = 0; xx < x.width(); ++xx)
      for (Eigen::Index ch = 0; ch < c; ++ch)
        for (int q = 0; q < 4; ++q) out(2 * y + q / 2, 2 * xx + q % 2, ch) = x(y, xx, 4 * ch + q);
  return out;
}

Grid pixel_unshuffle_2x(const Grid& x) {
  if (x.height() % 2 != 0 || x.width() % 2 != 0)
    throw Error(ErrorKind::IndivisibleResolution, "side lengths must be even");
  const Eigen::Index c = x.channels();
  Grid out(x.height() / 2, x.width() / 2, 4 * c);
  for (Eigen::Index y = 0; y < out.height(); ++y)
    for (Eigen::Index xx = 0; xx < out.width(); ++xx)
      for (Eigen::Index ch = 0; ch < c; ++ch)
        for (int q = 0; q < 4; ++q) out(y, xx, 4 * ch + q) = x(2 * y + q / 2, 2 * xx + q % 2, ch);
  return out;
}

Grid upsample_block(const Grid& x, const UpsamplerParams& params, const VecX& blob_feature) {
  Grid out = bilinear_2x(x);
  out.data() += pixel_shuffle_2x(mod_conv_1x1(x, params, blob_feature)).data();
  return out;
}

Map2D upsample_map(const Map2D& map, const UpsamplerParams& params, const VecX& blob_feature) {
  Grid g(map.rows(), map.cols(), 1);
  g.data().col(0) = Eigen::Map<const VecX>(map.data(), map.size());
  const Grid up = upsample_block(g, params, blob_feature);
  Map2D out(up.height(), up.width());
  Eigen::Map<VecX>(out.data(), out.size()) = up.data().col(0);
  return out;
}

}  // namespace blobfield
