// SPDX-FileCopyrightText: 2026 blobfield authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "blobfield/scene.hpp"
#include "blobfield/types.hpp"

#include <array>
#include <cmath>

namespace blobfield {

/// R = Rz(gamma) * Ry(beta) * Rx(alpha) for angles (alpha, beta, gamma):
/// extrinsic rotation about X, then Y, then Z.
template <typename Scalar>
Mat3T<Scalar> rotation_from_euler(const Vec3T<Scalar>& angles) {
  using std::cos;
  using std::sin;
  const Scalar ca = cos(angles(0)), sa = sin(angles(0));
  const Scalar cb = cos(angles(1)), sb = sin(angles(1));
  const Scalar cg = cos(angles(2)), sg = sin(angles(2));
  Mat3T<Scalar> rx, ry, rz;
  rx << Scalar(1), Scalar(0), Scalar(0), Scalar(0), ca, -sa, Scalar(0), sa, ca;
  ry << cb, Scalar(0), sb, Scalar(0), Scalar(1), Scalar(0), -sb, Scalar(0), cb;
  rz << cg, -sg, Scalar(0), sg, cg, Scalar(0), Scalar(0), Scalar(0), Scalar(1);
  return rz * ry * rx;
}

/// Partial derivatives of rotation_from_euler with respect to each angle.
template <typename Scalar>
std::array<Mat3T<Scalar>, 3> rotation_partials(const Vec3T<Scalar>& angles) {
  using std::cos;
  using std::sin;
  const Scalar ca = cos(angles(0)), sa = sin(angles(0));
  const Scalar cb = cos(angles(1)), sb = sin(angles(1));
  const Scalar cg = cos(angles(2)), sg = sin(angles(2));
  Mat3T<Scalar> rx, ry, rz, drx, dry, drz;
  rx << Scalar(1), Scalar(0), Scalar(0), Scalar(0), ca, -sa, Scalar(0), sa, ca;
  ry << cb, Scalar(0), sb, Scalar(0), Scalar(1), Scalar(0), -sb, Scalar(0), cb;
  rz << cg, -sg, Scalar(0), sg, cg, Scalar(0), Scalar(0), Scalar(0), Scalar(1);
  drx << Scalar(0), Scalar(0), Scalar(0), Scalar(0), -sa, -ca, Scalar(0), ca, -sa;
  dry << -sb, Scalar(0), cb, Scalar(0), Scalar(0), Scalar(0), -cb, Scalar(0), -sb;
  drz << -sg, -cg, Scalar(0), cg, -sg, Scalar(0), Scalar(0), Scalar(0), Scalar(0);
  return {rz * ry * drx, rz * dry * rx, drz * ry * rx};
}

/// R * (c * diag(aspect)) * R^T.
template <typename Scalar>
Mat3T<Scalar> blob_covariance(const Vec3T<Scalar>& aspect, const Vec3T<Scalar>& euler, Scalar sharpness) {
  const Mat3T<Scalar> r = rotation_from_euler(euler);
  return r * (sharpness * aspect).asDiagonal() * r.transpose();
}

template <typename Scalar>
Scalar logistic(Scalar x) {
  using std::exp;
  // Branches keep exp() from overflowing for large |x|.
  if (x >= Scalar(0)) return Scalar(1) / (Scalar(1) + exp(-x));
  const Scalar e = exp(x);
  return e / (Scalar(1) + e);
}

/// Geometry of one blob with the per-query invariants precomputed.
template <typename Scalar>
struct BlobFrame {
  Vec3T<Scalar> center;
  Mat3T<Scalar> rotation;
  Vec3T<Scalar> inv_axis;  // 1 / (c * a_k)
  Scalar scale;
  bool active;

  BlobFrame(const Vec3T<Scalar>& center_, Scalar scale_, const Vec3T<Scalar>& aspect, const Vec3T<Scalar>& euler,
            Scalar sharpness, bool active_ = true)
      : center(center_),
        rotation(rotation_from_euler(euler)),
        inv_axis((sharpness * aspect).cwiseInverse()),
        scale(scale_),
        active(active_) {}

  /// Squared Mahalanobis distance via the rotated-diagonal form
  /// d = sum_k (R^T (x - c))_k^2 / (c * a_k).
  Scalar mahalanobis_sq(const Vec3T<Scalar>& x) const {
    const Vec3T<Scalar> local = rotation.transpose() * (x - center);
    return local.cwiseAbs2().dot(inv_axis);
  }

  Scalar density(const Vec3T<Scalar>& x) const {
    if (!active) return Scalar(0);
    return logistic(scale - mahalanobis_sq(x));
  }
};

inline BlobFrame<double> make_frame(const Blob& blob, double sharpness) {
  return BlobFrame<double>(blob.center, blob.scale, blob.aspect, blob.euler, sharpness, blob.active);
}

inline double mahalanobis_sq(const Vec3& query, const Blob& blob, double sharpness) {
  return make_frame(blob, sharpness).mahalanobis_sq(query);
}

/// sigmoid(s - d); exactly 0 for inactive blobs.
inline double density(const Vec3& query, const Blob& blob, double sharpness) {
  return make_frame(blob, sharpness).density(query);
}

}  // namespace blobfield
