// SPDX-FileCopyrightText: 2026 blobfield authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "blobfield/types.hpp"

namespace blobfield {

inline constexpr double kDefaultFocal = 2.5;
inline constexpr double kDefaultRadius = 3.0;

struct Ray {
  Vec3 origin;
  Vec3 direction;  // unit length
};

/// Continuous image coordinates; pixel (px, py) covers [px, px+1) x [py, py+1)
/// and its center sits at (px + 0.5, py + 0.5). y grows downward.
struct PixelCoord {
  double u = 0.0;
  double v = 0.0;
};

/// Pinhole camera on an orbit around the scene center, looking at it.
class Camera {
 public:
  /// Throws InvalidArgument for radius <= 0, focal <= 0, |pitch| >= pi/2 or
  /// an empty image.
  static Camera make(double yaw, double pitch, double radius = kDefaultRadius, double focal = kDefaultFocal,
                     int width = 256, int height = 256);

  [[nodiscard]] double yaw() const { return yaw_; }
  [[nodiscard]] double pitch() const { return pitch_; }
  [[nodiscard]] double radius() const { return radius_; }
  [[nodiscard]] double focal() const { return focal_; }
  [[nodiscard]] int width() const { return width_; }
  [[nodiscard]] int height() const { return height_; }

  [[nodiscard]] const Vec3& position() const { return position_; }
  [[nodiscard]] const Vec3& forward() const { return forward_; }
  [[nodiscard]] const Vec3& right() const { return right_; }
  [[nodiscard]] const Vec3& up() const { return up_; }

  /// Same pose and intrinsics rendered at a different pixel grid.
  [[nodiscard]] Camera with_resolution(int width, int height) const;

  /// World point expressed in the camera frame (right, up, forward).
  [[nodiscard]] Vec3 to_camera(const Vec3& world) const;

  bool operator==(const Camera& o) const {
    return yaw_ == o.yaw_ && pitch_ == o.pitch_ && radius_ == o.radius_ && focal_ == o.focal_ &&
           width_ == o.width_ && height_ == o.height_;
  }

 private:
  Camera() = default;

  double yaw_ = 0.0;
  double pitch_ = 0.0;
  double radius_ = kDefaultRadius;
  double focal_ = kDefaultFocal;
  int width_ = 1;
  int height_ = 1;
  Vec3 position_;
  Vec3 forward_;
  Vec3 right_;
  Vec3 up_;
};

inline Camera make_camera(double yaw, double pitch, double radius, double focal, int width, int height) {
  return Camera::make(yaw, pitch, radius, focal, width, height);
}

/// Ray through the center of pixel (px, py). Throws OutOfBounds.
Ray ray_for_pixel(const Camera& camera, int px, int py);

/// Camera-frame z of `point`; positive in front of the camera.
double centroid_depth(const Camera& camera, const Vec3& point);

/// Perspective projection. Throws BehindCamera when the depth is <= 0.
PixelCoord project(const Camera& camera, const Vec3& point);

/// Pixels per world unit at `depth` along the image x axis (foreshortening scale).
inline double pixels_per_unit(const Camera& camera, double depth) {
  return camera.focal() * camera.width() * 0.5 / depth;
}

}  // namespace blobfield
