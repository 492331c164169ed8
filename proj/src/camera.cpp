// SPDX-FileCopyrightText: 2026 blobfield authors
// SPDX-License-Identifier: Apache-2.0

#include "blobfield/camera.hpp"

#include "blobfield/error.hpp"
#include "blobfield/scene.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace blobfield {

Camera Camera::make(double yaw, double pitch, double radius, double focal, int width, int height) {
  if (!std::isfinite(yaw) || !std::isfinite(pitch)) throw Error(ErrorKind::InvalidArgument, "angles must be finite", "camera");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw Error(ErrorKind::InvalidArgument, "radius must be > 0", "camera.radius");
  if (!(focal > 0.0) || !std::isfinite(focal)) throw Error(ErrorKind::InvalidArgument, "focal must be > 0", "camera.focal");
  if (std::abs(pitch) >= std::numbers::pi / 2) throw Error(ErrorKind::InvalidArgument, "|pitch| must be < pi/2", "camera.pitch");
  if (width < 1 || height < 1) throw Error(ErrorKind::InvalidArgument, "image size must be >= 1", "camera.width");

  Camera cam;
  cam.yaw_ = yaw;
  cam.pitch_ = pitch;
  cam.radius_ = radius;
  cam.focal_ = focal;
  cam.width_ = width;
  cam.height_ = height;

  const Vec3 offset(std::cos(pitch) * std::sin(yaw), std::sin(pitch), std::cos(pitch) * std::cos(yaw));
  cam.position_ = scene_center() + radius * offset;
  cam.forward_ = -offset;
  cam.right_ = cam.forward_.cross(Vec3::UnitY()).normalized();
  cam.up_ = cam.right_.cross(cam.forward_);
  return cam;
}

Camera Camera::with_resolution(int width, int height) const {
  return make(yaw_, pitch_, radius_, focal_, width, height);
}

Vec3 Camera::to_camera(const Vec3& world) const {
  const Vec3 rel = world - position_;
  return {right_.dot(rel), up_.dot(rel), forward_.dot(rel)};
}

Ray ray_for_pixel(const Camera& camera, int px, int py) {
  if (px < 0 || px >= camera.width() || py < 0 || py >= camera.height())
    throw Error(ErrorKind::OutOfBounds, "pixel outside the image",
                "(" + std::to_string(px) + ", " + std::to_string(py) + ")");
  const double half_w = 0.5 * camera.width();
  const double half_h = 0.5 * camera.height();
  const double x = (px + 0.5 - half_w) / (camera.focal() * half_w);
  const double y = -(py + 0.5 - half_h) / (camera.focal() * half_h);
  const Vec3 dir = x * camera.right() + y * camera.up() + camera.forward();
  return {camera.position(), dir.normalized()};
}

double centroid_depth(const Camera& camera, const Vec3& point) {
  return camera.forward().dot(point - camera.position());
}

PixelCoord project(const Camera& camera, const Vec3& point) {
  const Vec3 p = camera.to_camera(point);
  if (!(p.z() > 0.0)) throw Error(ErrorKind::BehindCamera, "point is not in front of the camera");
  const double half_w = 0.5 * camera.width();
  const double half_h = 0.5 * camera.height();
  return {half_w + camera.focal() * half_w * p.x() / p.z(), half_h - camera.focal() * half_h * p.y() / p.z()};
}

}  // namespace blobfield
