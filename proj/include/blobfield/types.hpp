// SPDX-FileCopyrightText: 2026 blobfield authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cstddef>
#include <stdexcept>

namespace blobfield {

template <typename Scalar>
using Vec3T = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Mat3T = Eigen::Matrix<Scalar, 3, 3>;

using Vec3 = Vec3T<double>;
using Mat3 = Mat3T<double>;
using VecX = Eigen::VectorXd;

/// Dense row-major H×W grid (opacity maps, weight maps, depth maps).
using Map2D = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Dense H×W×C grid stored as an (H·W)×C row-major matrix: row `y*W + x` is the
/// channel vector at pixel (x, y).
template <typename Scalar>
class GridT {
 public:
  using Storage = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  GridT() = default;
  GridT(Eigen::Index height, Eigen::Index width, Eigen::Index channels)
      : height_(height), width_(width), data_(Storage::Zero(height * width, channels)) {}

  static GridT Constant(Eigen::Index height, Eigen::Index width, Eigen::Index channels, Scalar v) {
    GridT g(height, width, channels);
    g.data_.setConstant(v);
    return g;
  }

  [[nodiscard]] Eigen::Index height() const { return height_; }
  [[nodiscard]] Eigen::Index width() const { return width_; }
  [[nodiscard]] Eigen::Index channels() const { return data_.cols(); }
  [[nodiscard]] Eigen::Index pixels() const { return height_ * width_; }

  Scalar& operator()(Eigen::Index y, Eigen::Index x, Eigen::Index c) { return data_(y * width_ + x, c); }
  Scalar operator()(Eigen::Index y, Eigen::Index x, Eigen::Index c) const { return data_(y * width_ + x, c); }

  auto pixel(Eigen::Index y, Eigen::Index x) { return data_.row(y * width_ + x); }
  auto pixel(Eigen::Index y, Eigen::Index x) const { return data_.row(y * width_ + x); }

  Storage& data() { return data_; }
  const Storage& data() const { return data_; }

  bool operator==(const GridT& o) const {
    return height_ == o.height_ && width_ == o.width_ && data_.cols() == o.data_.cols() && data_ == o.data_;
  }

 private:
  Eigen::Index height_ = 0;
  Eigen::Index width_ = 0;
  Storage data_;
};

using Grid = GridT<double>;

/// One geometric parameter of a blob, in the order used by gradient vectors:
/// center x,y,z, scale, aspect 1..3, euler 1..3.
inline constexpr int kGeometricParams = 10;

}  // namespace blobfield
