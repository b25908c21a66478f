#pragma once

#include <Eigen/Core>

namespace tdg {

/// Orientation of an element's plane-wave direction set.  In 2D the set is
/// rotated by `angle`; in 3D every reference direction is multiplied by the
/// orthogonal matrix `rotation`, which maps (0,0,1) to the first direction.
struct DirectionFrame {
  double angle = 0.0;
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();

  friend bool operator==(const DirectionFrame& a, const DirectionFrame& b) {
    return a.angle == b.angle && a.rotation == b.rotation;
  }
};

}  // namespace tdg
