#pragma once

#include <Eigen/Core>
#include <vector>

namespace xlra {

/// Bunge Z-X-Z Euler angles in radians.
struct Orientation {
  double phi1 = 0.0;
  double Phi = 0.0;
  double phi2 = 0.0;

  bool operator==(const Orientation&) const = default;
};

using Matrix3 = Eigen::Matrix3d;

/// Active rotation taking crystal-frame vectors to sample-frame vectors,
/// Rz(phi1) Rx(Phi) Rz(phi2). Its transpose is the usual Bunge matrix g.
Matrix3 rotation_matrix(const Orientation& g);

/// Inverse of rotation_matrix; angles wrapped to phi1, phi2 in [0, 2pi),
/// Phi in [0, pi]. At the Phi = 0 or pi gimbal points phi2 is set to 0.
Orientation from_rotation_matrix(const Matrix3& r);

/// Composition g o q: apply crystal-frame rotation q, then g.
Orientation compose(const Orientation& g, const Matrix3& q);

/// The 24 proper rotations of the cubic point group (signed permutation
/// matrices with determinant +1).
const std::vector<Matrix3>& cubic_rotations();

/// Wrap angles into their canonical ranges.
Orientation normalized(const Orientation& g);

}  // namespace xlra
