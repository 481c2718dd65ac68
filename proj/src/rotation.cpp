#include "xlra/rotation.hpp"

#include <Eigen/Geometry>
#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace xlra {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_two_pi(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a = 0.0;
  return a;
}

}  // namespace

Matrix3 rotation_matrix(const Orientation& g) {
  using Eigen::AngleAxisd;
  using Eigen::Vector3d;
  return (AngleAxisd(g.phi1, Vector3d::UnitZ()) * AngleAxisd(g.Phi, Vector3d::UnitX()) *
          AngleAxisd(g.phi2, Vector3d::UnitZ()))
      .toRotationMatrix();
}

Orientation from_rotation_matrix(const Matrix3& r) {
  // r = Rz(phi1) Rx(Phi) Rz(phi2):
  //   r(2,2) = cos Phi
  //   r(0,2) = sin phi1 sin Phi,  r(1,2) = -cos phi1 sin Phi
  //   r(2,0) = sin phi2 sin Phi,  r(2,1) =  cos phi2 sin Phi
  Orientation g;
  const double c = std::clamp(r(2, 2), -1.0, 1.0);
  const double s = std::hypot(r(0, 2), r(1, 2));
  g.Phi = std::atan2(s, c);
  if (s > 1e-12) {
    g.phi1 = std::atan2(r(0, 2), -r(1, 2));
    g.phi2 = std::atan2(r(2, 0), r(2, 1));
  } else {
    // Only phi1 +/- phi2 is defined; r(0,0) = cos(phi1 +/- phi2), r(1,0) = sin(...).
    g.phi1 = std::atan2(r(1, 0), r(0, 0));
    g.phi2 = 0.0;
  }
  return normalized(g);
}

Orientation compose(const Orientation& g, const Matrix3& q) {
  return from_rotation_matrix(rotation_matrix(g) * q);
}

Orientation normalized(const Orientation& g) {
  return {wrap_two_pi(g.phi1), std::clamp(g.Phi, 0.0, std::numbers::pi), wrap_two_pi(g.phi2)};
}

const std::vector<Matrix3>& cubic_rotations() {
  static const std::vector<Matrix3> group = [] {
    std::vector<Matrix3> out;
    std::array<int, 3> perm{0, 1, 2};
    do {
      for (int signs = 0; signs < 8; ++signs) {
        Matrix3 m = Matrix3::Zero();
        for (int i = 0; i < 3; ++i) m(i, perm[static_cast<std::size_t>(i)]) = ((signs >> i) & 1) ? -1.0 : 1.0;
        if (m.determinant() > 0.0) out.push_back(m);
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
  }();
  return group;
}

}  // namespace xlra
