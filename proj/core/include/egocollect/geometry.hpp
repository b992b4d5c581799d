// Copyright 2026 The egocollect Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <span>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace egocollect::geometry {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Rotation stored as a normalized quaternion. Matrices are derived on demand.
class UnitQuaternion {
 public:
  UnitQuaternion() : q_(Eigen::Quaterniond::Identity()) {}
  UnitQuaternion(double w, double x, double y, double z);
  explicit UnitQuaternion(const Eigen::Quaterniond& q);

  static UnitQuaternion identity() { return {}; }
  static UnitQuaternion from_matrix(const Mat3& rotation);
  static UnitQuaternion from_axis_angle(const Vec3& axis, double angle_rad);

  double w() const { return q_.w(); }
  double x() const { return q_.x(); }
  double y() const { return q_.y(); }
  double z() const { return q_.z(); }

  Mat3 matrix() const { return q_.toRotationMatrix(); }
  Vec3 rotate(const Vec3& v) const { return q_ * v; }
  UnitQuaternion inverse() const { return UnitQuaternion(q_.conjugate()); }
  const Eigen::Quaterniond& eigen() const { return q_; }

  /// Rotation angle in [0, pi], computed as 2*acos(|w|).
  double angle() const;

  UnitQuaternion operator*(const UnitQuaternion& rhs) const {
    return UnitQuaternion(q_ * rhs.q_);
  }

  // q and -q describe the same rotation.
  bool same_rotation(const UnitQuaternion& other, double tol = 1e-9) const;

 private:
  Eigen::Quaterniond q_;
};

struct PoseSE3 {
  UnitQuaternion rotation;
  Vec3 translation = Vec3::Zero();

  static PoseSE3 identity() { return {}; }
};

struct Sim3Transform {
  double scale = 1.0;
  UnitQuaternion rotation;
  Vec3 translation = Vec3::Zero();

  static Sim3Transform identity() { return {}; }
  static Sim3Transform from_pose(const PoseSE3& pose) {
    return {1.0, pose.rotation, pose.translation};
  }
};

PoseSE3 compose_se3(const PoseSE3& a, const PoseSE3& b);
PoseSE3 invert(const PoseSE3& pose);
Vec3 apply(const PoseSE3& pose, const Vec3& p);

Vec3 apply_sim3(const Sim3Transform& t, const Vec3& p);
Sim3Transform compose_sim3(const Sim3Transform& a, const Sim3Transform& b);
Sim3Transform invert(const Sim3Transform& t);

/// Closed-form least-squares similarity (or rigid, when estimate_scale is
/// false) transform mapping src onto dst. Throws DegenerateInput for fewer
/// than 3 points, size mismatch, or a src cloud of rank < 2.
Sim3Transform umeyama_align(std::span<const Vec3> src, std::span<const Vec3> dst,
                            bool estimate_scale);

/// Sum of squared residuals of apply_sim3(t, src[i]) - dst[i].
double alignment_residual(const Sim3Transform& t, std::span<const Vec3> src,
                          std::span<const Vec3> dst);

struct CameraIntrinsics {
  double fx = 0, fy = 0, cx = 0, cy = 0;
  double k1 = 0, k2 = 0, k3 = 0;
  int width = 0, height = 0;

  /// Throws InvalidArgument when fx/fy are not positive or the principal
  /// point lies outside the image.
  void validate() const;
};

struct PixelPoint {
  double u = 0, v = 0;
};

/// Pinhole projection with 3-term radial distortion. Throws BehindCamera for z <= 0.
PixelPoint project(const CameraIntrinsics& intr, const Vec3& p_cam);

/// Inverts the linear pixel map only (no undistortion).
Eigen::Vector2d pixel_to_normalized(const CameraIntrinsics& intr, const PixelPoint& px);

struct DeviationReport {
  // 100 * |factory - reference| / |reference|
  double fx_pct = 0, fy_pct = 0, cx_pct = 0, cy_pct = 0;
  // Absolute differences; distortion is near zero so a relative figure is meaningless.
  double k1_abs = 0, k2_abs = 0, k3_abs = 0;
  // Over {fx, fy, cx, cy}; std is the population std (divide by 4).
  double mean_pct = 0, std_pct = 0;
};

DeviationReport intrinsics_deviation(const CameraIntrinsics& factory,
                                     const CameraIntrinsics& reference);

}  // namespace egocollect::geometry
