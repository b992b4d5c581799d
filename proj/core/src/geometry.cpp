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

#include "egocollect/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/SVD>

#include "egocollect/error.hpp"

namespace egocollect::geometry {

UnitQuaternion::UnitQuaternion(double w, double x, double y, double z)
    : UnitQuaternion(Eigen::Quaterniond(w, x, y, z)) {}

UnitQuaternion::UnitQuaternion(const Eigen::Quaterniond& q) : q_(q) {
  const double n = q_.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw Error(ErrorCode::kInvalidArgument, "quaternion norm must be positive and finite");
  }
  q_.coeffs() /= n;
}

UnitQuaternion UnitQuaternion::from_matrix(const Mat3& rotation) {
  return UnitQuaternion(Eigen::Quaterniond(rotation));
}

UnitQuaternion UnitQuaternion::from_axis_angle(const Vec3& axis, double angle_rad) {
  return UnitQuaternion(Eigen::Quaterniond(Eigen::AngleAxisd(angle_rad, axis.normalized())));
}

double UnitQuaternion::angle() const {
  const double w = std::min(1.0, std::abs(q_.w()));
  return std::clamp(2.0 * std::acos(w), 0.0, std::numbers::pi);
}

bool UnitQuaternion::same_rotation(const UnitQuaternion& other, double tol) const {
  const Eigen::Vector4d a = q_.coeffs();
  const Eigen::Vector4d b = other.q_.coeffs();
  return (a - b).cwiseAbs().maxCoeff() <= tol || (a + b).cwiseAbs().maxCoeff() <= tol;
}

PoseSE3 compose_se3(const PoseSE3& a, const PoseSE3& b) {
  return {a.rotation * b.rotation, a.rotation.rotate(b.translation) + a.translation};
}

PoseSE3 invert(const PoseSE3& pose) {
  const UnitQuaternion inv = pose.rotation.inverse();
  return {inv, -inv.rotate(pose.translation)};
}

Vec3 apply(const PoseSE3& pose, const Vec3& p) {
  return pose.rotation.rotate(p) + pose.translation;
}

Vec3 apply_sim3(const Sim3Transform& t, const Vec3& p) {
  return t.scale * t.rotation.rotate(p) + t.translation;
}

Sim3Transform compose_sim3(const Sim3Transform& a, const Sim3Transform& b) {
  return {a.scale * b.scale, a.rotation * b.rotation,
          a.scale * a.rotation.rotate(b.translation) + a.translation};
}

Sim3Transform invert(const Sim3Transform& t) {
  const UnitQuaternion inv = t.rotation.inverse();
  const double s = 1.0 / t.scale;
  return {s, inv, -s * inv.rotate(t.translation)};
}

Sim3Transform umeyama_align(std::span<const Vec3> src, std::span<const Vec3> dst,
                            bool estimate_scale) {
  if (src.size() != dst.size()) {
    throw Error(ErrorCode::kDegenerateInput,
                "point set sizes differ (" + std::to_string(src.size()) + " vs " +
                    std::to_string(dst.size()) + ")");
  }
  if (src.size() < 3) {
    throw Error(ErrorCode::kDegenerateInput, "need at least 3 correspondences");
  }
  const double n = static_cast<double>(src.size());

  Vec3 mu_src = Vec3::Zero();
  Vec3 mu_dst = Vec3::Zero();
  for (std::size_t i = 0; i < src.size(); ++i) {
    mu_src += src[i];
    mu_dst += dst[i];
  }
  mu_src /= n;
  mu_dst /= n;

  Mat3 src_scatter = Mat3::Zero();
  Mat3 cross = Mat3::Zero();
  double src_var = 0.0;
  for (std::size_t i = 0; i < src.size(); ++i) {
    const Vec3 s = src[i] - mu_src;
    const Vec3 d = dst[i] - mu_dst;
    src_scatter += s * s.transpose();
    cross += d * s.transpose();
    src_var += s.squaredNorm();
  }
  cross /= n;
  src_var /= n;

  // Rank test on the centered source cloud.
  const Eigen::Vector3d src_sv = Eigen::JacobiSVD<Mat3>(src_scatter).singularValues();
  if (!(src_sv(0) > 0.0) || src_sv(1) < 1e-12 * src_sv(0)) {
    throw Error(ErrorCode::kDegenerateInput, "source points are collinear or coincident");
  }

  Eigen::JacobiSVD<Mat3> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Mat3& u = svd.matrixU();
  const Mat3& v = svd.matrixV();
  Eigen::Vector3d sign = Eigen::Vector3d::Ones();
  if (u.determinant() * v.determinant() < 0.0) sign(2) = -1.0;

  const Mat3 rotation = u * sign.asDiagonal() * v.transpose();
  const double scale =
      estimate_scale ? svd.singularValues().dot(sign) / src_var : 1.0;

  Sim3Transform out;
  out.scale = scale;
  out.rotation = UnitQuaternion::from_matrix(rotation);
  out.translation = mu_dst - scale * (rotation * mu_src);
  return out;
}

double alignment_residual(const Sim3Transform& t, std::span<const Vec3> src,
                          std::span<const Vec3> dst) {
  double sum = 0.0;
  for (std::size_t i = 0; i < src.size(); ++i) {
    sum += (apply_sim3(t, src[i]) - dst[i]).squaredNorm();
  }
  return sum;
}

void CameraIntrinsics::validate() const {
  if (!(fx > 0.0) || !(fy > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "focal lengths must be positive");
  }
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "image size must be positive");
  }
  if (cx < 0.0 || cx >= width || cy < 0.0 || cy >= height) {
    throw Error(ErrorCode::kInvalidArgument, "principal point outside the image");
  }
}

PixelPoint project(const CameraIntrinsics& intr, const Vec3& p_cam) {
  if (!(p_cam.z() > 0.0)) {
    throw Error(ErrorCode::kBehindCamera, "point has z <= 0");
  }
  const double x = p_cam.x() / p_cam.z();
  const double y = p_cam.y() / p_cam.z();
  const double r2 = x * x + y * y;
  const double radial = 1.0 + r2 * (intr.k1 + r2 * (intr.k2 + r2 * intr.k3));
  return {intr.fx * x * radial + intr.cx, intr.fy * y * radial + intr.cy};
}

Eigen::Vector2d pixel_to_normalized(const CameraIntrinsics& intr, const PixelPoint& px) {
  return {(px.u - intr.cx) / intr.fx, (px.v - intr.cy) / intr.fy};
}

DeviationReport intrinsics_deviation(const CameraIntrinsics& factory,
                                     const CameraIntrinsics& reference) {
  auto rel = [](double f, double r, const char* name) {
    if (r == 0.0) {
      throw Error(ErrorCode::kZeroReference, std::string("reference ") + name + " is zero");
    }
    return 100.0 * std::abs(f - r) / std::abs(r);
  };
  DeviationReport rep;
  rep.fx_pct = rel(factory.fx, reference.fx, "fx");
  rep.fy_pct = rel(factory.fy, reference.fy, "fy");
  rep.cx_pct = rel(factory.cx, reference.cx, "cx");
  rep.cy_pct = rel(factory.cy, reference.cy, "cy");
  rep.k1_abs = std::abs(factory.k1 - reference.k1);
  rep.k2_abs = std::abs(factory.k2 - reference.k2);
  rep.k3_abs = std::abs(factory.k3 - reference.k3);

  const double vals[] = {rep.fx_pct, rep.fy_pct, rep.cx_pct, rep.cy_pct};
  double sum = 0.0;
  for (double v : vals) sum += v;
  rep.mean_pct = sum / 4.0;
  double var = 0.0;
  for (double v : vals) var += (v - rep.mean_pct) * (v - rep.mean_pct);
  rep.std_pct = std::sqrt(var / 4.0);
  return rep;
}

}  // namespace egocollect::geometry
