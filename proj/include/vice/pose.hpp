#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <cmath>

#include "vice/frame.hpp"
#include "vice/so3.hpp"

namespace vice {

/// 2D image-plane position in pixels. Real-valued (sub-pixel) and allowed to
/// lie outside the image bounds: out-of-bounds is a meaningful state consumed
/// by the respawn rule.
template <typename Scalar>
struct ImagePoint {
  Scalar u = Scalar(0);
  Scalar v = Scalar(0);

  ImagePoint() = default;
  ImagePoint(Scalar u_, Scalar v_) : u(u_), v(v_) {}
  explicit ImagePoint(const Eigen::Matrix<Scalar, 2, 1>& uv) : u(uv.x()), v(uv.y()) {}

  Eigen::Matrix<Scalar, 2, 1> uv() const { return {u, v}; }

  bool finite() const { return std::isfinite(u) && std::isfinite(v); }
};

using ImagePointd = ImagePoint<double>;

/// A 3D point tagged with the frame its coordinates are expressed in.
template <typename Scalar>
struct ScenePoint {
  Eigen::Matrix<Scalar, 3, 1> xyz = Eigen::Matrix<Scalar, 3, 1>::Zero();
  FrameId frame = FrameId::fixed();

  ScenePoint() = default;
  ScenePoint(const Eigen::Matrix<Scalar, 3, 1>& p, FrameId f) : xyz(p), frame(f) {}
};

using ScenePointd = ScenePoint<double>;

/// Rigid transform between two named frames: x_to = R x_from + d.
template <typename Scalar>
class Pose {
 public:
  using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;
  using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
  using Quaternion = Eigen::Quaternion<Scalar>;

  Pose()
      : rotation_(Matrix3::Identity()),
        translation_(Vector3::Zero()),
        from_(FrameId::fixed()),
        to_(FrameId::fixed()) {}

  Pose(const Matrix3& rotation, const Vector3& translation, FrameId from, FrameId to)
      : rotation_(rotation), translation_(translation), from_(from), to_(to) {
    const Scalar defect = rotation_defect(rotation_);
    if (!(defect <= Scalar(1e-9))) {
      std::ostringstream oss;
      oss << "pose rotation is not orthonormal (defect " << defect << ")";
      throw InvalidRotationError(oss.str());
    }
  }

  static Pose identity(FrameId frame) {
    return Pose(Matrix3::Identity(), Vector3::Zero(), frame, frame);
  }

  static Pose identity(FrameId from, FrameId to) {
    return Pose(Matrix3::Identity(), Vector3::Zero(), from, to);
  }

  /// Quaternion is normalized before conversion; (w, x, y, z) ordering.
  static Pose from_quaternion(Scalar qw, Scalar qx, Scalar qy, Scalar qz,
                              const Vector3& translation, FrameId from, FrameId to) {
    Quaternion q(qw, qx, qy, qz);
    const Scalar n = q.norm();
    if (!(n > Scalar(0)) || !std::isfinite(n)) {
      throw InvalidRotationError("quaternion has zero or non-finite norm");
    }
    q.normalize();
    return Pose(q.toRotationMatrix(), translation, from, to);
  }

  const Matrix3& rotation() const noexcept { return rotation_; }
  const Vector3& translation() const noexcept { return translation_; }
  FrameId from_frame() const noexcept { return from_; }
  FrameId to_frame() const noexcept { return to_; }

  Quaternion quaternion() const { return Quaternion(rotation_); }

  /// Same transform relabelled onto different frames.
  Pose relabel(FrameId from, FrameId to) const {
    return Pose(rotation_, translation_, from, to);
  }

  Vector3 apply(const Vector3& p) const { return rotation_ * p + translation_; }

  ScenePoint<Scalar> apply(const ScenePoint<Scalar>& p) const {
    require_same_frame(from_, p.frame, "pose apply");
    return ScenePoint<Scalar>(apply(p.xyz), to_);
  }

 private:
  Matrix3 rotation_;
  Vector3 translation_;
  FrameId from_;
  FrameId to_;
};

using Posed = Pose<double>;

/// a then b applied in sequence: the result maps b.from directly to a.to.
/// Defined only when a.from == b.to.
template <typename Scalar>
Pose<Scalar> compose(const Pose<Scalar>& a, const Pose<Scalar>& b) {
  if (a.from_frame() != b.to_frame()) {
    throw FrameMismatchError("compose: left operand expects frame " + a.from_frame().str() +
                             " but right operand produces frame " + b.to_frame().str());
  }
  return Pose<Scalar>(a.rotation() * b.rotation(),
                      a.rotation() * b.translation() + a.translation(), b.from_frame(),
                      a.to_frame());
}

template <typename Scalar>
Pose<Scalar> inverse(const Pose<Scalar>& a) {
  const auto Rt = a.rotation().transpose();
  return Pose<Scalar>(Rt, -(Rt * a.translation()), a.to_frame(), a.from_frame());
}

/// Geodesic rotation distance plus translation distance, for tests and
/// near-equality checks.
template <typename Scalar>
Scalar pose_difference(const Pose<Scalar>& a, const Pose<Scalar>& b) {
  return (a.rotation() - b.rotation()).cwiseAbs().maxCoeff() +
         (a.translation() - b.translation()).cwiseAbs().maxCoeff();
}

}  // namespace vice
