#pragma once

#include <Eigen/Core>
#include <array>
#include <cmath>
#include <sstream>

#include "vice/errors.hpp"
#include "vice/pose.hpp"

namespace vice {

/// Pinhole intrinsics with Brown-Conrady rational distortion. The radial
/// factor is (1 + k1 r^2 + k2 r^4 + k3 r^6) / (1 + k4 r^2 + k5 r^4 + k6 r^6)
/// and distortion acts on normalized (z = 1) coordinates, before K.
/// All-zero coefficients make the distortion an exact identity.
template <typename Scalar>
struct CameraModel {
  Scalar fx = Scalar(1), fy = Scalar(1);
  Scalar cx = Scalar(0), cy = Scalar(0);
  std::array<Scalar, 6> radial{};  // k1..k6
  Scalar p1 = Scalar(0), p2 = Scalar(0);
  int width = 0, height = 0;

  CameraModel() = default;

  CameraModel(Scalar fx_, Scalar fy_, Scalar cx_, Scalar cy_, int width_, int height_,
              std::array<Scalar, 6> radial_ = {}, Scalar p1_ = Scalar(0),
              Scalar p2_ = Scalar(0))
      : fx(fx_), fy(fy_), cx(cx_), cy(cy_), radial(radial_), p1(p1_), p2(p2_),
        width(width_), height(height_) {
    if (!(fx > Scalar(0)) || !(fy > Scalar(0))) {
      throw InvalidConfigError("camera focal lengths must be positive");
    }
    if (width <= 0 || height <= 0) {
      throw InvalidConfigError("camera image size must be positive");
    }
  }

  bool has_distortion() const {
    for (const Scalar k : radial) {
      if (k != Scalar(0)) return true;
    }
    return p1 != Scalar(0) || p2 != Scalar(0);
  }

  /// In-bounds test over [0, width) x [0, height).
  bool contains(const ImagePoint<Scalar>& p) const {
    return p.finite() && p.u >= Scalar(0) && p.u < Scalar(width) && p.v >= Scalar(0) &&
           p.v < Scalar(height);
  }
};

using CameraModeld = CameraModel<double>;

/// Distortion map on normalized image coordinates.
template <typename Scalar>
Eigen::Matrix<Scalar, 2, 1> distort(const CameraModel<Scalar>& cam,
                                    const Eigen::Matrix<Scalar, 2, 1>& n) {
  if (!cam.has_distortion()) return n;
  const Scalar x = n.x(), y = n.y();
  const Scalar r2 = x * x + y * y;
  const Scalar r4 = r2 * r2;
  const Scalar r6 = r4 * r2;
  const auto& k = cam.radial;
  const Scalar num = Scalar(1) + k[0] * r2 + k[1] * r4 + k[2] * r6;
  const Scalar den = Scalar(1) + k[3] * r2 + k[4] * r4 + k[5] * r6;
  const Scalar radial = num / den;
  const Scalar xy2 = Scalar(2) * x * y;
  return {x * radial + cam.p1 * xy2 + cam.p2 * (r2 + Scalar(2) * x * x),
          y * radial + cam.p1 * (r2 + Scalar(2) * y * y) + cam.p2 * xy2};
}

/// Inverts the distortion map with a damped fixed-point iteration. The step
/// is damped (halved) whenever the forward residual grows. Convergence is on
/// the forward residual in normalized units.
template <typename Scalar>
Eigen::Matrix<Scalar, 2, 1> undistort(const CameraModel<Scalar>& cam,
                                      const Eigen::Matrix<Scalar, 2, 1>& distorted,
                                      int max_iterations = 50,
                                      Scalar tolerance = Scalar(1e-12)) {
  using Vector2 = Eigen::Matrix<Scalar, 2, 1>;
  if (!cam.has_distortion()) return distorted;

  Vector2 x = distorted;
  Scalar damping = Scalar(1);
  Scalar residual = (distort(cam, x) - distorted).norm();
  for (int it = 0; it < max_iterations; ++it) {
    if (residual <= tolerance) return x;
    const Scalar r2 = x.squaredNorm();
    const Scalar r4 = r2 * r2;
    const Scalar r6 = r4 * r2;
    const auto& k = cam.radial;
    const Scalar radial = (Scalar(1) + k[0] * r2 + k[1] * r4 + k[2] * r6) /
                          (Scalar(1) + k[3] * r2 + k[4] * r4 + k[5] * r6);
    const Scalar xy2 = Scalar(2) * x.x() * x.y();
    const Vector2 tangential(cam.p1 * xy2 + cam.p2 * (r2 + Scalar(2) * x.x() * x.x()),
                             cam.p1 * (r2 + Scalar(2) * x.y() * x.y()) + cam.p2 * xy2);
    const Vector2 proposal = (distorted - tangential) / radial;
    const Vector2 candidate = x + damping * (proposal - x);
    const Scalar candidate_residual = (distort(cam, candidate) - distorted).norm();
    if (candidate_residual > residual) {
      damping /= Scalar(2);
      continue;
    }
    x = candidate;
    residual = candidate_residual;
  }
  if (residual <= tolerance) return x;
  throw NonConvergenceError("distortion inversion did not converge", double(residual));
}

/// Perspective projection of a camera-frame point to pixels: normalize,
/// distort, then apply K. The point must be in front of the camera.
template <typename Scalar>
ImagePoint<Scalar> project(const CameraModel<Scalar>& cam,
                           const Eigen::Matrix<Scalar, 3, 1>& p_camera) {
  if (!(p_camera.z() > Scalar(0))) {
    std::ostringstream oss;
    oss << "cannot project point behind the camera (z = " << p_camera.z() << ")";
    throw BehindCameraError(oss.str());
  }
  const Eigen::Matrix<Scalar, 2, 1> n(p_camera.x() / p_camera.z(),
                                      p_camera.y() / p_camera.z());
  const Eigen::Matrix<Scalar, 2, 1> d = distort(cam, n);
  return {cam.fx * d.x() + cam.cx, cam.fy * d.y() + cam.cy};
}

template <typename Scalar>
ImagePoint<Scalar> project(const CameraModel<Scalar>& cam, const ScenePoint<Scalar>& p) {
  if (p.frame.kind() != FrameKind::Camera) {
    throw FrameMismatchError("project expects a camera-frame point, got " + p.frame.str());
  }
  return project(cam, p.xyz);
}

/// Inverse projection: pixel plus depth to a camera-frame point whose z
/// coordinate equals the given depth.
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 1> unproject(const CameraModel<Scalar>& cam,
                                      const ImagePoint<Scalar>& pixel, Scalar depth) {
  if (!(depth > Scalar(0))) {
    throw BehindCameraError("unproject requires a positive depth");
  }
  const Eigen::Matrix<Scalar, 2, 1> d((pixel.u - cam.cx) / cam.fx,
                                      (pixel.v - cam.cy) / cam.fy);
  const Eigen::Matrix<Scalar, 2, 1> n = undistort(cam, d);
  return {depth * n.x(), depth * n.y(), depth};
}

}  // namespace vice
