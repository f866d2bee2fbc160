#pragma once

#include <Eigen/Core>
#include <cmath>
#include <sstream>

#include "vice/errors.hpp"

namespace vice {

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, 3, 3> skew(const Eigen::MatrixBase<Derived>& v) {
  EIGEN_STATIC_ASSERT_VECTOR_SPECIFIC_SIZE(Derived, 3);
  using Scalar = typename Derived::Scalar;
  Eigen::Matrix<Scalar, 3, 3> s;
  // clang-format off
  s << Scalar(0), -v.z(),     v.y(),
       v.z(),     Scalar(0), -v.x(),
      -v.y(),     v.x(),     Scalar(0);
  // clang-format on
  return s;
}

/// Max per-entry deviation of R'R from the identity plus the determinant
/// defect. Used for validating rotation inputs.
template <typename Derived>
typename Derived::Scalar rotation_defect(const Eigen::MatrixBase<Derived>& R) {
  EIGEN_STATIC_ASSERT_MATRIX_SPECIFIC_SIZE(Derived, 3, 3);
  using Scalar = typename Derived::Scalar;
  const Eigen::Matrix<Scalar, 3, 3> M = R;
  const Eigen::Matrix<Scalar, 3, 3> gram =
      M.transpose() * M - Eigen::Matrix<Scalar, 3, 3>::Identity();
  const Scalar ortho = gram.cwiseAbs().maxCoeff();
  const Scalar det = std::abs(M.determinant() - Scalar(1));
  return std::max(ortho, det);
}

template <typename Derived>
bool is_rotation(const Eigen::MatrixBase<Derived>& R, typename Derived::Scalar tol) {
  return rotation_defect(R) <= tol;
}

/// SO(3) exponential map: axis-angle vector to rotation matrix (Rodrigues).
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, 3, 3> so3_exp(const Eigen::MatrixBase<Derived>& omega) {
  EIGEN_STATIC_ASSERT_VECTOR_SPECIFIC_SIZE(Derived, 3);
  using Scalar = typename Derived::Scalar;
  using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;
  const Eigen::Matrix<Scalar, 3, 1> w = omega;
  const Scalar theta2 = w.squaredNorm();
  const Scalar theta = std::sqrt(theta2);
  const Matrix3 K = skew(w);
  Scalar a, b;  // R = I + a K + b K^2
  if (theta < Scalar(1e-8)) {
    a = Scalar(1) - theta2 / Scalar(6);
    b = Scalar(0.5) - theta2 / Scalar(24);
  } else {
    a = std::sin(theta) / theta;
    b = (Scalar(1) - std::cos(theta)) / theta2;
  }
  return Matrix3::Identity() + a * K + b * K * K;
}

/// SO(3) logarithmic map: rotation matrix to axis-angle vector with angle in
/// [0, pi]. Inputs more than `tol` away from orthonormality are rejected.
///
/// Three regimes: the first-order series near theta = 0, the generic
/// vee-based formula in the middle, and axis extraction from R + I (largest
/// diagonal element) near theta = pi where the vee part vanishes.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, 3, 1> so3_log(
    const Eigen::MatrixBase<Derived>& rotation,
    typename Derived::Scalar tol = typename Derived::Scalar(1e-6)) {
  EIGEN_STATIC_ASSERT_MATRIX_SPECIFIC_SIZE(Derived, 3, 3);
  using Scalar = typename Derived::Scalar;
  using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
  const Eigen::Matrix<Scalar, 3, 3> R = rotation;

  const Scalar defect = rotation_defect(R);
  if (defect > tol) {
    std::ostringstream oss;
    oss << "matrix is not a rotation (defect " << defect << " > " << tol << ")";
    throw InvalidRotationError(oss.str());
  }

  const Vector3 vee(R(2, 1) - R(1, 2), R(0, 2) - R(2, 0), R(1, 0) - R(0, 1));
  const Scalar trace = std::min(Scalar(3), std::max(Scalar(-1), R.trace()));
  const Scalar cos_theta = (trace - Scalar(1)) / Scalar(2);

  if (cos_theta > Scalar(1) - Scalar(1e-10)) {
    // theta ~ 0: omega = vee/2 to first order.
    return Scalar(0.5) * vee;
  }

  if (cos_theta < Scalar(-1) + Scalar(1e-6)) {
    // theta ~ pi: vee degenerates. Symmetrizing removes the sin(theta) K
    // term, leaving I + (1-cos) K^2, from which the axis outer product
    // a a' = I + (S - I)/(1 - cos) follows. The column through the largest
    // diagonal entry is the best conditioned.
    const Eigen::Matrix<Scalar, 3, 3> S =
        (R + R.transpose()) / Scalar(2) - Eigen::Matrix<Scalar, 3, 3>::Identity();
    const Eigen::Matrix<Scalar, 3, 3> outer =
        Eigen::Matrix<Scalar, 3, 3>::Identity() + S / (Scalar(1) - cos_theta);
    int col = 0;
    outer.diagonal().maxCoeff(&col);
    Vector3 axis = outer.col(col).normalized();
    // theta from sin(theta) = |vee|/2, far better conditioned than acos here.
    const Scalar sin_theta = std::min(Scalar(1), vee.norm() / Scalar(2));
    const Scalar theta = Scalar(EIGEN_PI) - std::asin(sin_theta);
    // Orient the axis with the (small but sign-carrying) vee part.
    if (axis.dot(vee) < Scalar(0)) axis = -axis;
    return theta * axis;
  }

  const Scalar theta = std::acos(cos_theta);
  return (theta / (Scalar(2) * std::sin(theta))) * vee;
}

/// Geodesic angle between two rotations, ||log(Ra' Rb)||.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar rotation_distance(const Eigen::MatrixBase<DerivedA>& a,
                                            const Eigen::MatrixBase<DerivedB>& b) {
  return so3_log((a.transpose() * b).eval()).norm();
}

}  // namespace vice
