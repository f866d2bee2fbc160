#pragma once

#include <Eigen/Core>
#include <array>
#include <vector>

#include "vice/errors.hpp"

namespace vice {

/// 2D triangulation with neighbor links and point location, produced by
/// delaunay_triangulate. Triangle vertices are counter-clockwise.
class Triangulation {
 public:
  struct Triangle {
    std::array<int, 3> v;  // vertex indices into points()
    std::array<int, 3> n;  // neighbor across the edge opposite v[i]; -1 on the hull
  };

  const std::vector<Eigen::Vector2d>& points() const noexcept { return points_; }
  const std::vector<Triangle>& triangles() const noexcept { return triangles_; }

  /// Index of a triangle containing p (boundary counts), or -1 when p lies
  /// outside the triangulated hull. `hint` seeds the walk.
  int locate(const Eigen::Vector2d& p, int hint = 0) const;

  /// Barycentric coordinates of p in the given triangle.
  Eigen::Vector3d barycentric(int triangle, const Eigen::Vector2d& p) const;

 private:
  friend Triangulation delaunay_triangulate(const std::vector<Eigen::Vector2d>&);

  std::vector<Eigen::Vector2d> points_;
  std::vector<Triangle> triangles_;
};

/// Incremental Bowyer-Watson Delaunay triangulation with a walking point
/// locator. Requires at least 3 non-collinear points; exact duplicates are
/// skipped. Throws InsufficientSupportError otherwise.
Triangulation delaunay_triangulate(const std::vector<Eigen::Vector2d>& input);

}  // namespace vice
