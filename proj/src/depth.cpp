#include "vice/depth.hpp"

#include <cmath>
#include <sstream>

#include "vice/delaunay.hpp"

namespace vice {

FloorPlaneConfig::FloorPlaneConfig(const Posed& pose, double altitude_above_floor)
    : camera_to_fixed(pose), altitude(altitude_above_floor) {
  if (pose.from_frame().kind() != FrameKind::Camera ||
      pose.to_frame().kind() != FrameKind::Fixed) {
    throw InvalidConfigError("floor config pose must map Camera -> Fixed, got " +
                             pose.from_frame().str() + " -> " + pose.to_frame().str());
  }
  if (!(altitude > 0.0)) {
    throw InvalidConfigError("camera altitude above the floor must be positive");
  }
  // The floor is z = 0 of the fixed frame, so the pose translation's z is
  // the altitude; reject configs that disagree.
  if (std::abs(pose.translation().z() - altitude) > 1e-6 * std::max(1.0, altitude)) {
    std::ostringstream oss;
    oss << "camera altitude " << altitude << " contradicts pose translation z "
        << pose.translation().z();
    throw InvalidConfigError(oss.str());
  }
}

ScenePointd floor_depth(const FloorPlaneConfig& config, const CameraModeld& cam,
                        const ImagePointd& pixel) {
  const Eigen::Vector3d ray = unproject(cam, pixel, 1.0);
  const Eigen::Vector3d dir_fixed = config.camera_to_fixed.rotation() * ray;
  // Altitude drop from the optical center to the unit-depth ray point.
  const double drop = -dir_fixed.z();
  if (!(drop > 1e-12)) {
    std::ostringstream oss;
    oss << "viewing ray does not descend toward the floor plane (drop per unit depth "
        << drop << ")";
    throw NoIntersectionError(oss.str());
  }
  const double scale = config.altitude / drop;
  return ScenePointd(scale * ray, config.camera_to_fixed.from_frame());
}

DepthImage depth_from_pointcloud(const std::vector<Eigen::Vector3d>& cloud_fixed,
                                 const Posed& fixed_to_camera, const CameraModeld& cam) {
  if (fixed_to_camera.from_frame().kind() != FrameKind::Fixed ||
      fixed_to_camera.to_frame().kind() != FrameKind::Camera) {
    throw InvalidConfigError("point cloud projection pose must map Fixed -> Camera");
  }
  DepthImage image(cam.width, cam.height);
  std::size_t retained = 0;
  for (const auto& p : cloud_fixed) {
    const Eigen::Vector3d q = fixed_to_camera.apply(p);
    if (!(q.z() > 0.0)) continue;
    const ImagePointd px = project(cam, q);
    const int x = int(std::lround(px.u));
    const int y = int(std::lround(px.v));
    if (!image.in_bounds(x, y)) continue;
    const float depth = float(q.z());
    const auto existing = image.at(x, y);
    if (!existing || depth < *existing) image.set(x, y, depth);
    ++retained;
  }
  if (retained == 0) {
    throw EmptyDepthImageError("no cloud point projects into the field of view (cloud size " +
                               std::to_string(cloud_fixed.size()) + ")");
  }
  return image;
}

DepthImage densify(const DepthImage& sparse) {
  std::vector<Eigen::Vector2d> positions;
  std::vector<float> values;
  for (int y = 0; y < sparse.height(); ++y) {
    for (int x = 0; x < sparse.width(); ++x) {
      if (const auto d = sparse.at(x, y)) {
        positions.emplace_back(double(x), double(y));
        values.push_back(*d);
      }
    }
  }
  if (positions.size() < 3) {
    throw InsufficientSupportError("densify needs at least 3 samples, got " +
                                   std::to_string(positions.size()));
  }

  const Triangulation tri = delaunay_triangulate(positions);

  DepthImage dense(sparse.width(), sparse.height());
  for (std::size_t t = 0; t < tri.triangles().size(); ++t) {
    const auto& tv = tri.triangles()[t].v;
    const Eigen::Vector2d& a = tri.points()[tv[0]];
    const Eigen::Vector2d& b = tri.points()[tv[1]];
    const Eigen::Vector2d& c = tri.points()[tv[2]];
    const int x0 = std::max(0, int(std::ceil(std::min({a.x(), b.x(), c.x()}) - 1e-9)));
    const int x1 = std::min(sparse.width() - 1, int(std::floor(std::max({a.x(), b.x(), c.x()}) + 1e-9)));
    const int y0 = std::max(0, int(std::ceil(std::min({a.y(), b.y(), c.y()}) - 1e-9)));
    const int y1 = std::min(sparse.height() - 1, int(std::floor(std::max({a.y(), b.y(), c.y()}) + 1e-9)));
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        const Eigen::Vector3d w = tri.barycentric(int(t), Eigen::Vector2d(x, y));
        if (w.minCoeff() < -1e-9) continue;
        const double depth = w.x() * values[tv[0]] + w.y() * values[tv[1]] + w.z() * values[tv[2]];
        dense.set(x, y, float(depth));
      }
    }
  }

  // Samples are reproduced exactly, immune to interpolation round-off.
  for (std::size_t i = 0; i < positions.size(); ++i) {
    dense.set(int(positions[i].x()), int(positions[i].y()), values[i]);
  }
  return dense;
}

Eigen::Vector3d FloorPlaneProvider::scene_point(const CameraModeld& cam,
                                                const ImagePointd& pixel, int frame_index,
                                                const Posed& camera_to_fixed) const {
  (void)frame_index;
  if (!(camera_to_fixed.translation().z() > 0.0)) {
    throw NoIntersectionError("camera is at or below the floor plane");
  }
  const FloorPlaneConfig at_frame(camera_to_fixed, camera_to_fixed.translation().z());
  return floor_depth(at_frame, cam, pixel).xyz;
}

PointCloudDepthProvider::PointCloudDepthProvider(std::vector<Eigen::Vector3d> cloud_fixed)
    : cloud_(std::move(cloud_fixed)) {
  if (cloud_.empty()) {
    throw EmptyDepthImageError("point cloud depth provider needs a nonempty cloud");
  }
}

Eigen::Vector3d PointCloudDepthProvider::scene_point(const CameraModeld& cam,
                                                     const ImagePointd& pixel, int frame_index,
                                                     const Posed& camera_to_fixed) const {
  const DepthImage* dense = nullptr;
  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto it = cache_.find(frame_index);
    if (it == cache_.end()) {
      DepthImage built = densify(depth_from_pointcloud(cloud_, inverse(camera_to_fixed), cam));
      it = cache_.emplace(frame_index, std::move(built)).first;
    }
    dense = &it->second;
  }
  const auto depth = dense->sample(pixel.u, pixel.v);
  if (!depth) {
    std::ostringstream oss;
    oss << "no depth coverage at pixel (" << pixel.u << ", " << pixel.v << ") of frame "
        << frame_index;
    throw NoDepthError(oss.str());
  }
  return unproject(cam, pixel, *depth);
}

Eigen::Vector3d SensorDepthProvider::scene_point(const CameraModeld& cam,
                                                 const ImagePointd& pixel, int frame_index,
                                                 const Posed& camera_to_fixed) const {
  (void)camera_to_fixed;
  const auto it = depth_by_frame_.find(frame_index);
  if (it == depth_by_frame_.end()) {
    throw NoDepthError("no sensor depth image for frame " + std::to_string(frame_index));
  }
  const auto depth = it->second.sample(pixel.u, pixel.v);
  if (!depth) {
    std::ostringstream oss;
    oss << "sensor depth absent at pixel (" << pixel.u << ", " << pixel.v << ") of frame "
        << frame_index;
    throw NoDepthError(oss.str());
  }
  return unproject(cam, pixel, *depth);
}

}  // namespace vice
