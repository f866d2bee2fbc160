#pragma once

#include <Eigen/Core>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "vice/camera.hpp"
#include "vice/depth_image.hpp"
#include "vice/pose.hpp"

namespace vice {

/// Knowledge of the camera's placement relative to the floor at the start of
/// a trajectory: the Camera->Fixed pose and the camera altitude above the
/// fixed frame's z = 0 plane. The altitude must agree with the pose
/// translation since the floor is z = 0 of the fixed frame.
struct FloorPlaneConfig {
  Posed camera_to_fixed;
  double altitude = 0.0;

  FloorPlaneConfig(const Posed& pose, double altitude_above_floor);

  static FloorPlaneConfig from_pose(const Posed& pose) {
    return FloorPlaneConfig(pose, pose.translation().z());
  }
};

/// Recovers the camera-frame 3D point for a pixel by intersecting its
/// viewing ray with the floor plane (z = 0 in the fixed frame): the
/// unit-depth ray is scaled so the fixed-frame z of the result vanishes.
/// Throws NoIntersectionError when the ray does not descend to the plane.
ScenePointd floor_depth(const FloorPlaneConfig& config, const CameraModeld& cam,
                        const ImagePointd& pixel);

/// Projects a fixed-frame point cloud into the camera and keeps, per rounded
/// pixel, the smallest camera-frame z among the points that land on it.
/// Points behind the camera or out of the image bounds are dropped. Throws
/// EmptyDepthImageError when nothing lands in the field of view.
DepthImage depth_from_pointcloud(const std::vector<Eigen::Vector3d>& cloud_fixed,
                                 const Posed& fixed_to_camera, const CameraModeld& cam);

/// Piecewise-linear completion of a sparse depth image: Delaunay-triangulate
/// the samples and evaluate the barycentric interpolant at every pixel
/// inside the hull. Sample pixels keep their value exactly; pixels outside
/// the hull stay absent (no extrapolation).
DepthImage densify(const DepthImage& sparse);

/// Answers "what 3D point does this pixel of a segment's first frame see".
/// The query carries the frame index and the (estimated) Camera->Fixed pose
/// at that frame. Implementations are immutable after construction and safe
/// to query concurrently.
class DepthProvider {
 public:
  enum class Kind { FloorPlane, DepthMap, Sensor };

  virtual ~DepthProvider() = default;
  virtual Kind kind() const = 0;
  virtual Eigen::Vector3d scene_point(const CameraModeld& cam, const ImagePointd& pixel,
                                      int frame_index, const Posed& camera_to_fixed) const = 0;
};

/// Floor-plane constraint. Holds the measured initial configuration; later
/// segment-start queries use the estimated pose handed in, whose translation
/// z is the camera altitude at that frame.
class FloorPlaneProvider final : public DepthProvider {
 public:
  explicit FloorPlaneProvider(const FloorPlaneConfig& initial) : initial_(initial) {}

  Kind kind() const override { return Kind::FloorPlane; }

  const FloorPlaneConfig& initial_config() const { return initial_; }

  Eigen::Vector3d scene_point(const CameraModeld& cam, const ImagePointd& pixel,
                              int frame_index, const Posed& camera_to_fixed) const override;

 private:
  FloorPlaneConfig initial_;
};

/// Depth from a prior scene scan: the cloud is projected at the segment
/// start camera pose, densified, and sampled bilinearly at the query pixel.
/// Densified maps are cached per frame index.
class PointCloudDepthProvider final : public DepthProvider {
 public:
  PointCloudDepthProvider(std::vector<Eigen::Vector3d> cloud_fixed);

  Kind kind() const override { return Kind::DepthMap; }

  Eigen::Vector3d scene_point(const CameraModeld& cam, const ImagePointd& pixel,
                              int frame_index, const Posed& camera_to_fixed) const override;

 private:
  std::vector<Eigen::Vector3d> cloud_;
  mutable std::mutex cache_mutex_;
  mutable std::map<int, DepthImage> cache_;
};

/// Direct per-frame depth images from an on-board sensor (z-cam, stereo).
class SensorDepthProvider final : public DepthProvider {
 public:
  explicit SensorDepthProvider(std::map<int, DepthImage> depth_by_frame)
      : depth_by_frame_(std::move(depth_by_frame)) {}

  Kind kind() const override { return Kind::Sensor; }

  Eigen::Vector3d scene_point(const CameraModeld& cam, const ImagePointd& pixel,
                              int frame_index, const Posed& camera_to_fixed) const override;

 private:
  std::map<int, DepthImage> depth_by_frame_;
};

}  // namespace vice
