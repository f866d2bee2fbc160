#include <doctest.h>

#include <Eigen/Geometry>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

#include "vice/delaunay.hpp"
#include "vice/depth.hpp"
#include "vice/depth_image.hpp"
#include "vice/ply.hpp"

using namespace vice;

namespace {

// Camera->Fixed pose for a camera pitched down by `pitch` radians, `altitude`
// meters above the floor (fixed z = 0), optionally offset horizontally.
Posed pitched_camera_pose(double pitch, double altitude, double x = 0.0, double y = 0.0) {
  const double c = std::cos(pitch), s = std::sin(pitch);
  Eigen::Matrix3d R;
  const Eigen::Vector3d cam_x(0, -1, 0);
  const Eigen::Vector3d cam_z(c, 0, -s);
  const Eigen::Vector3d cam_y = cam_z.cross(cam_x);
  R.col(0) = cam_x;
  R.col(1) = cam_y;
  R.col(2) = cam_z;
  return Posed(R, {x, y, altitude}, FrameId::camera(0), FrameId::fixed());
}

Posed straight_down_pose(double altitude) {
  Eigen::Matrix3d R = Eigen::Matrix3d::Identity();
  R(1, 1) = -1;
  R(2, 2) = -1;  // camera z maps to fixed -z
  return Posed(R, {0, 0, altitude}, FrameId::camera(0), FrameId::fixed());
}

CameraModeld plain_camera() { return CameraModeld(400, 400, 320, 240, 640, 480); }

// Independent oracle: march the viewing ray in fixed-frame until the floor
// is crossed, then bisect for the z = 0 crossing.
Eigen::Vector3d ray_march_floor_oracle(const Posed& camera_to_fixed, const CameraModeld& cam,
                                       const ImagePointd& pixel) {
  const Eigen::Vector3d ray = unproject(cam, pixel, 1.0);
  const auto altitude_at = [&](double s) {
    return camera_to_fixed.apply(Eigen::Vector3d(s * ray)).z();
  };
  double lo = 0.0, hi = 0.0;
  for (double s = 1e-3; s < 1e4; s *= 1.5) {
    if (altitude_at(s) < 0.0) {
      hi = s;
      break;
    }
    lo = s;
  }
  REQUIRE(hi > 0.0);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (altitude_at(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi) * ray;
}

}  // namespace

TEST_CASE("floor depth straight down hits the symmetric point") {
  const FloorPlaneConfig cfg = FloorPlaneConfig::from_pose(straight_down_pose(1.5));
  const CameraModeld cam = plain_camera();
  const ScenePointd p = floor_depth(cfg, cam, ImagePointd(320, 240));
  CHECK((p.xyz - Eigen::Vector3d(0, 0, 1.5)).norm() < 1e-12);
  CHECK(p.frame.kind() == FrameKind::Camera);
}

TEST_CASE("floor depth 45 degree pitch gives 2 sqrt 2 range") {
  const FloorPlaneConfig cfg = FloorPlaneConfig::from_pose(pitched_camera_pose(M_PI / 4, 2.0));
  const ScenePointd p = floor_depth(cfg, plain_camera(), ImagePointd(320, 240));
  CHECK(p.xyz.norm() == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("floor depth matches the ray-march bisection oracle off-axis") {
  const Posed pose = pitched_camera_pose(M_PI / 6, 1.0);
  const FloorPlaneConfig cfg = FloorPlaneConfig::from_pose(pose);
  const CameraModeld cam = plain_camera();
  const ImagePointd pixel(450.5, 310.25);
  const ScenePointd got = floor_depth(cfg, cam, pixel);
  const Eigen::Vector3d oracle = ray_march_floor_oracle(pose, cam, pixel);
  CHECK((got.xyz - oracle).norm() < 1e-6);
}

TEST_CASE("floor depth postconditions on random poses and pixels") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> pitch(0.15, 1.4);
  std::uniform_real_distribution<double> alt(0.3, 5.0);
  std::uniform_real_distribution<double> px(0.0, 640.0);
  std::uniform_real_distribution<double> py(0.0, 480.0);
  const CameraModeld cam = plain_camera();
  int hits = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const Posed pose = pitched_camera_pose(pitch(rng), alt(rng));
    const FloorPlaneConfig cfg = FloorPlaneConfig::from_pose(pose);
    const ImagePointd pixel(px(rng), py(rng));
    const Eigen::Vector3d ray = unproject(cam, pixel, 1.0);
    const double drop = -(pose.rotation() * ray).z();
    if (drop <= 1e-12) {
      CHECK_THROWS_AS(floor_depth(cfg, cam, pixel), NoIntersectionError);
      continue;
    }
    ++hits;
    const ScenePointd p = floor_depth(cfg, cam, pixel);
    // On the floor plane once expressed in the fixed frame.
    CHECK(std::abs(pose.apply(p.xyz).z()) < 1e-9);
    // And on the viewing ray.
    CHECK(p.xyz.cross(ray).norm() < 1e-9 * p.xyz.norm());
  }
  CHECK(hits > 100);
}

TEST_CASE("floor depth is invariant to in-plane fixed-frame translation") {
  const CameraModeld cam = plain_camera();
  const ImagePointd pixel(100.5, 400.0);
  const ScenePointd a =
      floor_depth(FloorPlaneConfig::from_pose(pitched_camera_pose(0.7, 1.8)), cam, pixel);
  const ScenePointd b = floor_depth(
      FloorPlaneConfig::from_pose(pitched_camera_pose(0.7, 1.8, 12.0, -7.5)), cam, pixel);
  CHECK((a.xyz - b.xyz).norm() < 1e-12);
}

TEST_CASE("floor depth error cases") {
  // Camera looking up: its principal ray ascends.
  const FloorPlaneConfig cfg = FloorPlaneConfig::from_pose(pitched_camera_pose(-0.5, 2.0));
  CHECK_THROWS_AS(floor_depth(cfg, plain_camera(), ImagePointd(320, 240)), NoIntersectionError);

  CHECK_THROWS_AS(FloorPlaneConfig(straight_down_pose(1.5), -1.0), InvalidConfigError);
  CHECK_THROWS_AS(FloorPlaneConfig(straight_down_pose(1.5), 0.7), InvalidConfigError);
}

TEST_CASE("point cloud depth: single point on the optical axis") {
  const CameraModeld cam = plain_camera();
  const Posed pose = straight_down_pose(4.0);  // camera->fixed
  const std::vector<Eigen::Vector3d> cloud = {{0.0, 0.0, 0.0}};
  const DepthImage img = depth_from_pointcloud(cloud, inverse(pose), cam);
  CHECK(img.sample_count() == 1);
  CHECK(img.at(320, 240).value() == doctest::Approx(4.0));
}

TEST_CASE("point cloud depth: pixel collisions keep the nearest point") {
  const CameraModeld cam = plain_camera();
  const Posed pose = straight_down_pose(10.0);
  // Both project to the principal point, depths 3 and 5.
  const std::vector<Eigen::Vector3d> cloud = {{0.0, 0.0, 7.0}, {0.0, 0.0, 5.0}};
  const DepthImage img = depth_from_pointcloud(cloud, inverse(pose), cam);
  CHECK(img.sample_count() == 1);
  CHECK(img.at(320, 240).value() == doctest::Approx(3.0));
}

TEST_CASE("point cloud depth: out-of-view cloud raises") {
  const CameraModeld cam = plain_camera();
  const Posed pose = straight_down_pose(2.0);
  const std::vector<Eigen::Vector3d> behind = {{0.0, 0.0, 5.0}};  // above the camera
  CHECK_THROWS_AS(depth_from_pointcloud(behind, inverse(pose), cam), EmptyDepthImageError);
}

TEST_CASE("point cloud depth grid matches the per-point projection oracle") {
  const CameraModeld cam = plain_camera();
  const Posed pose = pitched_camera_pose(0.9, 2.5);
  const Posed fixed_to_cam = inverse(pose);
  std::vector<Eigen::Vector3d> cloud;
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      cloud.emplace_back(0.5 + 0.1 * i, -0.45 + 0.1 * j, 0.0);
    }
  }
  const DepthImage img = depth_from_pointcloud(cloud, fixed_to_cam, cam);

  std::size_t expected_samples = 0;
  for (const auto& p : cloud) {
    const Eigen::Vector3d q = fixed_to_cam.apply(p);
    if (q.z() <= 0) continue;
    const ImagePointd px = project(cam, q);
    const int x = int(std::lround(px.u)), y = int(std::lround(px.v));
    if (x < 0 || x >= cam.width || y < 0 || y >= cam.height) continue;
    ++expected_samples;
    REQUIRE(img.has(x, y));
    CHECK(img.at(x, y).value() <= float(q.z()) + 1e-6f);
  }
  CHECK(expected_samples > 50);
  CHECK(img.sample_count() <= expected_samples);
}

TEST_CASE("densify constant field") {
  DepthImage sparse(32, 24);
  sparse.set(2, 2, 5.0f);
  sparse.set(29, 3, 5.0f);
  sparse.set(15, 21, 5.0f);
  sparse.set(8, 10, 5.0f);
  const DepthImage dense = densify(sparse);
  CHECK(dense.sample_count() > sparse.sample_count());
  for (int y = 0; y < 24; ++y) {
    for (int x = 0; x < 32; ++x) {
      if (const auto d = dense.at(x, y)) CHECK(*d == doctest::Approx(5.0));
    }
  }
}

TEST_CASE("densify reproduces linear fields exactly") {
  DepthImage sparse(64, 48);
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> dx(0, 63), dy(0, 47);
  const auto plane = [](int x, int y) { return 2.0f + 0.01f * x + 0.004f * y; };
  for (int i = 0; i < 40; ++i) {
    const int x = dx(rng), y = dy(rng);
    sparse.set(x, y, plane(x, y));
  }
  const DepthImage dense = densify(sparse);
  for (int y = 0; y < 48; ++y) {
    for (int x = 0; x < 64; ++x) {
      if (const auto d = dense.at(x, y)) {
        CHECK(*d == doctest::Approx(plane(x, y)).epsilon(1e-5));
      }
    }
  }
}

TEST_CASE("densify at sample pixels returns the sample exactly") {
  DepthImage sparse(40, 40);
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> dxy(0, 39);
  std::uniform_real_distribution<double> dd(0.5, 9.0);
  for (int i = 0; i < 25; ++i) {
    sparse.set(dxy(rng), dxy(rng), float(dd(rng)));
  }
  const DepthImage dense = densify(sparse);
  for (int y = 0; y < 40; ++y) {
    for (int x = 0; x < 40; ++x) {
      if (sparse.has(x, y)) {
        CHECK(dense.at(x, y).value() == sparse.at(x, y).value());
      }
    }
  }
}

TEST_CASE("densify matches a direct barycentric reference at held-out pixels") {
  DepthImage sparse(50, 50);
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> dxy(0, 49);
  std::uniform_real_distribution<double> dd(1.0, 4.0);
  std::vector<Eigen::Vector2d> positions;
  std::vector<double> values;
  for (int i = 0; i < 30; ++i) {
    const int x = dxy(rng), y = dxy(rng);
    if (sparse.has(x, y)) continue;
    const double d = dd(rng);
    sparse.set(x, y, float(d));
    positions.emplace_back(x, y);
    values.push_back(double(float(d)));
  }
  const DepthImage dense = densify(sparse);
  const Triangulation tri = delaunay_triangulate(positions);

  // Reference: scan every triangle for containment, evaluate barycentric
  // weights directly.
  int compared = 0;
  for (int y = 0; y < 50; ++y) {
    for (int x = 0; x < 50; ++x) {
      if (sparse.has(x, y)) continue;
      const Eigen::Vector2d q(x, y);
      for (std::size_t t = 0; t < tri.triangles().size(); ++t) {
        const Eigen::Vector3d w = tri.barycentric(int(t), q);
        if (w.minCoeff() < -1e-9) continue;
        const auto& tv = tri.triangles()[t].v;
        const double expected =
            w.x() * values[tv[0]] + w.y() * values[tv[1]] + w.z() * values[tv[2]];
        REQUIRE(dense.has(x, y));
        CHECK(dense.at(x, y).value() == doctest::Approx(expected).epsilon(1e-5));
        ++compared;
        break;
      }
    }
  }
  CHECK(compared > 200);
}

TEST_CASE("densify never extrapolates outside the hull") {
  DepthImage sparse(100, 100);
  // Samples confined to the lower-left quadrant.
  sparse.set(5, 5, 2.0f);
  sparse.set(40, 8, 2.5f);
  sparse.set(10, 45, 3.0f);
  sparse.set(30, 30, 2.2f);
  const DepthImage dense = densify(sparse);
  for (int y = 0; y < 100; ++y) {
    for (int x = 0; x < 100; ++x) {
      if (x > 50 || y > 50) CHECK(!dense.has(x, y));
    }
  }
}

TEST_CASE("densify rejects insufficient support") {
  DepthImage two(16, 16);
  two.set(1, 1, 1.0f);
  two.set(10, 10, 2.0f);
  CHECK_THROWS_AS(densify(two), InsufficientSupportError);

  DepthImage collinear(16, 16);
  collinear.set(1, 1, 1.0f);
  collinear.set(5, 5, 2.0f);
  collinear.set(9, 9, 3.0f);
  CHECK_THROWS_AS(densify(collinear), InsufficientSupportError);
}

TEST_CASE("delaunay triangulation properties on random point sets") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> coord(0.0, 100.0);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Eigen::Vector2d> pts;
    for (int i = 0; i < 60; ++i) pts.emplace_back(coord(rng), coord(rng));
    const Triangulation tri = delaunay_triangulate(pts);
    REQUIRE(!tri.triangles().empty());

    // Every triangle is ccw with positive area.
    for (const auto& t : tri.triangles()) {
      const Eigen::Vector2d &a = pts[t.v[0]], &b = pts[t.v[1]], &c = pts[t.v[2]];
      const double area = (b - a).x() * (c - a).y() - (b - a).y() * (c - a).x();
      CHECK(area > 0.0);
    }

    // Empty-circumcircle property, with a tolerance for cocircular sets.
    for (const auto& t : tri.triangles()) {
      const Eigen::Vector2d &a = pts[t.v[0]], &b = pts[t.v[1]], &c = pts[t.v[2]];
      const double d = 2.0 * ((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x());
      const double ux = ((b - a).squaredNorm() * (c - a).y() - (c - a).squaredNorm() * (b - a).y()) / d;
      const double uy = ((c - a).squaredNorm() * (b - a).x() - (b - a).squaredNorm() * (c - a).x()) / d;
      const Eigen::Vector2d center = a + Eigen::Vector2d(ux, uy);
      const double r = (a - center).norm();
      for (int i = 0; i < int(pts.size()); ++i) {
        if (i == t.v[0] || i == t.v[1] || i == t.v[2]) continue;
        CHECK((pts[i] - center).norm() >= r * (1.0 - 1e-7));
      }
    }

    // Interior queries land in containing triangles.
    for (int q = 0; q < 50; ++q) {
      const Eigen::Vector2d probe(coord(rng) * 0.6 + 20.0, coord(rng) * 0.6 + 20.0);
      const int found = tri.locate(probe);
      if (found >= 0) {
        CHECK(tri.barycentric(found, probe).minCoeff() >= -1e-9);
      }
    }
  }
}

TEST_CASE("delaunay handles exact pixel grids") {
  std::vector<Eigen::Vector2d> pts;
  for (int y = 0; y < 15; ++y) {
    for (int x = 0; x < 20; ++x) pts.emplace_back(x, y);
  }
  const Triangulation tri = delaunay_triangulate(pts);
  // A full grid triangulates into 2 triangles per cell.
  CHECK(int(tri.triangles().size()) == 2 * 19 * 14);
  for (const auto& t : tri.triangles()) {
    const Eigen::Vector2d &a = pts[t.v[0]], &b = pts[t.v[1]], &c = pts[t.v[2]];
    const double area = (b - a).x() * (c - a).y() - (b - a).y() * (c - a).x();
    CHECK(area > 0.0);
  }
}

TEST_CASE("floor and point-cloud providers agree on a flat-floor scene") {
  const CameraModeld cam = plain_camera();
  const Posed pose = pitched_camera_pose(1.0, 2.0);
  const FloorPlaneConfig cfg = FloorPlaneConfig::from_pose(pose);
  const FloorPlaneProvider floor(cfg);

  // z-cam style cloud: unproject every second pixel through the exact floor
  // intersection at the same pose.
  std::vector<Eigen::Vector3d> cloud;
  for (int y = 0; y < cam.height; y += 2) {
    for (int x = 0; x < cam.width; x += 2) {
      const ScenePointd p = floor_depth(cfg, cam, ImagePointd(double(x), double(y)));
      cloud.push_back(pose.apply(p.xyz));
    }
  }
  const PointCloudDepthProvider zmap(cloud);

  std::mt19937_64 rng(57);
  std::uniform_real_distribution<double> du(40.0, 600.0), dv(40.0, 440.0);
  for (int trial = 0; trial < 50; ++trial) {
    const ImagePointd px(du(rng), dv(rng));
    const Eigen::Vector3d a = floor.scene_point(cam, px, 0, pose);
    const Eigen::Vector3d b = zmap.scene_point(cam, px, 0, pose);
    CHECK((a - b).norm() < 1e-3);
  }
}

TEST_CASE("sensor provider reads per-frame depth images") {
  const CameraModeld cam = plain_camera();
  DepthImage d0(cam.width, cam.height);
  for (int y = 0; y < cam.height; ++y) {
    for (int x = 0; x < cam.width; ++x) d0.set(x, y, 3.0f);
  }
  std::map<int, DepthImage> by_frame;
  by_frame.emplace(0, std::move(d0));
  const SensorDepthProvider sensor(std::move(by_frame));
  const Posed pose = straight_down_pose(3.0);
  const Eigen::Vector3d p = sensor.scene_point(cam, ImagePointd(320, 240), 0, pose);
  CHECK((p - Eigen::Vector3d(0, 0, 3)).norm() < 1e-6);
  CHECK_THROWS_AS(sensor.scene_point(cam, ImagePointd(320, 240), 1, pose), NoDepthError);
}

TEST_CASE("depth image binary round-trip") {
  DepthImage img(17, 9);
  img.set(0, 0, 1.25f);
  img.set(16, 8, 7.5f);
  img.set(4, 3, 0.062f);
  const auto path = std::filesystem::temp_directory_path() / "vice_depth_io_test.bin";
  write_depth_image(img, path);
  const DepthImage back = read_depth_image(path);
  REQUIRE(back.width() == 17);
  REQUIRE(back.height() == 9);
  CHECK(back.sample_count() == 3);
  CHECK(back.at(0, 0).value() == 1.25f);
  CHECK(back.at(16, 8).value() == 7.5f);
  CHECK(back.at(4, 3).value() == 0.062f);
  std::filesystem::remove(path);
}

TEST_CASE("ply round-trip and malformed input") {
  const std::vector<Eigen::Vector3d> pts = {{0.5, -1.25, 3.0}, {1e-9, 2.5, -7.125}};
  const auto path = std::filesystem::temp_directory_path() / "vice_ply_test.ply";
  write_ply(pts, path);
  const auto back = read_ply(path);
  REQUIRE(back.size() == 2);
  CHECK((back[0] - pts[0]).norm() == 0.0);
  CHECK((back[1] - pts[1]).norm() == 0.0);
  std::filesystem::remove(path);

  const auto bad_path = std::filesystem::temp_directory_path() / "vice_ply_bad.ply";
  {
    std::FILE* f = std::fopen(bad_path.c_str(), "w");
    std::fputs("ply\nformat ascii 1.0\nelement vertex 2\nproperty float x\nproperty float y\n"
               "property float z\nend_header\n1 2 3\n", f);
    std::fclose(f);
  }
  CHECK_THROWS_AS(read_ply(bad_path), BadFormatError);
  std::filesystem::remove(bad_path);
}

TEST_CASE("bilinear depth sampling with absent neighbors") {
  DepthImage img(8, 8);
  img.set(2, 2, 2.0f);
  img.set(3, 2, 4.0f);
  img.set(2, 3, 6.0f);
  img.set(3, 3, 8.0f);
  CHECK(img.sample(2.5, 2.5).value() == doctest::Approx(5.0));
  CHECK(img.sample(2.0, 2.0).value() == doctest::Approx(2.0));
  // A partially covered neighborhood falls back to the nearest sample.
  CHECK(img.sample(3.9, 3.9).value() == doctest::Approx(8.0));
  CHECK(!img.sample(6.5, 6.5).has_value());
}
