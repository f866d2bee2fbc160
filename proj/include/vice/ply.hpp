#pragma once

#include <Eigen/Core>
#include <filesystem>
#include <vector>

namespace vice {

/// ASCII PLY 1.0 with one float/double x y z property triple per vertex.
/// Extra per-vertex properties are ignored on read.
std::vector<Eigen::Vector3d> read_ply(const std::filesystem::path& path);
void write_ply(const std::vector<Eigen::Vector3d>& points, const std::filesystem::path& path);

}  // namespace vice
