#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <vector>

#include "vice/errors.hpp"

namespace vice {

/// Single-channel float32 depth raster. Absent samples are NaN. The same
/// container holds sparse images (scattered samples) and densified ones.
class DepthImage {
 public:
  DepthImage() = default;

  DepthImage(int width, int height)
      : width_(width), height_(height),
        data_(static_cast<std::size_t>(width) * height,
              std::numeric_limits<float>::quiet_NaN()) {
    if (width <= 0 || height <= 0) {
      throw InvalidConfigError("depth image dimensions must be positive");
    }
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }

  bool in_bounds(int x, int y) const noexcept {
    return x >= 0 && x < width_ && y >= 0 && y < height_;
  }

  bool has(int x, int y) const { return !std::isnan(raw(x, y)); }

  float raw(int x, int y) const { return data_[index(x, y)]; }

  std::optional<float> at(int x, int y) const {
    const float d = raw(x, y);
    if (std::isnan(d)) return std::nullopt;
    return d;
  }

  void set(int x, int y, float depth) {
    if (!(depth > 0.0f)) {
      throw InvalidConfigError("depth samples must be positive");
    }
    data_[index(x, y)] = depth;
  }

  void clear(int x, int y) { data_[index(x, y)] = std::numeric_limits<float>::quiet_NaN(); }

  std::size_t sample_count() const {
    std::size_t n = 0;
    for (const float d : data_) {
      if (!std::isnan(d)) ++n;
    }
    return n;
  }

  /// Bilinear depth lookup at a continuous pixel position. When some of the
  /// four surrounding samples are absent, falls back to the nearest present
  /// one; absent entirely, returns nullopt.
  std::optional<double> sample(double u, double v) const;

  const std::vector<float>& data() const noexcept { return data_; }
  std::vector<float>& data() noexcept { return data_; }

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * width_ + x;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<float> data_;
};

/// Binary layout: 8-byte header (width, height as 32-bit little-endian
/// unsigned) followed by row-major float32 samples. NaN marks absent.
void write_depth_image(const DepthImage& image, const std::filesystem::path& path);
DepthImage read_depth_image(const std::filesystem::path& path);

}  // namespace vice
