#include "vice/depth_image.hpp"

#include <array>
#include <cstring>
#include <fstream>

namespace vice {

std::optional<double> DepthImage::sample(double u, double v) const {
  if (width_ == 0 || height_ == 0) return std::nullopt;
  const double cu = std::min(std::max(u, 0.0), double(width_ - 1));
  const double cv = std::min(std::max(v, 0.0), double(height_ - 1));
  const int x0 = static_cast<int>(std::floor(cu));
  const int y0 = static_cast<int>(std::floor(cv));
  const int x1 = std::min(x0 + 1, width_ - 1);
  const int y1 = std::min(y0 + 1, height_ - 1);
  const double fx = cu - x0;
  const double fy = cv - y0;

  const float d00 = raw(x0, y0), d10 = raw(x1, y0), d01 = raw(x0, y1), d11 = raw(x1, y1);
  if (!std::isnan(d00) && !std::isnan(d10) && !std::isnan(d01) && !std::isnan(d11)) {
    const double top = (1.0 - fx) * d00 + fx * d10;
    const double bottom = (1.0 - fx) * d01 + fx * d11;
    return (1.0 - fy) * top + fy * bottom;
  }

  // Nearest present fallback.
  struct Candidate { double dist; float depth; };
  std::optional<Candidate> best;
  const std::array<std::array<double, 3>, 4> corners = {{
      {double(x0), double(y0), d00},
      {double(x1), double(y0), d10},
      {double(x0), double(y1), d01},
      {double(x1), double(y1), d11},
  }};
  for (const auto& c : corners) {
    const float d = static_cast<float>(c[2]);
    if (std::isnan(d)) continue;
    const double dist = std::hypot(c[0] - cu, c[1] - cv);
    if (!best || dist < best->dist) best = Candidate{dist, d};
  }
  if (!best) return std::nullopt;
  return double(best->depth);
}

namespace {

void put_u32_le(std::ofstream& out, std::uint32_t value) {
  std::array<unsigned char, 4> b = {
      static_cast<unsigned char>(value & 0xff),
      static_cast<unsigned char>((value >> 8) & 0xff),
      static_cast<unsigned char>((value >> 16) & 0xff),
      static_cast<unsigned char>((value >> 24) & 0xff),
  };
  out.write(reinterpret_cast<const char*>(b.data()), 4);
}

std::uint32_t get_u32_le(std::ifstream& in, const std::filesystem::path& path) {
  std::array<unsigned char, 4> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), 4)) {
    throw BadFormatError("truncated depth image header: " + path.string());
  }
  return std::uint32_t(b[0]) | (std::uint32_t(b[1]) << 8) | (std::uint32_t(b[2]) << 16) |
         (std::uint32_t(b[3]) << 24);
}

}  // namespace

void write_depth_image(const DepthImage& image, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  put_u32_le(out, static_cast<std::uint32_t>(image.width()));
  put_u32_le(out, static_cast<std::uint32_t>(image.height()));
  static_assert(sizeof(float) == 4);
  out.write(reinterpret_cast<const char*>(image.data().data()),
            static_cast<std::streamsize>(image.data().size() * sizeof(float)));
  if (!out) throw IoError("short write: " + path.string());
}

DepthImage read_depth_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingInputError("cannot open depth image: " + path.string());
  const std::uint32_t w = get_u32_le(in, path);
  const std::uint32_t h = get_u32_le(in, path);
  if (w == 0 || h == 0 || w > (1u << 20) || h > (1u << 20)) {
    throw BadFormatError("implausible depth image size in " + path.string());
  }
  DepthImage image(static_cast<int>(w), static_cast<int>(h));
  in.read(reinterpret_cast<char*>(image.data().data()),
          static_cast<std::streamsize>(image.data().size() * sizeof(float)));
  if (!in || in.gcount() != std::streamsize(image.data().size() * sizeof(float))) {
    throw BadFormatError("truncated depth image payload: " + path.string());
  }
  return image;
}

}  // namespace vice
