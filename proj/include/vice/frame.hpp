#pragma once

#include <cstdint>
#include <string>

#include "vice/errors.hpp"

namespace vice {

enum class FrameKind : std::uint8_t { Body, Fixed, Camera, Image };

/// Symbolic coordinate-frame label. Body and Camera frames move with the
/// agent and therefore carry a timestamp; Fixed and Image do not.
class FrameId {
 public:
  static FrameId body(std::int64_t stamp_ns) { return FrameId(FrameKind::Body, stamp_ns); }
  static FrameId fixed() { return FrameId(FrameKind::Fixed, 0); }
  static FrameId camera(std::int64_t stamp_ns) { return FrameId(FrameKind::Camera, stamp_ns); }
  static FrameId image() { return FrameId(FrameKind::Image, 0); }

  FrameKind kind() const noexcept { return kind_; }

  bool time_indexed() const noexcept {
    return kind_ == FrameKind::Body || kind_ == FrameKind::Camera;
  }

  std::int64_t stamp_ns() const noexcept { return stamp_ns_; }

  /// Same kind with a different timestamp (identity for Fixed/Image).
  FrameId at(std::int64_t stamp_ns) const {
    return time_indexed() ? FrameId(kind_, stamp_ns) : *this;
  }

  bool operator==(const FrameId& other) const noexcept {
    return kind_ == other.kind_ && (!time_indexed() || stamp_ns_ == other.stamp_ns_);
  }
  bool operator!=(const FrameId& other) const noexcept { return !(*this == other); }

  std::string str() const {
    switch (kind_) {
      case FrameKind::Body:
        return "body@" + std::to_string(stamp_ns_);
      case FrameKind::Fixed:
        return "fixed";
      case FrameKind::Camera:
        return "camera@" + std::to_string(stamp_ns_);
      case FrameKind::Image:
        return "image";
    }
    return "?";
  }

 private:
  FrameId(FrameKind kind, std::int64_t stamp_ns) : kind_(kind), stamp_ns_(stamp_ns) {}

  FrameKind kind_;
  std::int64_t stamp_ns_;
};

inline void require_same_frame(const FrameId& a, const FrameId& b, const char* context) {
  if (a != b) {
    throw FrameMismatchError(std::string(context) + ": frame " + a.str() +
                             " does not match frame " + b.str());
  }
}

}  // namespace vice
