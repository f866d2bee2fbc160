#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace vice {

// All failures carry a stable machine-readable code so the CLI can emit
// single-line "CODE: message" diagnostics.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

  std::string formatted() const { return code_ + ": " + what(); }

 private:
  std::string code_;
};

struct FrameMismatchError : Error {
  explicit FrameMismatchError(const std::string& msg) : Error("E_FRAME_MISMATCH", msg) {}
};

struct InvalidRotationError : Error {
  explicit InvalidRotationError(const std::string& msg) : Error("E_INVALID_ROTATION", msg) {}
};

struct BehindCameraError : Error {
  explicit BehindCameraError(const std::string& msg) : Error("E_BEHIND_CAMERA", msg) {}
};

struct NonConvergenceError : Error {
  NonConvergenceError(const std::string& msg, double residual)
      : Error("E_NON_CONVERGENCE", msg + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

struct NoIntersectionError : Error {
  explicit NoIntersectionError(const std::string& msg) : Error("E_NO_INTERSECTION", msg) {}
};

struct InsufficientSupportError : Error {
  explicit InsufficientSupportError(const std::string& msg) : Error("E_INSUFFICIENT_SUPPORT", msg) {}
};

struct EmptyDepthImageError : Error {
  explicit EmptyDepthImageError(const std::string& msg) : Error("E_EMPTY_DEPTH_IMAGE", msg) {}
};

struct NoDepthError : Error {
  explicit NoDepthError(const std::string& msg) : Error("E_NO_DEPTH", msg) {}
};

struct AlignmentError : Error {
  explicit AlignmentError(const std::string& msg) : Error("E_ALIGNMENT", msg) {}
};

struct ExtrapolationRefusedError : Error {
  explicit ExtrapolationRefusedError(const std::string& msg) : Error("E_EXTRAPOLATION", msg) {}
};

struct MissingInputError : Error {
  explicit MissingInputError(const std::string& msg) : Error("E_MISSING_INPUT", msg) {}
};

struct BadFormatError : Error {
  explicit BadFormatError(const std::string& msg) : Error("E_BAD_FORMAT", msg) {}
};

struct NonMonotonicError : Error {
  explicit NonMonotonicError(const std::string& msg) : Error("E_NON_MONOTONIC", msg) {}
};

struct BoundsError : Error {
  explicit BoundsError(const std::string& msg) : Error("E_BOUNDS", msg) {}
};

struct NoOverlapError : Error {
  explicit NoOverlapError(const std::string& msg) : Error("E_NO_OVERLAP", msg) {}
};

struct InvalidSubsetError : Error {
  explicit InvalidSubsetError(const std::string& msg) : Error("E_INVALID_SUBSET", msg) {}
};

struct DegenerateSamplingError : Error {
  explicit DegenerateSamplingError(const std::string& msg) : Error("E_DEGENERATE_SAMPLING", msg) {}
};

struct RespawnError : Error {
  explicit RespawnError(const std::string& msg) : Error("E_RESPAWN", msg) {}
};

struct InvalidConfigError : Error {
  explicit InvalidConfigError(const std::string& msg) : Error("E_INVALID_CONFIG", msg) {}
};

struct SceneSpecError : Error {
  explicit SceneSpecError(const std::string& msg) : Error("E_SCENE_SPEC", msg) {}
};

struct IoError : Error {
  explicit IoError(const std::string& msg) : Error("E_IO", msg) {}
};

}  // namespace vice
