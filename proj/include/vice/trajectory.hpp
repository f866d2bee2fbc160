#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "vice/pose.hpp"

namespace vice {

/// Whether each entry locates the body in the fixed frame (Body(t) -> Fixed)
/// or describes the motion since the previous entry (Body(t_prev) ->
/// Body(t)). Relative streams carry an identity entry at their first
/// timestamp as the anchor.
enum class PoseConvention { AbsoluteInFixed, RelativeConsecutive };

struct StampedPose {
  std::int64_t t_ns = 0;
  Posed pose;
};

/// Timestamped pose stream from one source (on-board estimate, mocap,
/// synthetic truth). Timestamps are strictly increasing 64-bit nanoseconds.
class PoseTrajectory {
 public:
  PoseTrajectory() = default;
  PoseTrajectory(std::vector<StampedPose> entries, PoseConvention convention,
                 std::string source);

  const std::vector<StampedPose>& entries() const noexcept { return entries_; }
  PoseConvention convention() const noexcept { return convention_; }
  const std::string& source() const noexcept { return source_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  /// Conversion between conventions. Absolute anchors the fixed frame at the
  /// first entry's body frame when converting from relative.
  PoseTrajectory to_absolute() const;
  PoseTrajectory to_relative() const;

  /// Shifts every timestamp (models sensor-flow desynchronization).
  PoseTrajectory shifted(std::int64_t offset_ns) const;

 private:
  std::vector<StampedPose> entries_;
  PoseConvention convention_ = PoseConvention::AbsoluteInFixed;
  std::string source_;
};

/// Interpolates an absolute trajectory at an arbitrary time: linear in
/// translation, spherical-linear (shortest arc) in rotation between the
/// bracketing samples. Exact timestamp hits return that pose exactly.
/// Queries beyond the covered range by more than half the local sampling
/// interval raise ExtrapolationRefusedError; nearer ones clamp to the end.
Posed sample_pose(const PoseTrajectory& absolute, std::int64_t t_ns);

/// Per-frame image references at a nominal rate. Image decoding is deferred;
/// entries only carry paths (possibly empty for synthetic sequences).
struct FrameRef {
  std::int64_t t_ns = 0;
  std::string filename;
};

class FrameSequence {
 public:
  FrameSequence() = default;
  FrameSequence(std::vector<FrameRef> frames, double nominal_fps, int width, int height,
                std::filesystem::path image_dir = {});

  const std::vector<FrameRef>& frames() const noexcept { return frames_; }
  double nominal_fps() const noexcept { return nominal_fps_; }
  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  const std::filesystem::path& image_dir() const noexcept { return image_dir_; }
  std::size_t size() const noexcept { return frames_.size(); }

  std::filesystem::path image_path(std::size_t i) const {
    return image_dir_ / frames_[i].filename;
  }

 private:
  std::vector<FrameRef> frames_;
  double nominal_fps_ = 0.0;
  int width_ = 0;
  int height_ = 0;
  std::filesystem::path image_dir_;
};

/// One retained frame with its interpolated absolute body pose.
struct AlignedFrame {
  int source_index = 0;      // index into the original FrameSequence
  std::int64_t t_ns = 0;     // frame timestamp
  Posed body_to_fixed;       // Body(t) -> Fixed
};

/// Frames subsampled to a target rate with a pose attached to each. The
/// relative steps feeding the tracking chain are derived on demand.
class AlignedSequence {
 public:
  AlignedSequence() = default;
  explicit AlignedSequence(std::vector<AlignedFrame> frames) : frames_(std::move(frames)) {}

  const std::vector<AlignedFrame>& frames() const noexcept { return frames_; }
  int size() const noexcept { return int(frames_.size()); }
  std::int64_t stamp(int i) const { return frames_[std::size_t(i)].t_ns; }

  /// Body(t_i) -> Body(t_{i+1}).
  Posed relative_step(int i) const;

 private:
  std::vector<AlignedFrame> frames_;
};

/// Subsamples the frames to `target_fps`, clips to `clip_seconds` from the
/// first retained frame (0 disables), and attaches to each retained frame
/// the pose interpolated at the frame timestamp plus `time_offset_s`.
AlignedSequence align_and_resample(const FrameSequence& frames, const PoseTrajectory& poses,
                                   double target_fps, double clip_seconds = 0.0,
                                   double time_offset_s = 0.0);

/// Generic pose CSV: header line, then `timestamp_ns,px,py,pz,qw,qx,qy,qz`
/// per row (extra columns ignored). Lines starting with '#' are comments.
PoseTrajectory load_pose_csv(const std::filesystem::path& path, PoseConvention convention,
                             const std::string& source);
void write_pose_csv(const PoseTrajectory& trajectory, const std::filesystem::path& path);

/// Frame index CSV: header line, then `timestamp_ns,filename` per row.
FrameSequence load_frame_csv(const std::filesystem::path& path, double nominal_fps, int width,
                             int height, const std::filesystem::path& image_dir);
void write_frame_csv(const FrameSequence& frames, const std::filesystem::path& path);

}  // namespace vice
