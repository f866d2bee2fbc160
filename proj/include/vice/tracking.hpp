#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "vice/camera.hpp"
#include "vice/depth.hpp"
#include "vice/pose.hpp"
#include "vice/trajectory.hpp"

namespace vice {

/// Camera-to-body extrinsics, constant or per-timestamp. When a table is
/// given it must cover every queried frame timestamp.
class RigConfig {
 public:
  explicit RigConfig(const Posed& body_from_camera);
  RigConfig(const Posed& body_from_camera, std::map<std::int64_t, Posed> per_timestamp);

  /// Camera(t) -> Body(t).
  Posed camera_to_body(std::int64_t t_ns) const;

  bool time_varying() const noexcept { return !per_timestamp_.empty(); }

 private:
  Posed constant_;
  std::map<std::int64_t, Posed> per_timestamp_;
};

struct TrackedPoint {
  int frame = 0;
  std::optional<ImagePointd> uv;  // absent while the point is out of view
};

/// One respawn-delimited span of a track: the reference pixel, its lifted
/// body-frame scene point at the segment start, and the per-frame
/// predictions over [start_frame, start_frame + points.size()).
struct TrackSegment {
  int start_frame = 0;
  ImagePointd ref_uv;
  ScenePointd ref_body_point;
  std::vector<TrackedPoint> points;
};

/// Per-frame 2D positions of one tracked reference point. Segments
/// partition the frame range; each begins where the previous ended.
struct KeypointTrack {
  int track_id = 0;
  std::vector<TrackSegment> segments;

  int frame_count() const;

  /// Per-frame series over [0, frame_count); absent where out of view.
  std::vector<std::optional<ImagePointd>> flatten() const;

  /// Start frames of all segments after the first (the respawn marks).
  std::vector<int> respawn_frames() const;
};

/// Annotated position for one frame, as consumed by the respawn logic.
struct AnnotatedPoint {
  ImagePointd uv;
  bool respawn = false;
};
using AnnotationSeries = std::vector<std::optional<AnnotatedPoint>>;

/// Lifts `ref` into 3D at `start_index` via the depth provider, pushes it
/// through the chain of relative body motions, and re-projects into each
/// subsequent frame. `camera_to_fixed_at_start` is the (estimated) camera
/// pose at the segment start, used only by the depth query. Returns one
/// entry per frame of [start_index, seq.size()); frames where the point
/// falls behind the camera are absent.
std::vector<std::optional<ImagePointd>> track_point(const ImagePointd& ref, int start_index,
                                                    const AlignedSequence& seq,
                                                    const RigConfig& rig,
                                                    const CameraModeld& cam,
                                                    const DepthProvider& depth,
                                                    const Posed& camera_to_fixed_at_start);

/// Runs a full track with respawn handling: a segment closes at the first
/// frame whose predicted pixel leaves the image bounds (or that the
/// annotation stream flags as a respawn), and a new segment re-anchors there
/// with a reference from the initializer. `initial_camera_to_fixed` anchors
/// the fixed frame at frame 0 of the sequence.
KeypointTrack run_track_with_respawn(int track_id,
                                     const std::function<ImagePointd(int)>& initializer,
                                     const AlignedSequence& seq, const RigConfig& rig,
                                     const CameraModeld& cam, const DepthProvider& depth,
                                     const Posed& initial_camera_to_fixed,
                                     const AnnotationSeries* annotations = nullptr);

/// Reference-point policies. The fixed list is consumed in order across
/// respawns; the seeded policy draws uniformly from the central 60% of the
/// image; the annotation policy re-anchors at the annotated position.
std::function<ImagePointd(int)> fixed_list_initializer(std::vector<ImagePointd> points);
std::function<ImagePointd(int)> seeded_random_initializer(std::uint64_t seed,
                                                          const CameraModeld& cam);
std::function<ImagePointd(int)> annotation_initializer(AnnotationSeries series);

/// Track JSON: {"track_id": .., "segments": [{"start_frame": .., "ref_uv":
/// [u,v], "points": [{"frame": .., "uv": [u,v] | null}, ..]}, ..]}.
std::string track_to_json(const KeypointTrack& track);
void write_track_json(const KeypointTrack& track, const std::filesystem::path& path);
KeypointTrack read_track_json(const std::filesystem::path& path);

}  // namespace vice
