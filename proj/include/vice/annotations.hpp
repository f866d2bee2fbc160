#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vice/errors.hpp"

namespace vice {

/// One human-labeled ground-truth keypoint position. `respawn` marks the
/// first frame of a new track segment (the annotator re-anchored the
/// reference on a new scene point).
struct AnnotationPoint {
  int frame = 0;
  double u = 0.0;
  double v = 0.0;
  bool respawn = false;
};

struct AnnotationTrack {
  int id = 0;
  std::vector<AnnotationPoint> points;  // sorted by frame, unique frames
  nlohmann::json extra;                 // unknown fields, preserved on round-trip

  const AnnotationPoint* at_frame(int frame) const;
};

/// Human-labeled ground-truth 2D positions per track per frame.
struct AnnotationSet {
  std::string sequence;
  std::string annotator;
  std::vector<AnnotationTrack> tracks;  // sorted by id
  nlohmann::json extra;

  AnnotationTrack* find_track(int id);
  const AnnotationTrack* find_track(int id) const;

  /// Appends or replaces the annotation for (track, frame), creating the
  /// track on first use. Respawn flags are preserved as given.
  void upsert(int track_id, const AnnotationPoint& point);

  /// Every coordinate within [0, width) x [0, height); throws BoundsError
  /// naming the offending track/frame otherwise.
  void validate_bounds(int width, int height) const;
};

/// Parses the annotation JSON document. Unknown fields are kept on the
/// returned structures. When image bounds are given, coordinates are
/// validated against them. Schema violations carry a JSON-pointer-style
/// location.
AnnotationSet parse_annotations(const nlohmann::json& doc,
                                std::optional<std::pair<int, int>> bounds = std::nullopt);
AnnotationSet read_annotations(const std::filesystem::path& path,
                               std::optional<std::pair<int, int>> bounds = std::nullopt);

/// Canonical serialization: sorted keys, floats at 9 significant digits.
/// write -> read round-trips the value; re-serializing a canonical file is
/// byte-identical.
std::string annotations_to_json(const AnnotationSet& set);
void write_annotations(const AnnotationSet& set, const std::filesystem::path& path);

}  // namespace vice
