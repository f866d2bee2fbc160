#include "vice/annotations.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "vice/json_canonical.hpp"

namespace vice {

namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& pointer, const std::string& what) {
  throw BadFormatError("annotation schema violation at " + pointer + ": " + what);
}

void format_number(std::string& out, const json& j, int float_digits) {
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (!std::isfinite(v)) {
      out += "null";
      return;
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", float_digits, v);
    out += buf;
  } else {
    out += j.dump();
  }
}

void dump_rec(std::string& out, const json& j, int float_digits) {
  switch (j.type()) {
    case json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += json(it.key()).dump();
        out += ':';
        dump_rec(out, it.value(), float_digits);
      }
      out += '}';
      break;
    }
    case json::value_t::array: {
      out += '[';
      bool first = true;
      for (const auto& item : j) {
        if (!first) out += ',';
        first = false;
        dump_rec(out, item, float_digits);
      }
      out += ']';
      break;
    }
    case json::value_t::number_float:
    case json::value_t::number_integer:
    case json::value_t::number_unsigned:
      format_number(out, j, float_digits);
      break;
    default:
      out += j.dump();
      break;
  }
}

}  // namespace

std::string canonical_dump(const json& value, int float_digits) {
  std::string out;
  dump_rec(out, value, float_digits);
  return out;
}

const AnnotationPoint* AnnotationTrack::at_frame(int frame) const {
  const auto it = std::lower_bound(points.begin(), points.end(), frame,
                                   [](const AnnotationPoint& p, int f) { return p.frame < f; });
  if (it == points.end() || it->frame != frame) return nullptr;
  return &*it;
}

AnnotationTrack* AnnotationSet::find_track(int id) {
  for (auto& t : tracks) {
    if (t.id == id) return &t;
  }
  return nullptr;
}

const AnnotationTrack* AnnotationSet::find_track(int id) const {
  for (const auto& t : tracks) {
    if (t.id == id) return &t;
  }
  return nullptr;
}

void AnnotationSet::upsert(int track_id, const AnnotationPoint& point) {
  AnnotationTrack* track = find_track(track_id);
  if (track == nullptr) {
    tracks.push_back(AnnotationTrack{track_id, {}, json::object()});
    std::sort(tracks.begin(), tracks.end(),
              [](const AnnotationTrack& a, const AnnotationTrack& b) { return a.id < b.id; });
    track = find_track(track_id);
  }
  auto it = std::lower_bound(track->points.begin(), track->points.end(), point.frame,
                             [](const AnnotationPoint& p, int f) { return p.frame < f; });
  if (it != track->points.end() && it->frame == point.frame) {
    *it = point;
  } else {
    track->points.insert(it, point);
  }
}

void AnnotationSet::validate_bounds(int width, int height) const {
  for (const auto& t : tracks) {
    for (const auto& p : t.points) {
      if (!(p.u >= 0.0 && p.u < double(width) && p.v >= 0.0 && p.v < double(height)) ||
          !std::isfinite(p.u) || !std::isfinite(p.v)) {
        throw BoundsError("annotation out of image bounds: track " + std::to_string(t.id) +
                          " frame " + std::to_string(p.frame) + " at (" + std::to_string(p.u) +
                          ", " + std::to_string(p.v) + ") for " + std::to_string(width) + "x" +
                          std::to_string(height));
      }
    }
  }
}

AnnotationSet parse_annotations(const json& doc, std::optional<std::pair<int, int>> bounds) {
  if (!doc.is_object()) schema_error("/", "document must be an object");
  AnnotationSet set;
  set.extra = json::object();
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const std::string& key = it.key();
    if (key == "sequence") {
      if (!it.value().is_string()) schema_error("/sequence", "must be a string");
      set.sequence = it.value().get<std::string>();
    } else if (key == "annotator") {
      if (!it.value().is_string()) schema_error("/annotator", "must be a string");
      set.annotator = it.value().get<std::string>();
    } else if (key == "tracks") {
      if (!it.value().is_array()) schema_error("/tracks", "must be an array");
    } else {
      set.extra[key] = it.value();
    }
  }
  if (!doc.contains("tracks")) schema_error("/tracks", "missing");

  std::set<int> seen_ids;
  int track_index = 0;
  for (const auto& jt : doc["tracks"]) {
    const std::string tp = "/tracks/" + std::to_string(track_index);
    if (!jt.is_object()) schema_error(tp, "must be an object");
    AnnotationTrack track;
    track.extra = json::object();
    if (!jt.contains("id") || !jt["id"].is_number_integer()) {
      schema_error(tp + "/id", "missing or not an integer");
    }
    track.id = jt["id"].get<int>();
    if (!seen_ids.insert(track.id).second) {
      schema_error(tp + "/id", "duplicate track id " + std::to_string(track.id));
    }
    if (!jt.contains("points") || !jt["points"].is_array()) {
      schema_error(tp + "/points", "missing or not an array");
    }
    for (auto it = jt.begin(); it != jt.end(); ++it) {
      if (it.key() != "id" && it.key() != "points") track.extra[it.key()] = it.value();
    }
    std::set<int> seen_frames;
    int point_index = 0;
    for (const auto& jp : jt["points"]) {
      const std::string pp = tp + "/points/" + std::to_string(point_index);
      if (!jp.is_object()) schema_error(pp, "must be an object");
      AnnotationPoint point;
      if (!jp.contains("frame") || !jp["frame"].is_number_integer()) {
        schema_error(pp + "/frame", "missing or not an integer");
      }
      point.frame = jp["frame"].get<int>();
      if (point.frame < 0) schema_error(pp + "/frame", "must be non-negative");
      if (!seen_frames.insert(point.frame).second) {
        schema_error(pp + "/frame",
                     "duplicate annotation for frame " + std::to_string(point.frame));
      }
      if (!jp.contains("u") || !jp["u"].is_number()) schema_error(pp + "/u", "missing or not a number");
      if (!jp.contains("v") || !jp["v"].is_number()) schema_error(pp + "/v", "missing or not a number");
      point.u = jp["u"].get<double>();
      point.v = jp["v"].get<double>();
      if (jp.contains("respawn")) {
        if (!jp["respawn"].is_boolean()) schema_error(pp + "/respawn", "must be a boolean");
        point.respawn = jp["respawn"].get<bool>();
      }
      track.points.push_back(point);
      ++point_index;
    }
    std::sort(track.points.begin(), track.points.end(),
              [](const AnnotationPoint& a, const AnnotationPoint& b) { return a.frame < b.frame; });
    set.tracks.push_back(std::move(track));
    ++track_index;
  }
  std::sort(set.tracks.begin(), set.tracks.end(),
            [](const AnnotationTrack& a, const AnnotationTrack& b) { return a.id < b.id; });
  if (bounds) set.validate_bounds(bounds->first, bounds->second);
  return set;
}

AnnotationSet read_annotations(const std::filesystem::path& path,
                               std::optional<std::pair<int, int>> bounds) {
  std::ifstream in(path);
  if (!in) throw MissingInputError("cannot open annotations: " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw BadFormatError(path.string() + ": " + e.what());
  }
  return parse_annotations(doc, bounds);
}

std::string annotations_to_json(const AnnotationSet& set) {
  json doc = set.extra.is_object() ? set.extra : json::object();
  doc["sequence"] = set.sequence;
  doc["annotator"] = set.annotator;
  json tracks = json::array();
  for (const auto& t : set.tracks) {
    json jt = t.extra.is_object() ? t.extra : json::object();
    jt["id"] = t.id;
    json points = json::array();
    for (const auto& p : t.points) {
      points.push_back(json{{"frame", p.frame}, {"respawn", p.respawn}, {"u", p.u}, {"v", p.v}});
    }
    jt["points"] = std::move(points);
    tracks.push_back(std::move(jt));
  }
  doc["tracks"] = std::move(tracks);
  return canonical_dump(doc, 9) + "\n";
}

void write_annotations(const AnnotationSet& set, const std::filesystem::path& path) {
  const std::string payload = annotations_to_json(set);
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + tmp.string());
    out << payload;
    if (!out) throw IoError("short write: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace vice
