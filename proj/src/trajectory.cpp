#include "vice/trajectory.hpp"

#include <Eigen/Geometry>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace vice {

namespace {

[[noreturn]] void bad_row(const std::filesystem::path& path, int line, const std::string& what) {
  throw BadFormatError(path.string() + ":" + std::to_string(line) + ": " + what);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

double parse_double(const std::string& s, const std::filesystem::path& path, int line) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos != s.size()) bad_row(path, line, "trailing characters in numeric field '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    bad_row(path, line, "non-numeric field '" + s + "'");
  }
}

std::int64_t parse_timestamp(const std::string& s, const std::filesystem::path& path, int line) {
  std::int64_t value = 0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  while (begin != end && std::isspace(static_cast<unsigned char>(*begin))) ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    bad_row(path, line, "invalid timestamp '" + s + "'");
  }
  return value;
}

}  // namespace

PoseTrajectory::PoseTrajectory(std::vector<StampedPose> entries, PoseConvention convention,
                               std::string source)
    : entries_(std::move(entries)), convention_(convention), source_(std::move(source)) {
  for (std::size_t i = 1; i < entries_.size(); ++i) {
    if (entries_[i].t_ns <= entries_[i - 1].t_ns) {
      throw NonMonotonicError("trajectory '" + source_ + "' timestamps not strictly increasing at entry " +
                              std::to_string(i) + " (" + std::to_string(entries_[i].t_ns) +
                              " after " + std::to_string(entries_[i - 1].t_ns) + ")");
    }
  }
}

PoseTrajectory PoseTrajectory::to_absolute() const {
  if (convention_ == PoseConvention::AbsoluteInFixed) return *this;
  std::vector<StampedPose> abs;
  abs.reserve(entries_.size());
  if (entries_.empty()) return PoseTrajectory({}, PoseConvention::AbsoluteInFixed, source_);
  // Fixed frame anchored at the first body frame.
  Posed current = Posed::identity(FrameId::body(entries_.front().t_ns), FrameId::fixed());
  abs.push_back({entries_.front().t_ns, current});
  for (std::size_t i = 1; i < entries_.size(); ++i) {
    const Posed& step = entries_[i].pose;  // Body(t_{i-1}) -> Body(t_i)
    current = compose(current, inverse(step));
    abs.push_back({entries_[i].t_ns, current});
  }
  return PoseTrajectory(std::move(abs), PoseConvention::AbsoluteInFixed, source_);
}

PoseTrajectory PoseTrajectory::to_relative() const {
  if (convention_ == PoseConvention::RelativeConsecutive) return *this;
  std::vector<StampedPose> rel;
  rel.reserve(entries_.size());
  if (entries_.empty()) return PoseTrajectory({}, PoseConvention::RelativeConsecutive, source_);
  const auto body = [](const StampedPose& e) { return FrameId::body(e.t_ns); };
  rel.push_back({entries_.front().t_ns, Posed::identity(body(entries_.front()))});
  for (std::size_t i = 1; i < entries_.size(); ++i) {
    rel.push_back({entries_[i].t_ns, compose(inverse(entries_[i].pose), entries_[i - 1].pose)});
  }
  return PoseTrajectory(std::move(rel), PoseConvention::RelativeConsecutive, source_);
}

PoseTrajectory PoseTrajectory::shifted(std::int64_t offset_ns) const {
  std::vector<StampedPose> shifted_entries = entries_;
  for (auto& e : shifted_entries) {
    const std::int64_t t = e.t_ns + offset_ns;
    // Re-stamp the body frames to the shifted time so frame bookkeeping
    // stays coherent.
    FrameId from = e.pose.from_frame();
    FrameId to = e.pose.to_frame();
    if (from.time_indexed() && from.stamp_ns() == e.t_ns) from = from.at(t);
    if (to.time_indexed() && to.stamp_ns() == e.t_ns) to = to.at(t);
    e.pose = e.pose.relabel(from, to);
    e.t_ns = t;
  }
  return PoseTrajectory(std::move(shifted_entries), convention_, source_);
}

Posed sample_pose(const PoseTrajectory& absolute, std::int64_t t_ns) {
  if (absolute.convention() != PoseConvention::AbsoluteInFixed) {
    throw AlignmentError("sample_pose requires an absolute trajectory (convert first)");
  }
  const auto& e = absolute.entries();
  if (e.empty()) throw AlignmentError("cannot sample an empty trajectory");

  const auto at_time = [&](const StampedPose& s, std::int64_t t) {
    return s.pose.relabel(FrameId::body(t), FrameId::fixed());
  };

  if (e.size() == 1) {
    if (t_ns != e.front().t_ns) {
      throw ExtrapolationRefusedError("single-entry trajectory cannot cover time " +
                                      std::to_string(t_ns));
    }
    return e.front().pose;
  }

  const std::int64_t first_gap = e[1].t_ns - e[0].t_ns;
  const std::int64_t last_gap = e[e.size() - 1].t_ns - e[e.size() - 2].t_ns;
  if (t_ns < e.front().t_ns - first_gap / 2 || t_ns > e.back().t_ns + last_gap / 2) {
    throw ExtrapolationRefusedError(
        "time " + std::to_string(t_ns) + " outside pose coverage [" +
        std::to_string(e.front().t_ns) + ", " + std::to_string(e.back().t_ns) +
        "] by more than half the sampling interval");
  }
  if (t_ns <= e.front().t_ns) return at_time(e.front(), t_ns);
  if (t_ns >= e.back().t_ns) return at_time(e.back(), t_ns);

  const auto it = std::lower_bound(
      e.begin(), e.end(), t_ns,
      [](const StampedPose& s, std::int64_t t) { return s.t_ns < t; });
  if (it->t_ns == t_ns) return at_time(*it, t_ns);
  const StampedPose& hi = *it;
  const StampedPose& lo = *(it - 1);

  const double alpha = double(t_ns - lo.t_ns) / double(hi.t_ns - lo.t_ns);
  const Eigen::Vector3d d =
      (1.0 - alpha) * lo.pose.translation() + alpha * hi.pose.translation();
  Eigen::Quaterniond qa = lo.pose.quaternion();
  Eigen::Quaterniond qb = hi.pose.quaternion();
  if (qa.dot(qb) < 0.0) qb.coeffs() = -qb.coeffs();  // shortest arc
  const Eigen::Quaterniond q = qa.slerp(alpha, qb);
  return Posed(q.toRotationMatrix(), d, FrameId::body(t_ns), FrameId::fixed());
}

FrameSequence::FrameSequence(std::vector<FrameRef> frames, double nominal_fps, int width,
                             int height, std::filesystem::path image_dir)
    : frames_(std::move(frames)), nominal_fps_(nominal_fps), width_(width), height_(height),
      image_dir_(std::move(image_dir)) {
  for (std::size_t i = 1; i < frames_.size(); ++i) {
    if (frames_[i].t_ns <= frames_[i - 1].t_ns) {
      throw NonMonotonicError("frame timestamps not strictly increasing at index " +
                              std::to_string(i));
    }
  }
}

Posed AlignedSequence::relative_step(int i) const {
  if (i < 0 || i + 1 >= size()) {
    throw AlignmentError("relative step " + std::to_string(i) + " out of range for " +
                         std::to_string(size()) + " aligned frames");
  }
  return compose(inverse(frames_[std::size_t(i) + 1].body_to_fixed),
                 frames_[std::size_t(i)].body_to_fixed);
}

AlignedSequence align_and_resample(const FrameSequence& frames, const PoseTrajectory& poses,
                                   double target_fps, double clip_seconds,
                                   double time_offset_s) {
  if (frames.size() == 0) throw AlignmentError("cannot align an empty frame sequence");
  if (!(target_fps > 0.0)) throw InvalidConfigError("target fps must be positive");

  const PoseTrajectory absolute = poses.to_absolute();
  const std::int64_t offset_ns = std::llround(time_offset_s * 1e9);
  const std::int64_t period_ns = std::llround(1e9 / target_fps);
  const std::int64_t t0 = frames.frames().front().t_ns;
  const std::int64_t t_last = frames.frames().back().t_ns;
  const std::int64_t clip_ns =
      clip_seconds > 0.0 ? std::llround(clip_seconds * 1e9) : std::int64_t(-1);

  std::vector<AlignedFrame> aligned;
  int cursor = 0;
  int last_taken = -1;
  for (std::int64_t k = 0;; ++k) {
    const std::int64_t goal = t0 + k * period_ns;
    if (clip_ns >= 0 && goal - t0 >= clip_ns) break;
    if (goal > t_last + period_ns / 2) break;
    // Nearest source frame to the grid time.
    while (cursor + 1 < int(frames.size()) &&
           std::llabs(frames.frames()[cursor + 1].t_ns - goal) <=
               std::llabs(frames.frames()[cursor].t_ns - goal)) {
      ++cursor;
    }
    if (cursor == last_taken) continue;  // target rate above source rate
    last_taken = cursor;
    const std::int64_t frame_t = frames.frames()[cursor].t_ns;
    const Posed pose = sample_pose(absolute, frame_t + offset_ns)
                           .relabel(FrameId::body(frame_t), FrameId::fixed());
    aligned.push_back({cursor, frame_t, pose});
  }
  if (aligned.empty()) throw AlignmentError("resampling produced no frames");
  return AlignedSequence(std::move(aligned));
}

PoseTrajectory load_pose_csv(const std::filesystem::path& path, PoseConvention convention,
                             const std::string& source) {
  std::ifstream in(path);
  if (!in) throw MissingInputError("cannot open pose CSV: " + path.string());
  std::vector<StampedPose> entries;
  std::string line;
  int line_no = 0;
  std::int64_t prev_t = 0;
  bool have_prev = false;
  std::int64_t prev_entry_t = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!std::isdigit(static_cast<unsigned char>(line[0])) && line[0] != '-') {
      if (entries.empty()) continue;  // header line before the data
      bad_row(path, line_no, "expected a data row, got '" + line + "'");
    }
    const auto fields = split_csv(line);
    if (fields.size() < 8) {
      bad_row(path, line_no, "expected at least 8 columns, got " + std::to_string(fields.size()));
    }
    const std::int64_t t = parse_timestamp(fields[0], path, line_no);
    const double px = parse_double(fields[1], path, line_no);
    const double py = parse_double(fields[2], path, line_no);
    const double pz = parse_double(fields[3], path, line_no);
    const double qw = parse_double(fields[4], path, line_no);
    const double qx = parse_double(fields[5], path, line_no);
    const double qy = parse_double(fields[6], path, line_no);
    const double qz = parse_double(fields[7], path, line_no);

    if (have_prev && t <= prev_t) {
      throw NonMonotonicError(path.string() + ":" + std::to_string(line_no) +
                              ": timestamp " + std::to_string(t) +
                              " not after previous " + std::to_string(prev_t));
    }

    FrameId from = FrameId::body(t);
    FrameId to = FrameId::fixed();
    if (convention == PoseConvention::RelativeConsecutive) {
      from = FrameId::body(have_prev ? prev_entry_t : t);
      to = FrameId::body(t);
    }
    try {
      entries.push_back({t, Posed::from_quaternion(qw, qx, qy, qz, {px, py, pz}, from, to)});
    } catch (const InvalidRotationError& e) {
      bad_row(path, line_no, e.what());
    }
    prev_t = t;
    prev_entry_t = t;
    have_prev = true;
  }
  if (entries.empty()) throw BadFormatError("no pose rows in " + path.string());
  return PoseTrajectory(std::move(entries), convention, source);
}

void write_pose_csv(const PoseTrajectory& trajectory, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << "timestamp_ns,px,py,pz,qw,qx,qy,qz\n";
  char buf[256];
  for (const auto& e : trajectory.entries()) {
    Eigen::Quaterniond q = e.pose.quaternion();
    // Canonical sign for byte-stable output.
    if (q.w() < 0.0 || (q.w() == 0.0 && (q.x() < 0.0 || (q.x() == 0.0 && (q.y() < 0.0 || (q.y() == 0.0 && q.z() < 0.0)))))) {
      q.coeffs() = -q.coeffs();
    }
    const auto& d = e.pose.translation();
    std::snprintf(buf, sizeof(buf), "%lld,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  static_cast<long long>(e.t_ns), d.x(), d.y(), d.z(), q.w(), q.x(), q.y(),
                  q.z());
    out << buf;
  }
  if (!out) throw IoError("short write: " + path.string());
}

FrameSequence load_frame_csv(const std::filesystem::path& path, double nominal_fps, int width,
                             int height, const std::filesystem::path& image_dir) {
  std::ifstream in(path);
  if (!in) throw MissingInputError("cannot open frame CSV: " + path.string());
  std::vector<FrameRef> frames;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!std::isdigit(static_cast<unsigned char>(line[0]))) {
      if (frames.empty()) continue;  // header line before the data
      bad_row(path, line_no, "expected 'timestamp_ns,filename', got '" + line + "'");
    }
    const auto fields = split_csv(line);
    if (fields.size() < 2) {
      bad_row(path, line_no, "expected 'timestamp_ns,filename'");
    }
    const std::int64_t t = parse_timestamp(fields[0], path, line_no);
    if (!frames.empty() && t <= frames.back().t_ns) {
      throw NonMonotonicError(path.string() + ":" + std::to_string(line_no) +
                              ": frame timestamp " + std::to_string(t) + " not after previous " +
                              std::to_string(frames.back().t_ns));
    }
    frames.push_back({t, fields[1]});
  }
  if (frames.empty()) throw BadFormatError("no frame rows in " + path.string());
  return FrameSequence(std::move(frames), nominal_fps, width, height, image_dir);
}

void write_frame_csv(const FrameSequence& frames, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << "timestamp_ns,filename\n";
  for (const auto& f : frames.frames()) {
    out << f.t_ns << "," << f.filename << "\n";
  }
  if (!out) throw IoError("short write: " + path.string());
}

}  // namespace vice
