#include "vice/ply.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "vice/errors.hpp"

namespace vice {

namespace {

[[noreturn]] void bad(const std::filesystem::path& path, int line, const std::string& what) {
  throw BadFormatError(path.string() + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

std::vector<Eigen::Vector3d> read_ply(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MissingInputError("cannot open PLY file: " + path.string());

  std::string line;
  int line_no = 0;
  const auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) return true;
    }
    return false;
  };

  if (!next_line() || line != "ply") bad(path, line_no, "missing 'ply' magic");
  if (!next_line() || line.rfind("format ascii 1.0", 0) != 0) {
    bad(path, line_no, "only 'format ascii 1.0' is supported");
  }

  long vertex_count = -1;
  int property_count = 0;
  int x_idx = -1, y_idx = -1, z_idx = -1;
  bool in_vertex_element = false;
  while (next_line()) {
    std::istringstream ls(line);
    std::string tok;
    ls >> tok;
    if (tok == "comment") continue;
    if (tok == "element") {
      std::string name;
      long count = 0;
      ls >> name >> count;
      in_vertex_element = (name == "vertex");
      if (in_vertex_element) vertex_count = count;
      continue;
    }
    if (tok == "property") {
      if (!in_vertex_element) continue;
      std::string type, name;
      ls >> type >> name;
      if (type == "list") bad(path, line_no, "list properties are not supported in vertices");
      if (name == "x") x_idx = property_count;
      if (name == "y") y_idx = property_count;
      if (name == "z") z_idx = property_count;
      ++property_count;
      continue;
    }
    if (tok == "end_header") break;
    bad(path, line_no, "unexpected header token '" + tok + "'");
  }
  if (vertex_count < 0) bad(path, line_no, "no vertex element declared");
  if (x_idx < 0 || y_idx < 0 || z_idx < 0) bad(path, line_no, "vertex element lacks x/y/z");

  std::vector<Eigen::Vector3d> points;
  points.reserve(std::size_t(vertex_count));
  for (long i = 0; i < vertex_count; ++i) {
    if (!next_line()) bad(path, line_no, "vertex list truncated");
    std::istringstream ls(line);
    Eigen::Vector3d p = Eigen::Vector3d::Zero();
    double value = 0.0;
    for (int c = 0; c < property_count; ++c) {
      if (!(ls >> value)) bad(path, line_no, "non-numeric or missing vertex property");
      if (c == x_idx) p.x() = value;
      if (c == y_idx) p.y() = value;
      if (c == z_idx) p.z() = value;
    }
    points.push_back(p);
  }
  return points;
}

void write_ply(const std::vector<Eigen::Vector3d>& points, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << "ply\nformat ascii 1.0\n";
  out << "element vertex " << points.size() << "\n";
  out << "property double x\nproperty double y\nproperty double z\n";
  out << "end_header\n";
  char buf[96];
  for (const auto& p : points) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g\n", p.x(), p.y(), p.z());
    out << buf;
  }
  if (!out) throw IoError("short write: " + path.string());
}

}  // namespace vice
