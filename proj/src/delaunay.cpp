#include "vice/delaunay.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace vice {

namespace {

using Eigen::Vector2d;

double orient2d(const Vector2d& a, const Vector2d& b, const Vector2d& c) {
  return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

// Positive when d lies strictly inside the circumcircle of ccw triangle abc.
// An epsilon band around zero counts as "on the circle" so that cocircular
// configurations (pixel grids) do not produce cavity thrash.
bool in_circumcircle(const Vector2d& a, const Vector2d& b, const Vector2d& c,
                     const Vector2d& d) {
  const double adx = a.x() - d.x(), ady = a.y() - d.y();
  const double bdx = b.x() - d.x(), bdy = b.y() - d.y();
  const double cdx = c.x() - d.x(), cdy = c.y() - d.y();
  const double ad = adx * adx + ady * ady;
  const double bd = bdx * bdx + bdy * bdy;
  const double cd = cdx * cdx + cdy * cdy;
  const double det = adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) +
                     ad * (bdx * cdy - bdy * cdx);
  const double scale = std::max({std::abs(ad), std::abs(bd), std::abs(cd), 1e-30});
  return det > 1e-11 * scale;
}

struct Builder {
  struct Tri {
    std::array<int, 3> v;
    std::array<int, 3> n;  // neighbor opposite v[i]
    bool alive = true;
  };

  std::vector<Vector2d> pts;  // normalized working coordinates
  std::vector<Tri> tris;
  int last_created = 0;

  // Walks from `start` to a live triangle containing p. Falls back to a
  // linear scan if the walk cycles (degenerate geometry).
  int locate(const Vector2d& p, int start) const {
    int current = start;
    if (current < 0 || current >= int(tris.size()) || !tris[current].alive) current = -1;
    if (current < 0) {
      for (int i = int(tris.size()) - 1; i >= 0; --i) {
        if (tris[i].alive) { current = i; break; }
      }
    }
    const int max_steps = int(tris.size()) * 2 + 64;
    for (int step = 0; step < max_steps && current >= 0; ++step) {
      const Tri& t = tris[current];
      int worst_edge = -1;
      double worst = -1e-13;
      for (int i = 0; i < 3; ++i) {
        const Vector2d& a = pts[t.v[(i + 1) % 3]];
        const Vector2d& b = pts[t.v[(i + 2) % 3]];
        const double o = orient2d(a, b, p);
        if (o < worst) {
          worst = o;
          worst_edge = i;
        }
      }
      if (worst_edge < 0) return current;
      current = t.n[worst_edge];
    }
    // Walk failed; exhaustive scan.
    for (int i = 0; i < int(tris.size()); ++i) {
      if (!tris[i].alive) continue;
      const Tri& t = tris[i];
      bool inside = true;
      for (int e = 0; e < 3 && inside; ++e) {
        inside = orient2d(pts[t.v[(e + 1) % 3]], pts[t.v[(e + 2) % 3]], p) >= -1e-13;
      }
      if (inside) return i;
    }
    return -1;
  }

  void insert(int point_index) {
    const Vector2d& p = pts[point_index];
    const int seed = locate(p, last_created);
    if (seed < 0) {
      throw InsufficientSupportError("triangulation insert landed outside the super triangle");
    }
    for (const int v : tris[seed].v) {
      if ((pts[v] - p).squaredNorm() < 1e-24) return;  // duplicate point, skip
    }

    // Grow the cavity of triangles whose circumcircle strictly contains p.
    std::vector<int> cavity{seed};
    std::vector<char> in_cavity(tris.size(), 0);
    in_cavity[seed] = 1;
    for (std::size_t head = 0; head < cavity.size(); ++head) {
      const Tri t = tris[cavity[head]];
      for (int i = 0; i < 3; ++i) {
        const int nb = t.n[i];
        if (nb < 0 || in_cavity[nb]) continue;
        const Tri& u = tris[nb];
        if (in_circumcircle(pts[u.v[0]], pts[u.v[1]], pts[u.v[2]], p)) {
          in_cavity[nb] = 1;
          cavity.push_back(nb);
        }
      }
    }

    // Boundary edges of the cavity, oriented ccw as seen from inside.
    struct BoundaryEdge { int a, b, outer; };
    std::vector<BoundaryEdge> boundary;
    for (const int ti : cavity) {
      const Tri& t = tris[ti];
      for (int i = 0; i < 3; ++i) {
        const int nb = t.n[i];
        if (nb >= 0 && in_cavity[nb]) continue;
        boundary.push_back({t.v[(i + 1) % 3], t.v[(i + 2) % 3], nb});
      }
    }

    for (const int ti : cavity) tris[ti].alive = false;

    // Fan the cavity boundary around p. Edge (p,a) of triangle (p,a,b) pairs
    // with the fan neighbor whose b equals a.
    std::unordered_map<int, int> tri_by_a, tri_by_b;
    tri_by_a.reserve(boundary.size() * 2);
    tri_by_b.reserve(boundary.size() * 2);
    const int first_new = int(tris.size());
    for (const auto& e : boundary) {
      const int idx = int(tris.size());
      tris.push_back(Tri{{point_index, e.a, e.b}, {e.outer, -1, -1}, true});
      tri_by_a[e.a] = idx;
      tri_by_b[e.b] = idx;
    }
    // Link fan neighbors and fix the outer triangles' back pointers.
    for (int idx = first_new; idx < int(tris.size()); ++idx) {
      Tri& t = tris[idx];
      const int a = t.v[1], b = t.v[2];
      // neighbor opposite v[1]=a is across edge (b, p): the fan triangle with a'==b
      t.n[1] = tri_by_a.at(b);
      // neighbor opposite v[2]=b is across edge (p, a): the fan triangle with b'==a
      t.n[2] = tri_by_b.at(a);
      const int outer = t.n[0];
      if (outer >= 0) {
        Tri& o = tris[outer];
        for (int i = 0; i < 3; ++i) {
          const int oa = o.v[(i + 1) % 3], ob = o.v[(i + 2) % 3];
          if ((oa == b && ob == a)) {
            o.n[i] = idx;
            break;
          }
        }
      }
    }
    last_created = first_new;
    if (int(tris.size()) > first_new) last_created = int(tris.size()) - 1;
  }
};

}  // namespace

int Triangulation::locate(const Eigen::Vector2d& p, int hint) const {
  if (triangles_.empty()) return -1;
  int current = (hint >= 0 && hint < int(triangles_.size())) ? hint : 0;
  const int max_steps = int(triangles_.size()) * 2 + 64;
  for (int step = 0; step < max_steps; ++step) {
    const Triangle& t = triangles_[current];
    int exit_edge = -1;
    double worst = -1e-13;
    for (int i = 0; i < 3; ++i) {
      const Eigen::Vector2d& a = points_[t.v[(i + 1) % 3]];
      const Eigen::Vector2d& b = points_[t.v[(i + 2) % 3]];
      const double o = orient2d(a, b, p);
      if (o < worst) {
        worst = o;
        exit_edge = i;
      }
    }
    if (exit_edge < 0) return current;
    const int nb = t.n[exit_edge];
    if (nb < 0) return -1;  // walked off the hull
    current = nb;
  }
  // Degenerate walk; exhaustive fallback.
  for (int i = 0; i < int(triangles_.size()); ++i) {
    const Triangle& t = triangles_[i];
    bool inside = true;
    for (int e = 0; e < 3 && inside; ++e) {
      inside = orient2d(points_[t.v[(e + 1) % 3]], points_[t.v[(e + 2) % 3]], p) >= -1e-13;
    }
    if (inside) return i;
  }
  return -1;
}

Eigen::Vector3d Triangulation::barycentric(int triangle, const Eigen::Vector2d& p) const {
  const Triangle& t = triangles_[triangle];
  const Eigen::Vector2d& a = points_[t.v[0]];
  const Eigen::Vector2d& b = points_[t.v[1]];
  const Eigen::Vector2d& c = points_[t.v[2]];
  const double area = orient2d(a, b, c);
  const double wa = orient2d(b, c, p) / area;
  const double wb = orient2d(c, a, p) / area;
  return {wa, wb, 1.0 - wa - wb};
}

Triangulation delaunay_triangulate(const std::vector<Eigen::Vector2d>& input) {
  const int n = int(input.size());
  if (n < 3) {
    throw InsufficientSupportError("triangulation needs at least 3 points, got " +
                                   std::to_string(n));
  }

  // Normalize into the unit box for predicate stability.
  Eigen::Vector2d lo = input[0], hi = input[0];
  for (const auto& p : input) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const double span = std::max({hi.x() - lo.x(), hi.y() - lo.y(), 1e-12});

  Builder builder;
  builder.pts.reserve(n + 3);
  for (const auto& p : input) builder.pts.push_back((p - lo) / span);

  // Collinearity check on the normalized set.
  bool non_collinear = false;
  for (int i = 2; i < n && !non_collinear; ++i) {
    non_collinear = std::abs(orient2d(builder.pts[0], builder.pts[1], builder.pts[i])) > 1e-12;
  }
  if (!non_collinear) {
    throw InsufficientSupportError("triangulation points are collinear");
  }

  // Super triangle comfortably enclosing the unit box.
  builder.pts.push_back(Vector2d(-60.0, -50.0));
  builder.pts.push_back(Vector2d(62.0, -50.0));
  builder.pts.push_back(Vector2d(0.5, 80.0));
  builder.tris.push_back(Builder::Tri{{n, n + 1, n + 2}, {-1, -1, -1}, true});

  for (int i = 0; i < n; ++i) builder.insert(i);

  // Keep triangles made purely of input points; rebuild neighbor links over
  // the surviving set.
  Triangulation out;
  out.points_ = input;
  std::unordered_map<std::int64_t, int> half_edge;  // directed edge -> triangle
  const auto edge_key = [n](int a, int b) {
    return std::int64_t(a) * (n + 3) + b;
  };
  for (const auto& t : builder.tris) {
    if (!t.alive) continue;
    if (t.v[0] >= n || t.v[1] >= n || t.v[2] >= n) continue;
    const int idx = int(out.triangles_.size());
    out.triangles_.push_back(Triangulation::Triangle{{t.v[0], t.v[1], t.v[2]}, {-1, -1, -1}});
    for (int i = 0; i < 3; ++i) {
      half_edge[edge_key(t.v[(i + 1) % 3], t.v[(i + 2) % 3])] = idx;
    }
  }
  if (out.triangles_.empty()) {
    throw InsufficientSupportError("triangulation degenerated to an empty set");
  }
  for (int idx = 0; idx < int(out.triangles_.size()); ++idx) {
    auto& t = out.triangles_[idx];
    for (int i = 0; i < 3; ++i) {
      const auto it = half_edge.find(edge_key(t.v[(i + 2) % 3], t.v[(i + 1) % 3]));
      t.n[i] = (it == half_edge.end()) ? -1 : it->second;
    }
  }
  return out;
}

}  // namespace vice
