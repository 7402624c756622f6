#include "lgdc/delaunay.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>

namespace lgdc {

namespace {

struct Triangle {
  std::array<int, 3> v;  // counter-clockwise
};

double orient(const Point& a, const Point& b, const Point& c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

// Positive when d lies strictly inside the circumcircle of ccw triangle abc.
double in_circle(const Point& a, const Point& b, const Point& c, const Point& d) {
  const double adx = a.x - d.x, ady = a.y - d.y;
  const double bdx = b.x - d.x, bdy = b.y - d.y;
  const double cdx = c.x - d.x, cdy = c.y - d.y;
  const double ad = adx * adx + ady * ady;
  const double bd = bdx * bdx + bdy * bdy;
  const double cd = cdx * cdx + cdy * cdy;
  return adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) + ad * (bdx * cdy - bdy * cdx);
}

std::vector<int> convex_hull(std::span<const Point> pts) {
  std::vector<int> idx(pts.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    return pts[a].x < pts[b].x || (pts[a].x == pts[b].x && pts[a].y < pts[b].y);
  });
  if (idx.size() < 3) return idx;
  std::vector<int> hull(2 * idx.size());
  std::size_t k = 0;
  for (int i : idx) {
    while (k >= 2 && orient(pts[hull[k - 2]], pts[hull[k - 1]], pts[i]) <= 0) --k;
    hull[k++] = i;
  }
  for (std::size_t t = idx.size() - 1, lower = k + 1; t-- > 0;) {
    const int i = idx[t];
    while (k >= lower && orient(pts[hull[k - 2]], pts[hull[k - 1]], pts[i]) <= 0) --k;
    hull[k++] = i;
  }
  hull.resize(k - 1);
  return hull;
}

}  // namespace

std::optional<std::vector<std::pair<int, int>>> delaunay_edges(std::span<const Point> points) {
  const int n = static_cast<int>(points.size());
  if (n < 2) return std::vector<std::pair<int, int>>{};
  if (n == 2) return std::vector<std::pair<int, int>>{{0, 1}};

  double min_x = points[0].x, max_x = points[0].x, min_y = points[0].y, max_y = points[0].y;
  for (const auto& p : points) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  const double span = std::max({max_x - min_x, max_y - min_y, 1e-9});
  const double cx = 0.5 * (min_x + max_x);
  const double cy = 0.5 * (min_y + max_y);
  const double big = 64.0 * span;

  std::vector<Point> pts(points.begin(), points.end());
  pts.push_back({cx - 2.0 * big, cy - big});
  pts.push_back({cx + 2.0 * big, cy - big});
  pts.push_back({cx, cy + 2.0 * big});
  const double eps = 1e-12 * span * span * span * span;

  std::vector<Triangle> tris{{{n, n + 1, n + 2}}};
  for (int p = 0; p < n; ++p) {
    std::vector<Triangle> keep;
    std::map<std::pair<int, int>, int> boundary;  // directed edge -> multiplicity
    for (const auto& t : tris) {
      const double det = in_circle(pts[t.v[0]], pts[t.v[1]], pts[t.v[2]], pts[p]);
      const bool real_triangle = t.v[0] < n && t.v[1] < n && t.v[2] < n;
      if (real_triangle && std::abs(det) <= eps) return std::nullopt;
      if (det > 0.0) {
        for (int k = 0; k < 3; ++k) boundary[{t.v[k], t.v[(k + 1) % 3]}] += 1;
      } else {
        keep.push_back(t);
      }
    }
    for (const auto& [edge, count] : boundary) {
      // Interior edges of the cavity appear once in each direction.
      if (boundary.count({edge.second, edge.first})) continue;
      Triangle t{{edge.first, edge.second, p}};
      const double o = orient(pts[t.v[0]], pts[t.v[1]], pts[t.v[2]]);
      if (std::abs(o) <= 1e-14 * span * span) return std::nullopt;
      keep.push_back(t);
    }
    tris = std::move(keep);
  }

  std::set<std::pair<int, int>> edges;
  auto add = [&](int a, int b) {
    if (a >= n || b >= n) return;
    edges.insert({std::min(a, b), std::max(a, b)});
  };
  for (const auto& t : tris) {
    for (int k = 0; k < 3; ++k) add(t.v[k], t.v[(k + 1) % 3]);
  }
  const auto hull = convex_hull(points);
  for (std::size_t k = 0; k < hull.size(); ++k) add(hull[k], hull[(k + 1) % hull.size()]);
  return std::vector<std::pair<int, int>>(edges.begin(), edges.end());
}

}  // namespace lgdc
