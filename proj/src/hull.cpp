#include "polyrigid/hull.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

namespace polyrigid {

double diameter(std::span<const Point3> points) {
  double best = 0.0;
  for (std::size_t a = 0; a < points.size(); ++a) {
    for (std::size_t b = a + 1; b < points.size(); ++b) {
      best = std::max(best, (points[a] - points[b]).norm());
    }
  }
  return best;
}

namespace {

struct Facet {
  std::array<int, 3> v;
  Vec3 normal;  // unit, outward
  double offset;
  bool alive = true;
};

Facet make_facet(const std::vector<Point3>& p, int a, int b, int c) {
  Facet f;
  f.v = {a, b, c};
  Vec3 n = (p[b] - p[a]).cross(p[c] - p[a]);
  const double len = n.norm();
  f.normal = len > 0.0 ? Vec3(n / len) : Vec3::Zero();
  f.offset = f.normal.dot(p[a]);
  return f;
}

double distance_to_line(const Point3& x, const Point3& a, const Point3& b) {
  const Vec3 d = b - a;
  return (x - a).cross(d).norm() / d.norm();
}

}  // namespace

ConvexHull convex_hull(std::span<const Point3> points, double tol) {
  ConvexHull hull;
  const int n = static_cast<int>(points.size());
  if (n < 4) return hull;

  const double diam = diameter(points);
  if (diam <= 0.0) return hull;
  Point3 centroid = Point3::Zero();
  for (const auto& q : points) centroid += q;
  centroid /= n;
  std::vector<Point3> p;
  p.reserve(n);
  for (const auto& q : points) p.emplace_back((q - centroid) / diam);

  // Initial simplex from extreme points.
  int i0 = 0;
  for (int k = 1; k < n; ++k) {
    if (p[k].x() < p[i0].x()) i0 = k;
  }
  int i1 = -1;
  double best = 0.0;
  for (int k = 0; k < n; ++k) {
    const double d = (p[k] - p[i0]).norm();
    if (d > best) { best = d; i1 = k; }
  }
  if (i1 < 0 || best <= tol) return hull;
  int i2 = -1;
  best = 0.0;
  for (int k = 0; k < n; ++k) {
    const double d = distance_to_line(p[k], p[i0], p[i1]);
    if (d > best) { best = d; i2 = k; }
  }
  if (i2 < 0 || best <= tol) return hull;
  const Vec3 plane_n = (p[i1] - p[i0]).cross(p[i2] - p[i0]).normalized();
  int i3 = -1;
  best = 0.0;
  for (int k = 0; k < n; ++k) {
    const double d = std::abs(plane_n.dot(p[k] - p[i0]));
    if (d > best) { best = d; i3 = k; }
  }
  if (i3 < 0 || best <= tol) return hull;

  hull.full_dimensional = true;
  std::vector<Facet> facets;
  if (plane_n.dot(p[i3] - p[i0]) > 0.0) std::swap(i1, i2);
  facets.push_back(make_facet(p, i0, i1, i2));
  facets.push_back(make_facet(p, i0, i3, i1));
  facets.push_back(make_facet(p, i1, i3, i2));
  facets.push_back(make_facet(p, i2, i3, i0));

  std::vector<bool> used(n, false);
  used[i0] = used[i1] = used[i2] = used[i3] = true;

  for (int k = 0; k < n; ++k) {
    if (used[k]) continue;
    std::vector<int> visible;
    for (int f = 0; f < static_cast<int>(facets.size()); ++f) {
      if (!facets[f].alive) continue;
      if (facets[f].normal.dot(p[k]) - facets[f].offset > tol) visible.push_back(f);
    }
    if (visible.empty()) continue;
    used[k] = true;

    std::map<std::pair<int, int>, int> directed;
    for (int f : visible) {
      const auto& v = facets[f].v;
      for (int e = 0; e < 3; ++e) directed[{v[e], v[(e + 1) % 3]}] = f;
    }
    std::vector<std::pair<int, int>> horizon;
    for (const auto& [edge, f] : directed) {
      if (!directed.contains({edge.second, edge.first})) horizon.push_back(edge);
    }
    for (int f : visible) facets[f].alive = false;
    for (const auto& [a, b] : horizon) facets.push_back(make_facet(p, a, b, k));
  }

  std::vector<bool> is_vertex(n, false);
  for (const auto& f : facets) {
    if (!f.alive) continue;
    hull.facets.push_back(f.v);
    for (int v : f.v) is_vertex[v] = true;
  }
  for (int k = 0; k < n; ++k) {
    if (is_vertex[k]) hull.vertices.push_back(k);
  }
  return hull;
}

bool open_hemisphere_witness(std::span<const Vec3> directions, double tol, Vec3& witness) {
  std::vector<Vec3> d;
  d.reserve(directions.size());
  for (const auto& x : directions) {
    const double len = x.norm();
    if (len <= 0.0) return false;
    d.emplace_back(x / len);
  }
  if (d.empty()) return false;

  double best_margin = -2.0;
  Vec3 best_u = Vec3::Zero();
  auto consider = [&](const Vec3& u) {
    double margin = 2.0;
    for (const auto& x : d) margin = std::min(margin, u.dot(x));
    if (margin > best_margin) {
      best_margin = margin;
      best_u = u;
    }
  };

  const std::size_t m = d.size();
  for (std::size_t a = 0; a < m; ++a) {
    consider(d[a]);
    for (std::size_t b = a + 1; b < m; ++b) {
      const Vec3 mid = d[a] + d[b];
      if (mid.norm() > 1e-14) consider(mid.normalized());
      for (std::size_t c = b + 1; c < m; ++c) {
        Vec3 nrm = (d[b] - d[a]).cross(d[c] - d[a]);
        if (nrm.norm() <= 1e-14) continue;
        nrm.normalize();
        if (nrm.dot(d[a]) < 0.0) nrm = -nrm;
        consider(nrm);
      }
    }
  }
  witness = best_u;
  return best_margin > tol;
}

}  // namespace polyrigid
