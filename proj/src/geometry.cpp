#include "polyrigid/geometry.hpp"

#include "polyrigid/hull.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <queue>
#include <sstream>

namespace polyrigid {

void Tolerance::validate() const {
  if (!(rank_tol > 0.0 && rank_tol < 1e-3)) throw GeometryError("rank_tol must lie in (0, 1e-3)");
  if (!(geom_tol > 0.0 && geom_tol < 1e-3)) throw GeometryError("geom_tol must lie in (0, 1e-3)");
}

std::string to_string(const Edge& e) {
  return "[" + std::to_string(e.i) + "," + std::to_string(e.j) + "]";
}

std::vector<Point3> normalized_unit_diameter(std::span<const Point3> points) {
  std::vector<Point3> out(points.begin(), points.end());
  if (out.empty()) return out;
  Point3 c = Point3::Zero();
  for (const auto& p : out) c += p;
  c /= static_cast<double>(out.size());
  const double d = diameter(points);
  for (auto& p : out) p = d > 0.0 ? Point3((p - c) / d) : Point3(p - c);
  return out;
}

// ---------------------------------------------------------------------------
// PolyhedralSurface

namespace {

struct Combinatorics {
  std::vector<Edge> edges;
  std::vector<std::array<int, 2>> edge_faces;
  std::vector<std::vector<int>> rings;
};

Combinatorics build_combinatorics(int nv, const std::vector<Face>& faces) {
  Combinatorics c;
  std::map<std::pair<int, int>, int> directed;
  for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
    const auto& t = faces[f];
    for (int k = 0; k < 3; ++k) {
      if (t[k] < 0 || t[k] >= nv) {
        throw GeometryError("face " + std::to_string(f) + " has a vertex index out of range");
      }
    }
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) {
      throw GeometryError("face " + std::to_string(f) + " repeats a vertex index");
    }
    for (int k = 0; k < 3; ++k) {
      const std::pair<int, int> d{t[k], t[(k + 1) % 3]};
      if (!directed.emplace(d, f).second) {
        throw GeometryError("directed edge " + std::to_string(d.first) + "->" + std::to_string(d.second) +
                            " appears twice: faces are inconsistently oriented or an edge has more than two faces");
      }
    }
  }

  for (const auto& [d, f] : directed) {
    auto twin = directed.find({d.second, d.first});
    if (twin == directed.end()) {
      throw GeometryError("edge " + to_string(make_edge(d.first, d.second)) + " borders only one face");
    }
    if (d.first < d.second) {
      c.edges.push_back({d.first, d.second});
      c.edge_faces.push_back({f, twin->second});
    }
  }

  // Rotation at each vertex: face (v, x, y) links x -> y.
  std::vector<std::map<int, int>> next(nv);
  for (const auto& t : faces) {
    for (int k = 0; k < 3; ++k) next[t[k]][t[(k + 1) % 3]] = t[(k + 2) % 3];
  }
  c.rings.resize(nv);
  for (int v = 0; v < nv; ++v) {
    if (next[v].empty()) throw GeometryError("vertex " + std::to_string(v) + " is not on any face");
    const int start = next[v].begin()->first;
    int cur = start;
    do {
      c.rings[v].push_back(cur);
      auto it = next[v].find(cur);
      if (it == next[v].end()) throw GeometryError("vertex " + std::to_string(v) + " has an open star");
      cur = it->second;
    } while (cur != start && c.rings[v].size() <= next[v].size());
    if (c.rings[v].size() != next[v].size()) {
      throw GeometryError("vertex " + std::to_string(v) + " has a non-manifold star");
    }
  }
  return c;
}

double volume_of(const std::vector<Point3>& p, const std::vector<Face>& faces) {
  double v = 0.0;
  for (const auto& f : faces) v += p[f[0]].dot(p[f[1]].cross(p[f[2]]));
  return v / 6.0;
}

}  // namespace

PolyhedralSurface::PolyhedralSurface(std::vector<Point3> vertices, std::vector<Face> faces, double geom_tol)
    : vertices_(std::move(vertices)), faces_(std::move(faces)) {
  const int nv = vertex_count();
  if (nv < 4) throw GeometryError("a closed surface needs at least 4 vertices");
  for (int v = 0; v < nv; ++v) {
    if (!vertices_[v].allFinite()) throw GeometryError("vertex " + std::to_string(v) + " is not finite");
  }
  const auto unit = normalized_unit_diameter(vertices_);
  for (int a = 0; a < nv; ++a) {
    for (int b = a + 1; b < nv; ++b) {
      if ((unit[a] - unit[b]).norm() < geom_tol) {
        throw GeometryError("vertices " + std::to_string(a) + " and " + std::to_string(b) + " coincide");
      }
    }
  }

  Combinatorics c = build_combinatorics(nv, faces_);

  std::vector<bool> seen(nv, false);
  std::queue<int> todo;
  todo.push(0);
  seen[0] = true;
  int reached = 1;
  while (!todo.empty()) {
    const int v = todo.front();
    todo.pop();
    for (int w : c.rings[v]) {
      if (!seen[w]) {
        seen[w] = true;
        ++reached;
        todo.push(w);
      }
    }
  }
  if (reached != nv) throw GeometryError("surface is not connected");

  const int e = static_cast<int>(c.edges.size());
  const int f = face_count();
  if (2 * e != 3 * f) throw GeometryError("edge/face count violates 2e = 3f");
  if (nv - e + f != 2) {
    throw GeometryError("Euler characteristic is " + std::to_string(nv - e + f) + ", expected 2");
  }

  if (volume_of(vertices_, faces_) < 0.0) {
    for (auto& t : faces_) std::swap(t[1], t[2]);
    c = build_combinatorics(nv, faces_);
  }
  edges_ = std::move(c.edges);
  edge_faces_ = std::move(c.edge_faces);
  rings_ = std::move(c.rings);
}

int PolyhedralSurface::edge_index(Edge e) const {
  auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
  if (it == edges_.end() || *it != e) return -1;
  return static_cast<int>(it - edges_.begin());
}

int PolyhedralSurface::opposite_vertex(int face, Edge e) const {
  for (int v : faces_[face]) {
    if (v != e.i && v != e.j) return v;
  }
  throw GeometryError("face does not contain the edge");
}

double PolyhedralSurface::signed_volume() const { return volume_of(vertices_, faces_); }

// ---------------------------------------------------------------------------
// Dihedral angles

double dihedral_angle(const Point3& a, const Point3& b, const Point3& c, const Point3& d) {
  const Vec3 e = b - a;
  const Vec3 A = c - a;
  const Vec3 B = d - a;
  const double le = e.norm();
  if (le <= 0.0 || A.cross(e).norm() <= 1e-15 * le * A.norm() || B.cross(e).norm() <= 1e-15 * le * B.norm()) {
    throw GeometryError("dihedral_angle: degenerate face");
  }
  const double x = le * le * A.dot(B) - A.dot(e) * B.dot(e);
  const double y = le * B.cross(A).dot(e);
  double alpha = std::atan2(y, x);
  if (alpha < 0.0) alpha += 2.0 * std::numbers::pi;
  return alpha;
}

double dihedral_angle_rate(const Point3& a, const Point3& b, const Point3& c, const Point3& d,
                           const Vec3& va, const Vec3& vb, const Vec3& vc, const Vec3& vd) {
  const Vec3 e = b - a;
  const Vec3 A = c - a;
  const Vec3 B = d - a;
  const Vec3 de = vb - va;
  const Vec3 dA = vc - va;
  const Vec3 dB = vd - va;
  const double le = e.norm();
  const double dle = e.dot(de) / le;

  const double x = le * le * A.dot(B) - A.dot(e) * B.dot(e);
  const double dx = 2.0 * e.dot(de) * A.dot(B) + le * le * (dA.dot(B) + A.dot(dB)) -
                    (dA.dot(e) + A.dot(de)) * B.dot(e) - A.dot(e) * (dB.dot(e) + B.dot(de));
  const double t = B.cross(A).dot(e);
  const double dt = (dB.cross(A) + B.cross(dA)).dot(e) + B.cross(A).dot(de);
  const double y = le * t;
  const double dy = dle * t + le * dt;
  return (x * dy - y * dx) / (x * x + y * y);
}

namespace {

struct EdgeQuad {
  int a, b, c, d;
};

// a->b lies in the first face (a, b, c); the second face is (b, a, d).
EdgeQuad edge_quad(const PolyhedralSurface& s, int edge) {
  const Edge e = s.edges()[edge];
  const auto faces = s.edge_faces(edge);
  return {e.i, e.j, s.opposite_vertex(faces[0], e), s.opposite_vertex(faces[1], e)};
}

}  // namespace

double dihedral_angle(const PolyhedralSurface& surface, int edge) {
  const auto q = edge_quad(surface, edge);
  const auto& p = surface.vertices();
  return dihedral_angle(p[q.a], p[q.b], p[q.c], p[q.d]);
}

double dihedral_angle(const PolyhedralSurface& surface, Edge e) {
  const int k = surface.edge_index(e);
  if (k < 0) throw GeometryError("dihedral_angle: " + to_string(e) + " is not a surface edge");
  return dihedral_angle(surface, k);
}

// ---------------------------------------------------------------------------
// Convexity

std::string to_string(ConvexityClass c) {
  switch (c) {
    case ConvexityClass::StronglyStrictlyConvex: return "StronglyStrictlyConvex";
    case ConvexityClass::WeaklyStrictlyConvex: return "WeaklyStrictlyConvex";
    case ConvexityClass::NotWeaklyConvex: return "NotWeaklyConvex";
  }
  return "?";
}

namespace {

// A support plane through segment [a, b] touching nothing else exists iff the
// other points, projected along the segment, fit in an open half-plane.
bool edge_is_exposed(const std::vector<Point3>& p, int a, int b, double tol) {
  const Vec3 u = (p[b] - p[a]).normalized();
  Vec3 x = u.unitOrthogonal();
  Vec3 y = u.cross(x);
  std::vector<double> angles;
  for (int k = 0; k < static_cast<int>(p.size()); ++k) {
    if (k == a || k == b) continue;
    const Vec3 w = p[k] - p[a];
    const Vec3 perp = w - w.dot(u) * u;
    if (perp.norm() <= tol) return false;
    angles.push_back(std::atan2(perp.dot(y), perp.dot(x)));
  }
  if (angles.empty()) return true;
  std::sort(angles.begin(), angles.end());
  double max_gap = angles.front() + 2.0 * std::numbers::pi - angles.back();
  for (std::size_t k = 1; k < angles.size(); ++k) max_gap = std::max(max_gap, angles[k] - angles[k - 1]);
  return max_gap > std::numbers::pi + tol;
}

}  // namespace

ConvexityReport classify_convexity(const PolyhedralSurface& surface, const Tolerance& tol) {
  ConvexityReport r;
  const int nv = surface.vertex_count();
  const int ne = surface.edge_count();
  r.vertex_exposed.assign(nv, false);
  r.edge_exposed.assign(ne, false);
  r.edge_non_convex.assign(ne, false);
  r.dihedral.assign(ne, 0.0);

  const auto p = normalized_unit_diameter(surface.vertices());
  const ConvexHull hull = convex_hull(p, tol.geom_tol);

  for (int e = 0; e < ne; ++e) {
    r.dihedral[e] = dihedral_angle(surface, e);
    if (r.dihedral[e] > std::numbers::pi + 1e-9) {
      r.edge_non_convex[e] = true;
      ++r.non_convex_edge_count;
    }
  }

  if (!hull.full_dimensional) {
    r.classification = ConvexityClass::NotWeaklyConvex;
    r.diagnostic = "degenerate surface: the vertices do not span 3-space";
    return r;
  }

  std::vector<Vec3> normal_sum(nv, Vec3::Zero());
  for (const auto& f : hull.facets) {
    const Vec3 n = (p[f[1]] - p[f[0]]).cross(p[f[2]] - p[f[0]]).normalized();
    for (int v : f) normal_sum[v] += n;
  }
  bool weak = true;
  std::ostringstream diag;
  for (int v : hull.vertices) {
    const Vec3 u = normal_sum[v].normalized();
    bool ok = true;
    for (int w = 0; w < nv && ok; ++w) {
      if (w != v && u.dot(p[w] - p[v]) >= -tol.geom_tol) ok = false;
    }
    r.vertex_exposed[v] = ok;
  }
  for (int v = 0; v < nv; ++v) {
    if (!r.vertex_exposed[v]) {
      weak = false;
      diag << "vertex " << v << " is not an exposed point of the hull; ";
    }
  }

  bool strong = weak;
  for (int e = 0; e < ne; ++e) {
    const Edge ed = surface.edges()[e];
    if (r.vertex_exposed[ed.i] && r.vertex_exposed[ed.j]) {
      r.edge_exposed[e] = edge_is_exposed(p, ed.i, ed.j, tol.geom_tol);
    }
    if (!r.edge_exposed[e]) strong = false;
  }

  if (strong) {
    r.classification = ConvexityClass::StronglyStrictlyConvex;
  } else if (weak) {
    r.classification = ConvexityClass::WeaklyStrictlyConvex;
  } else {
    r.classification = ConvexityClass::NotWeaklyConvex;
  }
  r.diagnostic = diag.str();
  return r;
}

// ---------------------------------------------------------------------------
// Links

SphericalPolygon vertex_link(const PolyhedralSurface& surface, int vertex, const Tolerance& tol) {
  if (vertex < 0 || vertex >= surface.vertex_count()) throw GeometryError("vertex_link: vertex out of range");
  const auto& ring = surface.ring(vertex);
  if (ring.size() < 3) throw GeometryError("vertex_link: fewer than three incident faces");
  const auto& p = surface.vertices();

  SphericalPolygon link;
  link.neighbor_ids = ring;
  for (int w : ring) link.vertices.push_back((p[w] - p[vertex]).normalized());
  const std::size_t k = ring.size();
  for (std::size_t s = 0; s < k; ++s) {
    const Vec3& x = link.vertices[s];
    const Vec3& y = link.vertices[(s + 1) % k];
    link.side_lengths.push_back(std::atan2(x.cross(y).norm(), x.dot(y)));
    link.angles.push_back(dihedral_angle(surface, make_edge(vertex, ring[s])));
  }
  Vec3 w;
  if (open_hemisphere_witness(link.vertices, tol.geom_tol, w)) link.hemisphere_witness = w;
  return link;
}

Vec3 spherical_polygon_relation_residual(const SphericalPolygon& link, std::span<const double> angle_variations) {
  if (angle_variations.size() != link.vertices.size()) {
    throw GeometryError("spherical_polygon_relation_residual: length mismatch");
  }
  Vec3 r = Vec3::Zero();
  for (std::size_t k = 0; k < link.vertices.size(); ++k) r += angle_variations[k] * link.vertices[k];
  return r;
}

// ---------------------------------------------------------------------------
// Projective maps

ProjectiveMap::ProjectiveMap() : m_(Eigen::Matrix4d::Identity()) {}

ProjectiveMap::ProjectiveMap(const Eigen::Matrix4d& m) : m_(m) {
  const double scale = m.cwiseAbs().maxCoeff();
  if (!(scale > 0.0) || !m.allFinite() || std::abs((m / scale).determinant()) <= 1e-12) {
    throw GeometryError("projective map is singular");
  }
}

bool ProjectiveMap::is_affine(double tol) const {
  const double s = std::abs(m_(3, 3));
  return s > 0.0 && std::abs(m_(0, 3)) <= tol * s && std::abs(m_(1, 3)) <= tol * s &&
         std::abs(m_(2, 3)) <= tol * s;
}

double ProjectiveMap::weight(const Point3& p) const {
  return p.x() * m_(0, 3) + p.y() * m_(1, 3) + p.z() * m_(2, 3) + m_(3, 3);
}

Point3 ProjectiveMap::apply(const Point3& p) const {
  Eigen::RowVector4d h(p.x(), p.y(), p.z(), 1.0);
  const Eigen::RowVector4d r = h * m_;
  return Point3(r(0), r(1), r(2)) / r(3);
}

ProjectiveMap ProjectiveMap::then(const ProjectiveMap& next) const { return ProjectiveMap(m_ * next.m_); }

std::vector<Point3> apply_projective(const ProjectiveMap& map, std::span<const Point3> points, double geom_tol) {
  std::vector<double> w;
  double wmax = 0.0;
  for (const auto& p : points) {
    w.push_back(map.weight(p));
    wmax = std::max(wmax, std::abs(w.back()));
  }
  if (wmax <= 0.0) throw GeometryError("apply_projective: every vertex maps to infinity");
  const double sign = std::abs(*std::max_element(w.begin(), w.end())) >= std::abs(*std::min_element(w.begin(), w.end()))
                          ? 1.0
                          : -1.0;
  std::vector<Point3> out;
  out.reserve(points.size());
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (sign * w[k] < geom_tol * wmax) {
      throw GeometryError("apply_projective: vertex " + std::to_string(k) +
                          " maps to or beyond the plane at infinity");
    }
    out.push_back(map.apply(points[k]));
  }
  return out;
}

PolyhedralSurface apply_projective(const ProjectiveMap& map, const PolyhedralSurface& surface, double geom_tol) {
  return PolyhedralSurface(apply_projective(map, surface.vertices(), geom_tol), surface.faces(), geom_tol);
}

ProjectiveMap pole_frame_similarity(const Point3& north, const Point3& south) {
  const Vec3 axis = north - south;
  const double len = axis.norm();
  if (!(len > 0.0)) throw GeometryError("poles coincide");
  const Eigen::Matrix3d rot = Eigen::Quaterniond::FromTwoVectors(axis, Vec3::UnitZ()).toRotationMatrix();
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  m.topLeftCorner<3, 3>() = rot.transpose() / len;
  m.block<1, 3>(3, 0) = -(rot * south).transpose() / len;
  m(3, 3) = 1.0;
  return ProjectiveMap(m);
}

bool pole_support_planes_ok(const Point3& north, const Point3& south, std::span<const Point3> others, double tol) {
  if ((south - Point3::Zero()).norm() > 1e-9 || (north - Point3::UnitZ()).norm() > 1e-9) return false;
  for (const auto& p : others) {
    if (!(p.z() > tol && p.z() < 1.0 - tol)) return false;
  }
  return true;
}

ProjectiveMap pole_normalizing_map(const Point3& north, const Point3& south, std::span<const Point3> others,
                                   const Tolerance& tol) {
  const ProjectiveMap frame = pole_frame_similarity(north, south);
  std::vector<Point3> q;
  for (const auto& p : others) q.push_back(frame.apply(p));
  const Point3 n(0, 0, 1);
  if (pole_support_planes_ok(n, Point3::Zero(), q, tol.geom_tol)) return frame;

  std::vector<Vec3> from_north{Point3::Zero() - n};
  std::vector<Vec3> from_south{n};
  for (const auto& x : q) {
    from_north.push_back(x - n);
    from_south.push_back(x);
  }
  Vec3 u_north, u_south;
  if (!open_hemisphere_witness(from_north, tol.geom_tol, u_north)) {
    throw GeometryError("normalize_poles: north pole is not an exposed vertex");
  }
  if (!open_hemisphere_witness(from_south, tol.geom_tol, u_south)) {
    throw GeometryError("normalize_poles: south pole is not an exposed vertex");
  }
  // g(x) = u_s.x / u_s.n vanishes at S; h(x) = u_n.(x - n) / u_n.(-n) vanishes at N.
  const Vec3 g = u_south / u_south.dot(n);
  const double c = -u_north.dot(n);
  const Vec3 h = u_north / c;
  const double h0 = -u_north.dot(n) / c;

  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  m(0, 0) = 1.0;
  m(1, 1) = 1.0;
  m.block<3, 1>(0, 2) = g;
  m.block<3, 1>(0, 3) = g + h;
  m(3, 3) = h0;
  const ProjectiveMap full = frame.then(ProjectiveMap(m));

  std::vector<Point3> check;
  for (const auto& p : others) check.push_back(full.apply(p));
  if (!pole_support_planes_ok(full.apply(north), full.apply(south), check, tol.geom_tol)) {
    throw GeometryError("normalize_poles: no valid projective normalization found");
  }
  return full;
}

}  // namespace polyrigid
