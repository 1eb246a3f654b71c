#pragma once

#include "polyrigid/common.hpp"
#include "polyrigid/tetra.hpp"

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace polyrigid {

using Face = std::array<int, 3>;

/// Closed, connected, consistently oriented triangulated sphere.
///
/// The constructor validates the combinatorics (every edge on exactly two
/// faces with opposite orientations, manifold vertex stars, v - e + f = 2, no
/// repeated index in a face, no coincident vertices) and flips all faces if
/// the enclosed signed volume is negative, so faces are always outward.
class PolyhedralSurface {
 public:
  PolyhedralSurface(std::vector<Point3> vertices, std::vector<Face> faces, double geom_tol = 1e-9);

  const std::vector<Point3>& vertices() const { return vertices_; }
  const std::vector<Face>& faces() const { return faces_; }
  const std::vector<Edge>& edges() const { return edges_; }

  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  int face_count() const { return static_cast<int>(faces_.size()); }

  /// Index into edges(), or -1.
  int edge_index(Edge e) const;
  bool has_edge(int a, int b) const { return edge_index(make_edge(a, b)) >= 0; }

  /// Faces on the edge: first holds the directed edge i->j, second j->i.
  std::array<int, 2> edge_faces(int edge) const { return edge_faces_[edge]; }

  /// Vertex of the face opposite to the edge.
  int opposite_vertex(int face, Edge e) const;

  /// Neighbours of v in counter-clockwise order seen from outside.
  const std::vector<int>& ring(int v) const { return rings_[v]; }

  double signed_volume() const;

 private:
  std::vector<Point3> vertices_;
  std::vector<Face> faces_;
  std::vector<Edge> edges_;
  std::vector<std::array<int, 2>> edge_faces_;
  std::vector<std::vector<int>> rings_;
};

/// Rescale to unit diameter around the centroid.
std::vector<Point3> normalized_unit_diameter(std::span<const Point3> points);

enum class ConvexityClass { StronglyStrictlyConvex, WeaklyStrictlyConvex, NotWeaklyConvex };

std::string to_string(ConvexityClass c);

struct ConvexityReport {
  ConvexityClass classification = ConvexityClass::NotWeaklyConvex;
  std::vector<bool> vertex_exposed;     // per vertex
  std::vector<bool> edge_exposed;       // per surface edge
  std::vector<bool> edge_non_convex;    // per surface edge: dihedral > pi
  std::vector<double> dihedral;         // per surface edge
  int non_convex_edge_count = 0;
  std::string diagnostic;
};

/// Vertices must be exposed points of the hull (vertices lying on hull edges
/// or faces are not). Strong convexity additionally needs every surface edge
/// to admit a support plane touching exactly that edge.
ConvexityReport classify_convexity(const PolyhedralSurface& surface, const Tolerance& tol = {});

/// Interior dihedral angle in [0, 2*pi) at a surface edge, measured inside
/// the solid. Throws on a degenerate face.
double dihedral_angle(const PolyhedralSurface& surface, int edge);
double dihedral_angle(const PolyhedralSurface& surface, Edge e);

/// The interior dihedral angle at edge (a, b) between triangles (a, b, c) and
/// (b, a, d), both outward oriented.
double dihedral_angle(const Point3& a, const Point3& b, const Point3& c, const Point3& d);

/// First-order variation of that angle when the four points move with the
/// given velocities.
double dihedral_angle_rate(const Point3& a, const Point3& b, const Point3& c, const Point3& d,
                           const Vec3& va, const Vec3& vb, const Vec3& vc, const Vec3& vd);

/// Link of a vertex on the unit sphere. Side lengths equal the face angles at
/// the vertex; angles equal the dihedral angles of the incident edges.
struct SphericalPolygon {
  std::vector<Vec3> vertices;
  std::vector<double> angles;
  std::vector<double> side_lengths;  // side k joins vertices k and k+1
  std::vector<int> neighbor_ids;     // surface vertex behind each link vertex
  std::optional<Vec3> hemisphere_witness;
};

SphericalPolygon vertex_link(const PolyhedralSurface& surface, int vertex, const Tolerance& tol = {});

/// Sum of theta'_k p_k; vanishes exactly for realizable angle variations.
Vec3 spherical_polygon_relation_residual(const SphericalPolygon& link,
                                         std::span<const double> angle_variations);

/// Projective map acting on row vectors [x y z 1] * M.
class ProjectiveMap {
 public:
  ProjectiveMap();
  explicit ProjectiveMap(const Eigen::Matrix4d& m);

  static ProjectiveMap identity() { return ProjectiveMap(); }

  const Eigen::Matrix4d& matrix() const { return m_; }
  bool is_affine(double tol = 1e-12) const;

  /// Homogeneous weight of a point; the image is finite when it is nonzero.
  double weight(const Point3& p) const;
  Point3 apply(const Point3& p) const;

  ProjectiveMap then(const ProjectiveMap& next) const;

 private:
  Eigen::Matrix4d m_;
};

/// Maps every point; throws GeometryError naming the first vertex whose
/// weight is below geom_tol (relative to the largest weight) or whose weight
/// has the wrong sign.
std::vector<Point3> apply_projective(const ProjectiveMap& map, std::span<const Point3> points,
                                     double geom_tol = 1e-9);
PolyhedralSurface apply_projective(const ProjectiveMap& map, const PolyhedralSurface& surface,
                                   double geom_tol = 1e-9);

/// Similarity taking south to the origin and north to (0, 0, 1).
ProjectiveMap pole_frame_similarity(const Point3& north, const Point3& south);

/// Projective map with south -> origin, north -> (0, 0, 1) and every other
/// point strictly between the planes z = 0 and z = 1, fixing the N-S line
/// pointwise. Uses the similarity alone when it already suffices. Throws if a
/// pole is not an exposed point of the set.
ProjectiveMap pole_normalizing_map(const Point3& north, const Point3& south,
                                   std::span<const Point3> others, const Tolerance& tol = {});

/// Checks that z = 0 and z = 1 are support planes touching only S and N.
bool pole_support_planes_ok(const Point3& north, const Point3& south, std::span<const Point3> others,
                            double tol = 1e-12);

}  // namespace polyrigid
