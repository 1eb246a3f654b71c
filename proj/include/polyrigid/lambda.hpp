#pragma once

#include "polyrigid/common.hpp"
#include "polyrigid/geometry.hpp"
#include "polyrigid/tetra.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace polyrigid {

using Tetrahedron = std::array<int, 4>;

/// A polyhedron cut into tetrahedra on its own vertices. Tetrahedron faces
/// used once form the boundary; edges on no boundary triangle are interior.
class Decomposition {
 public:
  /// Validates positive volumes (>= 1e-12 diam^3), faces shared by at most two
  /// tetrahedra lying on opposite sides, and a closed cycle of tetrahedra
  /// around every interior edge. Edges listed in declared_interior must come
  /// out interior. Throws GeometryError otherwise.
  static Decomposition from_tetrahedra(std::vector<Point3> vertices, std::vector<Tetrahedron> tetrahedra,
                                       const Tolerance& tol = {},
                                       const std::vector<Edge>& declared_interior = {});

  const std::vector<Point3>& vertices() const { return vertices_; }
  const std::vector<Tetrahedron>& tetrahedra() const { return tets_; }
  const std::vector<Edge>& interior_edges() const { return interior_; }
  const std::vector<Edge>& boundary_edges() const { return boundary_; }
  const std::vector<Face>& boundary_faces() const { return boundary_faces_; }  // outward
  int interior_count() const { return static_cast<int>(interior_.size()); }

  /// Lengths in the embedding: l0 for interior edges, l-bar for boundary edges.
  std::vector<double> interior_lengths() const;
  std::vector<double> boundary_lengths() const;

  /// Per tetrahedron and TetraLengths slot: interior edge index or -1, and
  /// boundary edge index or -1.
  const std::vector<std::array<int, 6>>& interior_slots() const { return interior_slot_; }
  const std::vector<std::array<int, 6>>& boundary_slots() const { return boundary_slot_; }

  /// Tetrahedra containing interior edge k, in cyclic order around it.
  const std::vector<int>& star(int k) const { return stars_[k]; }

  /// Boundary triangles as a closed surface.
  PolyhedralSurface boundary_surface(double geom_tol = 1e-9) const;

 private:
  std::vector<Point3> vertices_;
  std::vector<Tetrahedron> tets_;
  std::vector<Edge> interior_;
  std::vector<Edge> boundary_;
  std::vector<Face> boundary_faces_;
  std::vector<std::array<int, 6>> interior_slot_;
  std::vector<std::array<int, 6>> boundary_slot_;
  std::vector<std::vector<int>> stars_;
};

/// Cone over every face not containing the apex. Throws GeometryError listing
/// the faces the apex does not see strictly from inside.
Decomposition decompose_star(const PolyhedralSurface& surface, int apex, const Tolerance& tol = {});

/// Six edge lengths of tetrahedron t with interior edges set from l and
/// boundary edges from the embedding.
TetraLengths tetra_lengths(const Decomposition& d, int t, const std::vector<double>& l);

/// Total dihedral angle around each interior edge, from lengths only. Throws
/// GeometryError naming a tetrahedron whose lengths are not realizable.
std::vector<double> cone_angles(const Decomposition& d, const std::vector<double>& l);

struct LambdaMatrix {
  Eigen::MatrixXd matrix;  // (i, j) = d theta_i / d l_j at l0
  Eigen::VectorXd eigenvalues;  // of the symmetric part, ascending
  Eigen::VectorXd singular_values;
  double scale = 0.0;  // largest magnitude of a single tetrahedron contribution
  int rank = 0;
  double asymmetry = 0.0;  // max |L - L^T|
};

/// Analytic Jacobian of the cone angles at the embedded lengths. Throws
/// GeometryError if a tetrahedron has squared volume below 1e-10 Lmax^6.
LambdaMatrix lambda_matrix(const Decomposition& d, const Tolerance& tol = {});

/// Sum over tetrahedra and their edges of length times dihedral angle.
double mean_curvature_H(const Decomposition& d, const std::vector<double>& l);

struct LambdaRigidity {
  bool rigid = false;          // from the Jacobian
  bool rank_rigid = false;     // from the boundary bar framework
  LambdaMatrix lambda;
};

/// Rigid iff the smallest singular value exceeds rank_tol times the larger of
/// the largest singular value and the largest single-tetrahedron
/// contribution; no interior edge counts as rigid. Throws InvariantViolation
/// (with the instance) when the rigidity-matrix verdict disagrees.
LambdaRigidity rigidity_from_lambda(const Decomposition& d, const Tolerance& tol = {});

}  // namespace polyrigid
