#pragma once

#include <Eigen/Dense>

#include <array>

namespace polyrigid {

/// Edge lengths of a tetrahedron on vertices 0..3 in the order
/// (0,1) (0,2) (0,3) (1,2) (1,3) (2,3).
using TetraLengths = std::array<double, 6>;

/// Vertex pair of edge slot e in TetraLengths order.
std::array<int, 2> tetra_edge_vertices(int e);

/// Slot of the edge joining local vertices a != b.
int tetra_edge_slot(int a, int b);

/// Slot of the edge opposite to slot e.
inline int tetra_opposite_slot(int e) { return 5 - e; }

/// Cayley-Menger determinant; equals 288 V^2 for a realizable tetrahedron.
double cayley_menger_determinant(const TetraLengths& lengths);

struct TetraFeasibility {
  bool feasible = false;
  double volume = 0.0;  // 0 when infeasible
};

/// True iff every face satisfies the strict triangle inequality and the
/// Cayley-Menger determinant is positive.
TetraFeasibility cayley_menger_feasible(const TetraLengths& lengths);

/// Interior dihedral angles at the six edges, computed from lengths alone via
/// atan2(24 V l_e, X_e) where X_e is a polynomial in the squared lengths.
/// Throws GeometryError when the lengths are not realizable.
std::array<double, 6> dihedral_angles_from_lengths(const TetraLengths& lengths);

/// J(e, m) = d(angle at edge e) / d(length of edge m).
Eigen::Matrix<double, 6, 6> dihedral_jacobian(const TetraLengths& lengths);

/// Sum over edges of l_e * d(alpha_e) along a length perturbation. Zero for a
/// Euclidean tetrahedron by the Schlafli formula.
double schlafli_residual(const TetraLengths& lengths, const std::array<double, 6>& direction);

}  // namespace polyrigid
