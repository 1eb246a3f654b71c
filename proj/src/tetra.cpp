#include "polyrigid/tetra.hpp"

#include "polyrigid/common.hpp"

#include <cmath>

namespace polyrigid {

namespace {

constexpr std::array<std::array<int, 2>, 6> kEdges = {{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

Eigen::Matrix<double, 5, 5> cm_matrix(const std::array<double, 6>& q) {
  Eigen::Matrix<double, 5, 5> m = Eigen::Matrix<double, 5, 5>::Zero();
  for (int a = 1; a < 5; ++a) m(0, a) = m(a, 0) = 1.0;
  for (int e = 0; e < 6; ++e) {
    const int a = kEdges[e][0] + 1;
    const int b = kEdges[e][1] + 1;
    m(a, b) = m(b, a) = q[e];
  }
  return m;
}

// Cofactor (r, c) of a 5x5 matrix.
double cofactor(const Eigen::Matrix<double, 5, 5>& m, int r, int c) {
  Eigen::Matrix4d minor;
  for (int a = 0, ra = 0; a < 5; ++a) {
    if (a == r) continue;
    for (int b = 0, cb = 0; b < 5; ++b) {
      if (b == c) continue;
      minor(ra, cb) = m(a, b);
      ++cb;
    }
    ++ra;
  }
  return ((r + c) % 2 == 0 ? 1.0 : -1.0) * minor.determinant();
}

std::array<double, 6> squared(const TetraLengths& l) {
  std::array<double, 6> q;
  for (int e = 0; e < 6; ++e) q[e] = l[e] * l[e];
  return q;
}

bool triangle_ok(double a, double b, double c) {
  return a + b > c && a + c > b && b + c > a;
}

// Local roles for edge slot e = (i, j) with remaining vertices k < l.
struct EdgeRoles {
  int e, ik, il, jk, jl, kl;
};

EdgeRoles roles(int e) {
  const int i = kEdges[e][0];
  const int j = kEdges[e][1];
  int k = -1, l = -1;
  for (int v = 0; v < 4; ++v) {
    if (v == i || v == j) continue;
    (k < 0 ? k : l) = v;
  }
  return {e, tetra_edge_slot(i, k), tetra_edge_slot(i, l), tetra_edge_slot(j, k),
          tetra_edge_slot(j, l), tetra_edge_slot(k, l)};
}

}  // namespace

std::array<int, 2> tetra_edge_vertices(int e) { return kEdges.at(e); }

int tetra_edge_slot(int a, int b) {
  if (a > b) std::swap(a, b);
  for (int e = 0; e < 6; ++e) {
    if (kEdges[e][0] == a && kEdges[e][1] == b) return e;
  }
  throw GeometryError("tetra_edge_slot: invalid vertex pair");
}

double cayley_menger_determinant(const TetraLengths& lengths) {
  return cm_matrix(squared(lengths)).determinant();
}

TetraFeasibility cayley_menger_feasible(const TetraLengths& l) {
  TetraFeasibility out;
  for (double x : l) {
    if (!(x > 0.0) || !std::isfinite(x)) return out;
  }
  // faces (0,1,2) (0,1,3) (0,2,3) (1,2,3)
  const bool faces = triangle_ok(l[0], l[1], l[3]) && triangle_ok(l[0], l[2], l[4]) &&
                     triangle_ok(l[1], l[2], l[5]) && triangle_ok(l[3], l[4], l[5]);
  if (!faces) return out;
  const double d = cayley_menger_determinant(l);
  if (!(d > 0.0)) return out;
  out.feasible = true;
  out.volume = std::sqrt(d / 288.0);
  return out;
}

std::array<double, 6> dihedral_angles_from_lengths(const TetraLengths& lengths) {
  const auto q = squared(lengths);
  const double d = cm_matrix(q).determinant();
  if (!(d > 0.0)) throw GeometryError("dihedral_angles_from_lengths: lengths are not realizable");
  std::array<double, 6> out;
  for (int e = 0; e < 6; ++e) {
    const EdgeRoles r = roles(e);
    const double p = q[r.ik] + q[r.il] - q[r.kl];
    const double a = q[r.ik] - q[r.jk] + q[e];
    const double b = q[r.il] - q[r.jl] + q[e];
    const double x = 2.0 * q[e] * p - a * b;
    const double y = std::sqrt(2.0 * q[e] * d);
    out[e] = std::atan2(y, x);
  }
  return out;
}

Eigen::Matrix<double, 6, 6> dihedral_jacobian(const TetraLengths& lengths) {
  const auto q = squared(lengths);
  const auto m = cm_matrix(q);
  const double d = m.determinant();
  if (!(d > 0.0)) throw GeometryError("dihedral_jacobian: lengths are not realizable");

  // dD/dq_s = 2 * cofactor at the off-diagonal position of slot s.
  std::array<double, 6> dd;
  for (int s = 0; s < 6; ++s) {
    dd[s] = 2.0 * cofactor(m, kEdges[s][0] + 1, kEdges[s][1] + 1);
  }

  Eigen::Matrix<double, 6, 6> jac = Eigen::Matrix<double, 6, 6>::Zero();
  for (int e = 0; e < 6; ++e) {
    const EdgeRoles r = roles(e);
    const double p = q[r.ik] + q[r.il] - q[r.kl];
    const double a = q[r.ik] - q[r.jk] + q[e];
    const double b = q[r.il] - q[r.jl] + q[e];
    const double x = 2.0 * q[e] * p - a * b;
    const double y = std::sqrt(2.0 * q[e] * d);

    std::array<double, 6> dx{};
    dx[e] = 2.0 * p - a - b;
    dx[r.ik] = 2.0 * q[e] - b;
    dx[r.il] = 2.0 * q[e] - a;
    dx[r.kl] = -2.0 * q[e];
    dx[r.jk] = b;
    dx[r.jl] = a;

    const double denom = x * x + y * y;
    for (int s = 0; s < 6; ++s) {
      const double dy = (q[e] * dd[s] + (s == e ? d : 0.0)) / y;
      const double dalpha_dq = (x * dy - y * dx[s]) / denom;
      jac(e, s) = 2.0 * lengths[s] * dalpha_dq;
    }
  }
  return jac;
}

double schlafli_residual(const TetraLengths& lengths, const std::array<double, 6>& direction) {
  if (!cayley_menger_feasible(lengths).feasible) {
    throw GeometryError("schlafli_residual: lengths are not realizable");
  }
  const auto jac = dihedral_jacobian(lengths);
  Eigen::Matrix<double, 6, 1> dir;
  Eigen::Matrix<double, 6, 1> len;
  for (int e = 0; e < 6; ++e) {
    dir(e) = direction[e];
    len(e) = lengths[e];
  }
  return len.dot(jac * dir);
}

}  // namespace polyrigid
