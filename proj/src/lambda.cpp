#include "polyrigid/lambda.hpp"

#include "polyrigid/hull.hpp"
#include "polyrigid/rigidity.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace polyrigid {

namespace {

double orientation(const std::vector<Point3>& p, int a, int b, int c, int d) {
  return (p[b] - p[a]).cross(p[c] - p[a]).dot(p[d] - p[a]);
}

std::string tet_name(int t, const Tetrahedron& q) {
  return "tetrahedron " + std::to_string(t) + " (" + std::to_string(q[0]) + ", " + std::to_string(q[1]) + ", " +
         std::to_string(q[2]) + ", " + std::to_string(q[3]) + ")";
}

int find_edge(const std::vector<Edge>& sorted, Edge e) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), e);
  return it != sorted.end() && *it == e ? static_cast<int>(it - sorted.begin()) : -1;
}

}  // namespace

Decomposition Decomposition::from_tetrahedra(std::vector<Point3> vertices, std::vector<Tetrahedron> tetrahedra,
                                             const Tolerance& tol, const std::vector<Edge>& declared_interior) {
  Decomposition d;
  d.vertices_ = std::move(vertices);
  d.tets_ = std::move(tetrahedra);
  const int nv = static_cast<int>(d.vertices_.size());
  const auto& p = d.vertices_;
  if (d.tets_.empty()) throw GeometryError("decomposition has no tetrahedra");
  const double diam = diameter(p);
  const double vol_tol = 1e-12 * diam * diam * diam;

  std::vector<bool> used(nv, false);
  for (std::size_t t = 0; t < d.tets_.size(); ++t) {
    auto& q = d.tets_[t];
    for (int v : q) {
      if (v < 0 || v >= nv) throw GeometryError(tet_name(static_cast<int>(t), q) + " has an index out of range");
      used[v] = true;
    }
    std::set<int> distinct(q.begin(), q.end());
    if (distinct.size() != 4) throw GeometryError(tet_name(static_cast<int>(t), q) + " repeats a vertex");
    const double vol = orientation(p, q[0], q[1], q[2], q[3]) / 6.0;
    if (std::abs(vol) < vol_tol) throw GeometryError(tet_name(static_cast<int>(t), q) + " is degenerate");
    if (vol < 0.0) std::swap(q[2], q[3]);
  }
  for (int v = 0; v < nv; ++v) {
    if (!used[v]) throw GeometryError("vertex " + std::to_string(v) + " belongs to no tetrahedron");
  }

  // Faces: sorted triple -> (tet, opposite vertex, outward face).
  struct FaceUse {
    int tet;
    int opposite;
    Face outward;
  };
  std::map<std::array<int, 3>, std::vector<FaceUse>> faces;
  for (int t = 0; t < static_cast<int>(d.tets_.size()); ++t) {
    const auto& q = d.tets_[t];
    const std::array<Face, 4> out{Face{q[1], q[2], q[3]}, Face{q[0], q[3], q[2]}, Face{q[0], q[1], q[3]},
                                  Face{q[0], q[2], q[1]}};
    for (int k = 0; k < 4; ++k) {
      std::array<int, 3> key = out[k];
      std::sort(key.begin(), key.end());
      faces[key].push_back({t, q[k], out[k]});
    }
  }
  std::set<Edge> boundary;
  for (const auto& [key, uses] : faces) {
    if (uses.size() > 2) throw GeometryError("a face is shared by more than two tetrahedra");
    if (uses.size() == 2) {
      const double s0 = orientation(p, key[0], key[1], key[2], uses[0].opposite);
      const double s1 = orientation(p, key[0], key[1], key[2], uses[1].opposite);
      const double eps = tol.geom_tol * diam * diam * diam;
      if ((s0 > 0.0) == (s1 > 0.0) || std::abs(s0) <= eps || std::abs(s1) <= eps) {
        throw GeometryError(tet_name(uses[0].tet, d.tets_[uses[0].tet]) + " and " +
                            tet_name(uses[1].tet, d.tets_[uses[1].tet]) + " overlap across a shared face");
      }
      continue;
    }
    d.boundary_faces_.push_back(uses[0].outward);
    boundary.insert(make_edge(key[0], key[1]));
    boundary.insert(make_edge(key[1], key[2]));
    boundary.insert(make_edge(key[0], key[2]));
  }
  d.boundary_.assign(boundary.begin(), boundary.end());

  std::set<Edge> interior;
  for (const auto& q : d.tets_) {
    for (int s = 0; s < 6; ++s) {
      const auto [a, b] = tetra_edge_vertices(s);
      const Edge e = make_edge(q[a], q[b]);
      if (!boundary.contains(e)) interior.insert(e);
    }
  }
  d.interior_.assign(interior.begin(), interior.end());
  for (const auto& e : declared_interior) {
    if (!interior.contains(e)) {
      throw GeometryError("edge " + to_string(e) + " is not interior: the tetrahedra around it do not close up");
    }
  }

  for (const auto& q : d.tets_) {
    std::array<int, 6> in{}, bd{};
    for (int s = 0; s < 6; ++s) {
      const auto [a, b] = tetra_edge_vertices(s);
      const Edge e = make_edge(q[a], q[b]);
      in[s] = find_edge(d.interior_, e);
      bd[s] = find_edge(d.boundary_, e);
    }
    d.interior_slot_.push_back(in);
    d.boundary_slot_.push_back(bd);
  }

  // Each interior edge needs a single closed cycle of tetrahedra around it.
  for (const auto& e : d.interior_) {
    std::vector<int> tets;
    std::map<int, std::vector<int>> link;  // link vertex -> tets through it
    for (int t = 0; t < static_cast<int>(d.tets_.size()); ++t) {
      const auto& q = d.tets_[t];
      if (std::find(q.begin(), q.end(), e.i) == q.end() || std::find(q.begin(), q.end(), e.j) == q.end()) continue;
      tets.push_back(t);
      for (int v : q) {
        if (v != e.i && v != e.j) link[v].push_back(t);
      }
    }
    for (const auto& [v, through] : link) {
      if (through.size() != 2) {
        throw GeometryError("the tetrahedra around edge " + to_string(e) + " do not close up at vertex " +
                            std::to_string(v));
      }
    }
    // Tetrahedra are edges of the link graph; walk its cycle through tets[0].
    auto link_pair = [&](int t) {
      std::vector<int> o;
      for (int v : d.tets_[t]) {
        if (v != e.i && v != e.j) o.push_back(v);
      }
      return o;
    };
    std::vector<int> order{tets[0]};
    int cur = tets[0];
    int at = link_pair(cur)[1];
    for (;;) {
      const auto& th = link[at];
      const int next = th[0] == cur ? th[1] : th[0];
      if (next == tets[0]) break;
      order.push_back(next);
      const auto pair = link_pair(next);
      at = pair[0] == at ? pair[1] : pair[0];
      cur = next;
      if (order.size() > tets.size()) break;
    }
    if (order.size() != tets.size()) {
      throw GeometryError("the tetrahedra around edge " + to_string(e) + " form more than one cycle");
    }
    d.stars_.push_back(order);
  }
  return d;
}

std::vector<double> Decomposition::interior_lengths() const {
  std::vector<double> l;
  for (const auto& e : interior_) l.push_back((vertices_[e.i] - vertices_[e.j]).norm());
  return l;
}

std::vector<double> Decomposition::boundary_lengths() const {
  std::vector<double> l;
  for (const auto& e : boundary_) l.push_back((vertices_[e.i] - vertices_[e.j]).norm());
  return l;
}

PolyhedralSurface Decomposition::boundary_surface(double geom_tol) const {
  return PolyhedralSurface(vertices_, boundary_faces_, geom_tol);
}

Decomposition decompose_star(const PolyhedralSurface& surface, int apex, const Tolerance& tol) {
  if (apex < 0 || apex >= surface.vertex_count()) throw GeometryError("decompose_star: apex out of range");
  const auto unit = normalized_unit_diameter(surface.vertices());
  std::vector<Tetrahedron> tets;
  std::vector<int> blocked;
  for (int f = 0; f < surface.face_count(); ++f) {
    const auto& fc = surface.faces()[f];
    if (std::find(fc.begin(), fc.end(), apex) != fc.end()) continue;
    const Vec3 n = (unit[fc[1]] - unit[fc[0]]).cross(unit[fc[2]] - unit[fc[0]]);
    const double h = n.normalized().dot(unit[apex] - unit[fc[0]]);
    if (!(h < -tol.geom_tol)) {
      blocked.push_back(f);
      continue;
    }
    tets.push_back({apex, fc[0], fc[1], fc[2]});
  }
  if (!blocked.empty()) {
    std::string list;
    for (int f : blocked) {
      const auto& fc = surface.faces()[f];
      list += " (" + std::to_string(fc[0]) + ", " + std::to_string(fc[1]) + ", " + std::to_string(fc[2]) + ")";
    }
    throw GeometryError("decompose_star: surface is not star-shaped from vertex " + std::to_string(apex) +
                        "; blocked faces:" + list);
  }
  Decomposition d = Decomposition::from_tetrahedra(surface.vertices(), std::move(tets), tol);
  if (static_cast<int>(d.boundary_faces().size()) != surface.face_count()) {
    throw GeometryError("decompose_star: cone boundary does not match the surface");
  }
  return d;
}

TetraLengths tetra_lengths(const Decomposition& d, int t, const std::vector<double>& l) {
  if (static_cast<int>(l.size()) != d.interior_count()) throw GeometryError("length vector size mismatch");
  const auto& q = d.tetrahedra()[t];
  TetraLengths out{};
  for (int s = 0; s < 6; ++s) {
    const int k = d.interior_slots()[t][s];
    if (k >= 0) {
      out[s] = l[k];
    } else {
      const auto [a, b] = tetra_edge_vertices(s);
      out[s] = (d.vertices()[q[a]] - d.vertices()[q[b]]).norm();
    }
  }
  return out;
}

namespace {

std::array<double, 6> checked_angles(const Decomposition& d, int t, const TetraLengths& len) {
  if (!cayley_menger_feasible(len).feasible) {
    throw GeometryError("lengths leave the domain: " + tet_name(t, d.tetrahedra()[t]) + " is not realizable");
  }
  return dihedral_angles_from_lengths(len);
}

}  // namespace

std::vector<double> cone_angles(const Decomposition& d, const std::vector<double>& l) {
  std::vector<double> theta(d.interior_count(), 0.0);
  for (int t = 0; t < static_cast<int>(d.tetrahedra().size()); ++t) {
    const auto alpha = checked_angles(d, t, tetra_lengths(d, t, l));
    for (int s = 0; s < 6; ++s) {
      const int k = d.interior_slots()[t][s];
      if (k >= 0) theta[k] += alpha[s];
    }
  }
  return theta;
}

double mean_curvature_H(const Decomposition& d, const std::vector<double>& l) {
  double h = 0.0;
  for (int t = 0; t < static_cast<int>(d.tetrahedra().size()); ++t) {
    const auto len = tetra_lengths(d, t, l);
    const auto alpha = checked_angles(d, t, len);
    for (int s = 0; s < 6; ++s) h += len[s] * alpha[s];
  }
  return h;
}

LambdaMatrix lambda_matrix(const Decomposition& d, const Tolerance& tol) {
  const int r = d.interior_count();
  LambdaMatrix out;
  out.matrix = Eigen::MatrixXd::Zero(r, r);
  const auto l0 = d.interior_lengths();
  for (int t = 0; t < static_cast<int>(d.tetrahedra().size()); ++t) {
    const auto len = tetra_lengths(d, t, l0);
    const double lmax = *std::max_element(len.begin(), len.end());
    const double v2 = cayley_menger_determinant(len) / 288.0;
    if (!(v2 >= 1e-10 * std::pow(lmax, 6))) {
      throw GeometryError("lambda_matrix: " + tet_name(t, d.tetrahedra()[t]) +
                          " is too close to degenerate for a reliable Jacobian");
    }
    const auto jac = dihedral_jacobian(len);
    const auto& slots = d.interior_slots()[t];
    Eigen::MatrixXd contrib = Eigen::MatrixXd::Zero(r, r);
    for (int s = 0; s < 6; ++s) {
      if (slots[s] < 0) continue;
      for (int m = 0; m < 6; ++m) {
        if (slots[m] >= 0) contrib(slots[s], slots[m]) += jac(s, m);
      }
    }
    if (r > 0) out.scale = std::max(out.scale, contrib.cwiseAbs().maxCoeff());
    out.matrix += contrib;
  }
  if (r == 0) return out;
  out.asymmetry = (out.matrix - out.matrix.transpose()).cwiseAbs().maxCoeff();
  const Eigen::MatrixXd sym = 0.5 * (out.matrix + out.matrix.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym, Eigen::EigenvaluesOnly);
  out.eigenvalues = eig.eigenvalues();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(out.matrix);
  out.singular_values = svd.singularValues();
  const double ref = std::max(out.singular_values(0), out.scale);
  for (Eigen::Index k = 0; k < out.singular_values.size(); ++k) {
    if (out.singular_values(k) > tol.rank_tol * ref) ++out.rank;
  }
  return out;
}

LambdaRigidity rigidity_from_lambda(const Decomposition& d, const Tolerance& tol) {
  LambdaRigidity out;
  out.lambda = lambda_matrix(d, tol);
  out.rigid = out.lambda.rank == d.interior_count();
  std::vector<FrameworkEdge> bars;
  for (const auto& e : d.boundary_edges()) bars.push_back({e.i, e.j, EdgeKind::Bar});
  out.rank_rigid = is_infinitesimally_rigid(Framework(d.vertices(), std::move(bars)), tol);
  if (out.rigid != out.rank_rigid) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "rigidity_from_lambda: Jacobian says " << (out.rigid ? "rigid" : "flexible")
        << " but the rigidity matrix says " << (out.rank_rigid ? "rigid" : "flexible") << "\nvertices:";
    for (const auto& v : d.vertices()) msg << " [" << v.x() << ", " << v.y() << ", " << v.z() << "]";
    msg << "\ntetrahedra:";
    for (const auto& q : d.tetrahedra()) msg << " [" << q[0] << ", " << q[1] << ", " << q[2] << ", " << q[3] << "]";
    msg << "\nsingular values:";
    for (Eigen::Index k = 0; k < out.lambda.singular_values.size(); ++k) msg << " " << out.lambda.singular_values(k);
    throw InvariantViolation(msg.str());
  }
  return out;
}

}  // namespace polyrigid
