#include "polyrigid/rigidity.hpp"

#include "polyrigid/geometry.hpp"
#include "polyrigid/hull.hpp"
#include "polyrigid/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace polyrigid {

std::string to_string(EdgeKind k) {
  switch (k) {
    case EdgeKind::Bar: return "bar";
    case EdgeKind::Cable: return "cable";
    case EdgeKind::Strut: return "strut";
  }
  return "?";
}

EdgeKind edge_kind_from_string(const std::string& s) {
  if (s == "bar") return EdgeKind::Bar;
  if (s == "cable") return EdgeKind::Cable;
  if (s == "strut") return EdgeKind::Strut;
  throw GeometryError("unknown edge kind '" + s + "'");
}

std::string to_string(ExchangeFailure f) {
  switch (f) {
    case ExchangeFailure::NotProper: return "not-proper";
    case ExchangeFailure::NotEquilibrium: return "not-equilibrium";
    case ExchangeFailure::StressZeroOnEdge: return "stress-zero-on-edge";
    case ExchangeFailure::NotRigid: return "not-rigid";
  }
  return "?";
}

Framework::Framework(std::vector<Point3> vertices, std::vector<FrameworkEdge> edges, double geom_tol)
    : vertices_(std::move(vertices)), edges_(std::move(edges)) {
  const int n = vertex_count();
  for (int k = 0; k < n; ++k) {
    if (!vertices_[k].allFinite()) throw GeometryError("vertex " + std::to_string(k) + " is not finite");
  }
  const double diam = diameter(vertices_);
  std::set<Edge> seen;
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    auto& e = edges_[k];
    if (e.i < 0 || e.j < 0 || e.i >= n || e.j >= n) {
      throw GeometryError("edge " + std::to_string(k) + " has a vertex index out of range");
    }
    if (e.i == e.j) throw GeometryError("edge " + std::to_string(k) + " is a loop");
    if (e.i > e.j) std::swap(e.i, e.j);
    if (!seen.insert(e.key()).second) throw GeometryError("duplicate edge " + to_string(e.key()));
    if ((vertices_[e.i] - vertices_[e.j]).norm() <= geom_tol * diam) {
      throw GeometryError("edge " + to_string(e.key()) + " has zero length");
    }
  }
}

Framework Framework::all_bars(const PolyhedralSurface& surface) {
  std::vector<FrameworkEdge> edges;
  for (const auto& e : surface.edges()) edges.push_back({e.i, e.j, EdgeKind::Bar});
  return Framework(surface.vertices(), std::move(edges));
}

int Framework::edge_index(Edge e) const {
  for (int k = 0; k < edge_count(); ++k) {
    if (edges_[k].key() == e) return k;
  }
  return -1;
}

Framework Framework::as_bars() const {
  auto edges = edges_;
  for (auto& e : edges) e.kind = EdgeKind::Bar;
  return Framework(vertices_, std::move(edges));
}

Framework Framework::without_edge(int edge) const {
  auto edges = edges_;
  edges.erase(edges.begin() + edge);
  return Framework(vertices_, std::move(edges));
}

Framework Framework::with_vertices(std::vector<Point3> vertices) const {
  return Framework(std::move(vertices), edges_);
}

Eigen::MatrixXd rigidity_matrix(const Framework& fw) {
  const auto& p = fw.vertices();
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(fw.edge_count(), 3 * fw.vertex_count());
  for (int k = 0; k < fw.edge_count(); ++k) {
    const auto& e = fw.edges()[k];
    const Vec3 d = p[e.i] - p[e.j];
    r.block<1, 3>(k, 3 * e.i) = d.transpose();
    r.block<1, 3>(k, 3 * e.j) = -d.transpose();
  }
  return r;
}

int affine_dimension(std::span<const Point3> points, double geom_tol) {
  if (points.empty()) return -1;
  const auto q = normalized_unit_diameter(points);
  Eigen::MatrixXd centered(q.size(), 3);
  for (std::size_t k = 0; k < q.size(); ++k) centered.row(k) = q[k].transpose();
  if (q.size() == 1) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered);
  int dim = 0;
  for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k) {
    if (svd.singularValues()(k) > geom_tol) ++dim;
  }
  return dim;
}

Eigen::MatrixXd trivial_motions(std::span<const Point3> points, double rank_tol) {
  const int n = static_cast<int>(points.size());
  if (n == 0) return Eigen::MatrixXd(0, 0);
  Point3 c = Point3::Zero();
  for (const auto& p : points) c += p;
  c /= n;
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(3 * n, 6);
  for (int k = 0; k < n; ++k) {
    const Vec3 q = points[k] - c;
    t.block<3, 3>(3 * k, 0).setIdentity();
    for (int a = 0; a < 3; ++a) t.block<3, 1>(3 * k, 3 + a) = Vec3::Unit(a).cross(q);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(t, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  int rank = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    if (s(k) > rank_tol * s(0)) ++rank;
  }
  return svd.matrixU().leftCols(rank);
}

FlexSpace bar_flex_space(const Framework& fw, const Tolerance& tol) {
  FlexSpace out;
  out.basis = null_space(rigidity_matrix(fw), tol.rank_tol);
  out.dimension = static_cast<int>(out.basis.cols());
  out.trivial_dimension = static_cast<int>(trivial_motions(fw.vertices(), tol.rank_tol).cols());
  return out;
}

Eigen::MatrixXd nontrivial_flexes(const Framework& fw, const Tolerance& tol) {
  const FlexSpace flex = bar_flex_space(fw, tol);
  const int extra = flex.dimension - flex.trivial_dimension;
  if (extra <= 0) return Eigen::MatrixXd(3 * fw.vertex_count(), 0);
  const Eigen::MatrixXd t = trivial_motions(fw.vertices(), tol.rank_tol);
  const Eigen::MatrixXd projected = flex.basis - t * (t.transpose() * flex.basis);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(projected, Eigen::ComputeThinU);
  return svd.matrixU().leftCols(extra);
}

bool is_infinitesimally_rigid(const Framework& fw, const Tolerance& tol) {
  const int n = fw.vertex_count();
  if (n < 3) throw GeometryError("is_infinitesimally_rigid: needs at least 3 vertices");
  if (affine_dimension(fw.vertices(), tol.geom_tol) < 3) {
    throw GeometryError(
        "is_infinitesimally_rigid: configuration does not span 3-space; lower-dimensional analysis is not "
        "supported");
  }
  return numerical_rank(rigidity_matrix(fw), tol.rank_tol) == 3 * n - 6;
}

std::vector<EdgeFlexReport> tensegrity_flex_test(const Framework& fw, const Motion& m, double slack) {
  if (m.vertex_count() != fw.vertex_count()) throw GeometryError("tensegrity_flex_test: motion size mismatch");
  const auto& p = fw.vertices();
  std::vector<EdgeFlexReport> out;
  for (const auto& e : fw.edges()) {
    EdgeFlexReport r;
    r.value = (p[e.i] - p[e.j]).dot(m.at(e.i) - m.at(e.j));
    switch (e.kind) {
      case EdgeKind::Bar: r.satisfied = std::abs(r.value) <= slack; break;
      case EdgeKind::Cable: r.satisfied = r.value <= slack; break;
      case EdgeKind::Strut: r.satisfied = r.value >= -slack; break;
    }
    out.push_back(r);
  }
  return out;
}

std::vector<Stress> equilibrium_stress_space(const Framework& fw, const Tolerance& tol) {
  const SvdSummary svd = analyze_matrix(rigidity_matrix(fw), tol.rank_tol);
  std::vector<Stress> out;
  for (Eigen::Index c = 0; c < svd.left_null.cols(); ++c) {
    Eigen::VectorXd w = svd.left_null.col(c);
    Eigen::Index at = 0;
    w.cwiseAbs().maxCoeff(&at);
    if (w(at) < 0.0) w = -w;
    out.push_back({w});
  }
  return out;
}

double equilibrium_residual(const Framework& fw, const Stress& s) {
  if (s.omega.size() != fw.edge_count()) throw GeometryError("stress size does not match edge count");
  const double wmax = s.omega.size() ? s.omega.cwiseAbs().maxCoeff() : 0.0;
  if (wmax == 0.0) return 0.0;
  const auto& p = fw.vertices();
  std::vector<Vec3> force(fw.vertex_count(), Vec3::Zero());
  for (int k = 0; k < fw.edge_count(); ++k) {
    const auto& e = fw.edges()[k];
    const Vec3 d = s.omega(k) * (p[e.i] - p[e.j]);
    force[e.i] += d;
    force[e.j] -= d;
  }
  double worst = 0.0;
  for (const auto& f : force) worst = std::max(worst, f.norm());
  return worst / (wmax * diameter(p));
}

bool is_proper(const Framework& fw, const Stress& s, double slack) {
  if (s.omega.size() != fw.edge_count()) throw GeometryError("stress size does not match edge count");
  const double wmax = s.omega.size() ? s.omega.cwiseAbs().maxCoeff() : 0.0;
  const double eps = slack * std::max(wmax, 1e-300);
  for (int k = 0; k < fw.edge_count(); ++k) {
    const double w = s.omega(k);
    switch (fw.edges()[k].kind) {
      case EdgeKind::Bar: break;
      case EdgeKind::Cable:
        if (w < -eps) return false;
        break;
      case EdgeKind::Strut:
        if (w > eps) return false;
        break;
    }
  }
  return true;
}

double stress_energy(const Framework& fw, const Stress& s, const Motion& m) {
  if (s.omega.size() != fw.edge_count() || m.vertex_count() != fw.vertex_count()) {
    throw GeometryError("stress_energy: size mismatch");
  }
  const auto& p = fw.vertices();
  double total = 0.0;
  for (int k = 0; k < fw.edge_count(); ++k) {
    const auto& e = fw.edges()[k];
    total += s.omega(k) * (p[e.i] - p[e.j]).dot(m.at(e.i) - m.at(e.j));
  }
  return total;
}

Stress normalized_max_one(const Stress& s) {
  if (s.omega.size() == 0) return s;
  Eigen::Index at = 0;
  s.omega.cwiseAbs().maxCoeff(&at);
  if (s.omega(at) == 0.0) return s;
  return {s.omega / s.omega(at)};
}

bool exchange_rigidity_check(const Framework& fw, const Stress& s, int removed_edge, const Tolerance& tol) {
  if (removed_edge < 0 || removed_edge >= fw.edge_count()) throw GeometryError("removed edge out of range");
  if (equilibrium_residual(fw, s) > 1e-9) {
    throw ExchangePreconditionError(ExchangeFailure::NotEquilibrium, "stress is not in equilibrium");
  }
  if (!is_proper(fw, s)) throw ExchangePreconditionError(ExchangeFailure::NotProper, "stress is not proper");
  const double wmax = s.omega.cwiseAbs().maxCoeff();
  if (!(std::abs(s.omega(removed_edge)) > tol.rank_tol * wmax)) {
    throw ExchangePreconditionError(ExchangeFailure::StressZeroOnEdge,
                                    "stress vanishes on edge " + to_string(fw.edges()[removed_edge].key()));
  }
  const Framework bars = fw.as_bars();
  if (!is_infinitesimally_rigid(bars, tol)) {
    throw ExchangePreconditionError(ExchangeFailure::NotRigid, "framework is not infinitesimally rigid as bars");
  }
  return is_infinitesimally_rigid(bars.without_edge(removed_edge), tol);
}

}  // namespace polyrigid
