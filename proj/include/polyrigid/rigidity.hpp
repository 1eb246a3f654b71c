#pragma once

#include "polyrigid/common.hpp"

#include <span>
#include <string>
#include <vector>

namespace polyrigid {

class PolyhedralSurface;

enum class EdgeKind { Bar, Cable, Strut };

std::string to_string(EdgeKind k);
EdgeKind edge_kind_from_string(const std::string& s);

struct FrameworkEdge {
  int i = 0;
  int j = 0;
  EdgeKind kind = EdgeKind::Bar;

  Edge key() const { return make_edge(i, j); }
};

/// Points in 3-space joined by bars, cables and struts. Edges are stored with
/// i < j; duplicates, out-of-range indices and (relative) zero-length edges are
/// rejected.
class Framework {
 public:
  Framework(std::vector<Point3> vertices, std::vector<FrameworkEdge> edges, double geom_tol = 1e-9);

  static Framework all_bars(const PolyhedralSurface& surface);

  const std::vector<Point3>& vertices() const { return vertices_; }
  const std::vector<FrameworkEdge>& edges() const { return edges_; }
  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  int edge_index(Edge e) const;

  /// Same vertices, every edge a bar.
  Framework as_bars() const;
  Framework without_edge(int edge) const;
  Framework with_vertices(std::vector<Point3> vertices) const;

 private:
  std::vector<Point3> vertices_;
  std::vector<FrameworkEdge> edges_;
};

/// Velocity per vertex, stored flat as (x0, y0, z0, x1, ...).
struct Motion {
  Eigen::VectorXd v;

  static Motion zero(int vertex_count) { return {Eigen::VectorXd::Zero(3 * vertex_count)}; }
  int vertex_count() const { return static_cast<int>(v.size() / 3); }
  Vec3 at(int k) const { return v.segment<3>(3 * k); }
};

/// One scalar per framework edge, in framework edge order.
struct Stress {
  Eigen::VectorXd omega;
};

struct FlexSpace {
  Eigen::MatrixXd basis;  // 3n x dimension, orthonormal columns
  int dimension = 0;
  int trivial_dimension = 0;
};

/// Row {i,j} carries p_i - p_j in block i and p_j - p_i in block j.
Eigen::MatrixXd rigidity_matrix(const Framework& fw);

/// Dimension of the affine span of the points (0..3), measured at geom_tol on
/// unit-diameter coordinates.
int affine_dimension(std::span<const Point3> points, double geom_tol = 1e-9);

/// Restrictions of the rigid motions of space: orthonormal 3n x k basis with
/// k = 6 for configurations that are not collinear.
Eigen::MatrixXd trivial_motions(std::span<const Point3> points, double rank_tol = 1e-9);

FlexSpace bar_flex_space(const Framework& fw, const Tolerance& tol = {});

/// Orthonormal basis of the flexes orthogonal to the rigid motions.
Eigen::MatrixXd nontrivial_flexes(const Framework& fw, const Tolerance& tol = {});

/// rank == 3n - 6. Throws GeometryError if the configuration does not span
/// 3-space.
bool is_infinitesimally_rigid(const Framework& fw, const Tolerance& tol = {});

struct EdgeFlexReport {
  double value = 0.0;  // (p_i - p_j) . (p'_i - p'_j)
  bool satisfied = false;
};

std::vector<EdgeFlexReport> tensegrity_flex_test(const Framework& fw, const Motion& m, double slack = 1e-10);

/// Orthonormal basis of the equilibrium stresses, each flipped so that its
/// largest-magnitude entry is positive.
std::vector<Stress> equilibrium_stress_space(const Framework& fw, const Tolerance& tol = {});

/// max_i |sum_j w_ij (p_i - p_j)| / (max|w| * diameter); 0 for the zero stress.
double equilibrium_residual(const Framework& fw, const Stress& s);

/// Cables >= 0 and struts <= 0, with slack relative to max|w|.
bool is_proper(const Framework& fw, const Stress& s, double slack = 1e-12);

double stress_energy(const Framework& fw, const Stress& s, const Motion& m);

/// Stress scaled so that its largest-magnitude entry is +1.
Stress normalized_max_one(const Stress& s);

enum class ExchangeFailure { NotProper, NotEquilibrium, StressZeroOnEdge, NotRigid };

std::string to_string(ExchangeFailure f);

class ExchangePreconditionError : public std::runtime_error {
 public:
  ExchangePreconditionError(ExchangeFailure f, const std::string& msg) : std::runtime_error(msg), failure_(f) {}
  ExchangeFailure failure() const { return failure_; }

 private:
  ExchangeFailure failure_;
};

/// Rigidity verdict of the all-bars framework with removed_edge deleted.
/// Requires s proper and in equilibrium, fw rigid as bars and s nonzero on
/// the removed edge; violations throw ExchangePreconditionError.
bool exchange_rigidity_check(const Framework& fw, const Stress& s, int removed_edge, const Tolerance& tol = {});

}  // namespace polyrigid
