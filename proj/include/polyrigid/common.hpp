#pragma once

#include <Eigen/Dense>

#include <compare>
#include <stdexcept>
#include <string>

namespace polyrigid {

using Point3 = Eigen::Vector3d;
using Vec3 = Eigen::Vector3d;

/// Invalid or degenerate geometric input.
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A proven identity failed numerically. Indicates a bug or a tolerance
/// problem rather than bad input; the CLI maps it to exit code 2.
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical cutoffs. Geometry is rescaled to unit diameter before any
/// predicate uses geom_tol, so both values are dimensionless.
struct Tolerance {
  double rank_tol = 1e-9;  // relative singular-value cutoff
  double geom_tol = 1e-9;  // coincidence / coplanarity cutoff

  void validate() const;
};

/// Undirected edge with i < j.
struct Edge {
  int i = 0;
  int j = 0;

  auto operator<=>(const Edge&) const = default;
};

inline Edge make_edge(int a, int b) { return a < b ? Edge{a, b} : Edge{b, a}; }

std::string to_string(const Edge& e);

}  // namespace polyrigid
