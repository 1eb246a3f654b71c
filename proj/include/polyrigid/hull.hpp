#pragma once

#include "polyrigid/common.hpp"

#include <array>
#include <span>
#include <vector>

namespace polyrigid {

/// Triangulated convex hull of a point set. Facets are outward oriented
/// (counter-clockwise seen from outside) and index into the input span.
/// Points within tol of the current hull (after rescaling the input to unit
/// diameter) are never inserted, so points lying on hull faces or edges do
/// not become hull vertices.
struct ConvexHull {
  bool full_dimensional = false;
  std::vector<std::array<int, 3>> facets;
  std::vector<int> vertices;  // sorted
};

ConvexHull convex_hull(std::span<const Point3> points, double tol);

/// Largest pairwise distance.
double diameter(std::span<const Point3> points);

/// Unit direction u with u . d > 0 for every direction d, if one exists.
/// Uses the minimal enclosing spherical cap of the normalized directions,
/// which is determined by at most three of them. Returns false when the
/// directions do not fit into an open hemisphere with margin tol.
bool open_hemisphere_witness(std::span<const Vec3> directions, double tol, Vec3& witness);

}  // namespace polyrigid
