#pragma once

#include "polyrigid/geometry.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace polyrigid {

using Rng = std::mt19937_64;

/// Per-trial seed derived from (seed, index) with splitmix64, so trials are
/// independent of execution order.
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index);

Vec3 random_unit_vector(Rng& rng);

/// Convex hull of n i.i.d. uniform points on the unit sphere, triangulated and
/// outward oriented. Returns nullopt when some point is not a hull vertex or a
/// point lies within margin of a facet plane it does not span.
std::optional<PolyhedralSurface> random_convex_surface(Rng& rng, int n, double margin = 1e-6);

/// Triangulated surface of the convex hull of the given points, or nullopt if
/// some point is not a hull vertex.
std::optional<PolyhedralSurface> hull_surface(const std::vector<Point3>& points, double tol = 1e-9);

enum class SuspensionProfile {
  Convex,           // strongly strictly convex
  Weak,             // points on a sphere, N-S decomposable, some reflex lateral edge
  ConvexProjection, // projected equator convex, heights arbitrary between poles
  Star,             // star-shaped non-convex projected equator
  Random            // random azimuths and heights
};

std::string to_string(SuspensionProfile p);
SuspensionProfile suspension_profile_from_string(const std::string& s);

struct SuspensionData {
  Point3 north;
  Point3 south;
  std::vector<Point3> equator;
};

/// One draw from the profile; callers filter with the predicates they need.
SuspensionData random_suspension_data(Rng& rng, int n, SuspensionProfile profile);

}  // namespace polyrigid
