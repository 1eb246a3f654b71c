#include "polyrigid/generators.hpp"

#include "polyrigid/hull.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace polyrigid {

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Vec3 random_unit_vector(Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  for (;;) {
    Vec3 v(g(rng), g(rng), g(rng));
    const double n = v.norm();
    if (n > 1e-12) return v / n;
  }
}

std::optional<PolyhedralSurface> hull_surface(const std::vector<Point3>& points, double tol) {
  const ConvexHull hull = convex_hull(points, tol);
  if (!hull.full_dimensional || hull.vertices.size() != points.size()) return std::nullopt;
  std::vector<Face> faces(hull.facets.begin(), hull.facets.end());
  try {
    return PolyhedralSurface(points, std::move(faces), tol);
  } catch (const GeometryError&) {
    return std::nullopt;
  }
}

std::optional<PolyhedralSurface> random_convex_surface(Rng& rng, int n, double margin) {
  std::vector<Point3> pts;
  for (int k = 0; k < n; ++k) pts.push_back(random_unit_vector(rng));
  auto surface = hull_surface(pts);
  if (!surface) return std::nullopt;
  const auto unit = normalized_unit_diameter(pts);
  for (const auto& f : surface->faces()) {
    const Vec3 nrm = (unit[f[1]] - unit[f[0]]).cross(unit[f[2]] - unit[f[0]]).normalized();
    for (int k = 0; k < n; ++k) {
      if (k == f[0] || k == f[1] || k == f[2]) continue;
      if (std::abs(nrm.dot(unit[k] - unit[f[0]])) < margin) return std::nullopt;
    }
  }
  return surface;
}

std::string to_string(SuspensionProfile p) {
  switch (p) {
    case SuspensionProfile::Convex: return "convex";
    case SuspensionProfile::Weak: return "weak";
    case SuspensionProfile::ConvexProjection: return "convex-projection";
    case SuspensionProfile::Star: return "star";
    case SuspensionProfile::Random: return "random";
  }
  return "?";
}

SuspensionProfile suspension_profile_from_string(const std::string& s) {
  if (s == "convex") return SuspensionProfile::Convex;
  if (s == "weak") return SuspensionProfile::Weak;
  if (s == "convex-projection") return SuspensionProfile::ConvexProjection;
  if (s == "star") return SuspensionProfile::Star;
  if (s == "random") return SuspensionProfile::Random;
  throw GeometryError("unknown suspension profile '" + s + "'");
}

namespace {

std::vector<double> jittered_azimuths(Rng& rng, int n, double jitter) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double step = 2.0 * std::numbers::pi / n;
  const double phase = std::uniform_real_distribution<double>(0.0, 2.0 * std::numbers::pi)(rng);
  std::vector<double> az;
  for (int k = 0; k < n; ++k) az.push_back(phase + step * (k + jitter * u(rng)));
  return az;
}

}  // namespace

SuspensionData random_suspension_data(Rng& rng, int n, SuspensionProfile profile) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto uniform = [&](double a, double b) { return a + (b - a) * unit(rng); };
  SuspensionData d;

  switch (profile) {
    case SuspensionProfile::Convex: {
      d.north = Point3(uniform(-0.1, 0.1), uniform(-0.1, 0.1), uniform(0.6, 1.5));
      d.south = Point3(uniform(-0.1, 0.1), uniform(-0.1, 0.1), -uniform(0.6, 1.5));
      for (double a : jittered_azimuths(rng, n, 0.35)) {
        d.equator.emplace_back(std::cos(a), std::sin(a), uniform(-0.01, 0.01));
      }
      break;
    }
    case SuspensionProfile::Weak: {
      d.north = Point3(0, 0, 1);
      d.south = Point3(0, 0, -1);
      for (double a : jittered_azimuths(rng, n, 0.35)) {
        const double z = uniform(-0.7, 0.7);
        const double r = std::sqrt(1.0 - z * z);
        d.equator.emplace_back(r * std::cos(a), r * std::sin(a), z);
      }
      break;
    }
    case SuspensionProfile::ConvexProjection: {
      const double ax = uniform(0.6, 1.4);
      const double by = uniform(0.6, 1.4);
      const double cx = uniform(-0.3, 0.3) * ax;
      const double cy = uniform(-0.3, 0.3) * by;
      d.north = Point3(0, 0, uniform(0.8, 1.5));
      d.south = Point3(0, 0, -uniform(0.8, 1.5));
      for (double a : jittered_azimuths(rng, n, 0.3)) {
        d.equator.emplace_back(cx + ax * std::cos(a), cy + by * std::sin(a), uniform(-0.6, 0.6));
      }
      break;
    }
    case SuspensionProfile::Star: {
      d.north = Point3(0, 0, 1);
      d.south = Point3(0, 0, -1);
      const double inner = uniform(0.3, 0.7);
      const auto az = jittered_azimuths(rng, n, 0.1);
      for (int k = 0; k < n; ++k) {
        const double r = k % 2 == 0 ? 1.0 : inner;
        d.equator.emplace_back(r * std::cos(az[k]), r * std::sin(az[k]), uniform(-0.2, 0.2));
      }
      break;
    }
    case SuspensionProfile::Random: {
      d.north = Point3(0, 0, uniform(0.5, 1.5));
      d.south = Point3(0, 0, -uniform(0.5, 1.5));
      for (double a : jittered_azimuths(rng, n, 0.4)) {
        const double r = uniform(0.3, 1.5);
        d.equator.emplace_back(r * std::cos(a), r * std::sin(a), uniform(-1.2, 1.2));
      }
      break;
    }
  }
  return d;
}

}  // namespace polyrigid
