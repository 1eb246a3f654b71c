#include "polyrigid/cauchy.hpp"
#include "polyrigid/lambda.hpp"
#include "polyrigid/rigidity.hpp"
#include "polyrigid/suspension.hpp"
#include "polyrigid/tetra.hpp"
#include "shapes.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <optional>

using namespace polyrigid;

namespace {

const double kPi = std::numbers::pi;

Decomposition octahedron_star() { return decompose_star(shapes::octahedron(), 0); }

// Central differences of the cone angles, Richardson-extrapolated over steps
// h and h / 2 so thin tetrahedra do not dominate the truncation error.
Eigen::MatrixXd fd_jacobian(const Decomposition& d, double h = 1e-6) {
  const auto l0 = d.interior_lengths();
  const int r = d.interior_count();
  auto central = [&](double step) {
    Eigen::MatrixXd j(r, r);
    for (int m = 0; m < r; ++m) {
      auto lp = l0, lm = l0;
      lp[m] += step;
      lm[m] -= step;
      const auto tp = cone_angles(d, lp), tm = cone_angles(d, lm);
      for (int k = 0; k < r; ++k) j(k, m) = (tp[k] - tm[k]) / (2 * step);
    }
    return j;
  };
  return (4.0 * central(h / 2) - central(h)) / 3.0;
}

// Star decompositions of random convex hulls, apex = vertex 0.
std::vector<Decomposition> random_star_decompositions(int count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Decomposition> out;
  while (static_cast<int>(out.size()) < count) {
    const auto s = random_convex_surface(rng, 7 + static_cast<int>(out.size() % 6));
    if (!s) continue;
    out.push_back(decompose_star(*s, 0));
  }
  return out;
}

Suspension star_root() {
  std::vector<Point3> eq;
  for (int k = 0; k < 6; ++k) {
    const double r = (k % 2) ? 0.2 : 1.0;
    eq.emplace_back(r * std::cos(k * kPi / 3), r * std::sin(k * kPi / 3), 0.5);
  }
  return lambda_root_on_height(build_suspension({0, 0, 1}, {0, 0, 0}, eq), 1, 0.05, 0.5);
}

}  // namespace

TEST(Decomposition, OctahedronFromPole) {
  const Decomposition d = octahedron_star();
  EXPECT_EQ(d.tetrahedra().size(), 4u);
  ASSERT_EQ(d.interior_count(), 1);
  EXPECT_EQ(d.interior_edges()[0], make_edge(0, 1));
  EXPECT_EQ(d.boundary_edges().size(), 12u);
  EXPECT_EQ(d.boundary_faces().size(), 8u);
  EXPECT_EQ(d.star(0).size(), 4u);
  EXPECT_EQ(d.boundary_surface().edge_count(), 12);
}

TEST(Decomposition, RejectsBadInput) {
  const auto pts = shapes::octahedron_points();
  // Flat tetrahedron.
  EXPECT_THROW(Decomposition::from_tetrahedra(pts, {{2, 3, 4, 5}}), GeometryError);
  // Two overlapping tetrahedra on the same side of their shared face.
  const std::vector<Point3> five{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0.2, 0.2, 0.5}};
  EXPECT_THROW(Decomposition::from_tetrahedra(five, {{0, 1, 2, 3}, {0, 1, 2, 4}}), GeometryError);
  // Unused vertex.
  EXPECT_THROW(Decomposition::from_tetrahedra(five, {{0, 1, 2, 3}}), GeometryError);
  // A declared interior edge that is not interior.
  EXPECT_THROW(Decomposition::from_tetrahedra(pts, {{0, 1, 3, 4}, {0, 1, 4, 5}, {0, 1, 5, 2}}, {}, {make_edge(0, 1)}),
               GeometryError);
}

TEST(Decomposition, NegativeOrientationFixed) {
  const Decomposition d = Decomposition::from_tetrahedra(shapes::regular_tetrahedron_points(), {{0, 2, 1, 3}});
  const auto& t = d.tetrahedra()[0];
  const auto& p = d.vertices();
  EXPECT_GT((p[t[1]] - p[t[0]]).cross(p[t[2]] - p[t[0]]).dot(p[t[3]] - p[t[0]]), 0.0);
}

TEST(DecomposeStar, NotStarShaped) {
  std::vector<Point3> eq;
  for (int k = 0; k < 6; ++k) {
    const double r = (k % 2) ? 0.2 : 1.0;
    eq.emplace_back(r * std::cos(k * kPi / 3), r * std::sin(k * kPi / 3), 0.5);
  }
  const Suspension star = build_suspension({0, 0, 1}, {0, 0, 0}, eq);
  try {
    decompose_star(star.surface(), Suspension::equator_vertex(0));
    FAIL() << "expected GeometryError";
  } catch (const GeometryError& e) {
    EXPECT_NE(std::string(e.what()).find("face"), std::string::npos);
  }
}

TEST(DecomposeStar, PairDentedHull) {
  Rng rng(6);
  const auto pd = random_adjacent_pair_dent(shapes::icosahedron(), rng);
  ASSERT_TRUE(pd.has_value());
  // Some vertex sees every face it is not on.
  std::optional<Decomposition> star;
  for (int v = 0; v < pd->surface.vertex_count() && !star; ++v) {
    try {
      star = decompose_star(pd->surface, v);
    } catch (const GeometryError&) {
    }
  }
  ASSERT_TRUE(star.has_value());
  const Decomposition& d = *star;
  EXPECT_EQ(d.boundary_faces().size(), static_cast<std::size_t>(pd->surface.face_count()));
  EXPECT_GT(d.interior_count(), 0);
  const LambdaRigidity lr = rigidity_from_lambda(d);
  EXPECT_TRUE(lr.rigid);
}

TEST(ConeAngles, OctahedronFlatAndStretched) {
  const Decomposition d = octahedron_star();
  auto l = d.interior_lengths();
  EXPECT_NEAR(l[0], 2.0, 1e-15);
  EXPECT_NEAR(cone_angles(d, l)[0], 2 * kPi, 1e-12);
  l[0] = 2.1;
  // Embedding oracle: with |NS| = L the equator points sit at radius
  // sqrt(2 - L^2 / 4) from the axis, and a chord of length sqrt(2) subtends phi.
  const double r = std::sqrt(2.0 - 2.1 * 2.1 / 4.0);
  const double phi = 2 * std::asin(std::sqrt(2.0) / (2 * r));
  const double theta = cone_angles(d, l)[0];
  EXPECT_NEAR(theta, 4 * phi, 1e-12);
  // The equator pulls towards the axis, so the angle grows, as Lambda = 4 > 0 says.
  EXPECT_GT(theta, 2 * kPi);
}

TEST(ConeAngles, InfeasibleNamesTetrahedron) {
  const Decomposition d = octahedron_star();
  try {
    cone_angles(d, {3.0});
    FAIL() << "expected GeometryError";
  } catch (const GeometryError& e) {
    EXPECT_NE(std::string(e.what()).find("tetrahedron"), std::string::npos);
  }
}

TEST(LambdaMatrix, OctahedronEntry) {
  const LambdaMatrix lm = lambda_matrix(octahedron_star());
  ASSERT_EQ(lm.matrix.rows(), 1);
  EXPECT_NEAR(lm.matrix(0, 0), 4.0, 1e-9);
  EXPECT_NEAR(fd_jacobian(octahedron_star())(0, 0), 4.0, 1e-6);
  EXPECT_EQ(lm.rank, 1);
  EXPECT_NEAR(lm.eigenvalues(0), 4.0, 1e-9);
}

TEST(LambdaMatrix, SymmetricAndMatchesFiniteDifference) {
  for (const auto& d : random_star_decompositions(20, 31)) {
    if (d.interior_count() == 0) continue;
    const LambdaMatrix lm = lambda_matrix(d);
    const double maxabs = lm.matrix.cwiseAbs().maxCoeff();
    EXPECT_LE(lm.asymmetry, 1e-7 * maxabs);
    EXPECT_LE((lm.matrix - lm.matrix.transpose()).cwiseAbs().maxCoeff(), 1e-7 * maxabs);
    const Eigen::MatrixXd fd = fd_jacobian(d);
    EXPECT_LE((lm.matrix - fd).cwiseAbs().maxCoeff(), 1e-6 * std::max(1.0, maxabs));
  }
}

TEST(LambdaMatrix, ConvexStarsPositiveDefinite) {
  // Observed behaviour on convex hulls; the general statement is open.
  for (const auto& d : random_star_decompositions(20, 32)) {
    if (d.interior_count() == 0) continue;
    EXPECT_GT(lambda_matrix(d).eigenvalues(0), 0.0);
  }
}

TEST(LambdaMatrix, NoInteriorEdges) {
  const Decomposition d = Decomposition::from_tetrahedra(shapes::regular_tetrahedron_points(), {{0, 1, 2, 3}});
  const LambdaMatrix lm = lambda_matrix(d);
  EXPECT_EQ(lm.matrix.rows(), 0);
  EXPECT_EQ(lm.rank, 0);
  const LambdaRigidity lr = rigidity_from_lambda(d);
  EXPECT_TRUE(lr.rigid);
  EXPECT_TRUE(lr.rank_rigid);
}

TEST(MeanCurvature, RegularTetrahedron) {
  const Decomposition d = Decomposition::from_tetrahedra(
      {{0, 0, 0}, {1, 0, 0}, {0.5, std::sqrt(3.0) / 2, 0}, {0.5, std::sqrt(3.0) / 6, std::sqrt(2.0 / 3.0)}},
      {{0, 1, 2, 3}});
  EXPECT_NEAR(mean_curvature_H(d, {}), 6 * std::acos(1.0 / 3.0), 1e-12);
  EXPECT_NEAR(mean_curvature_H(d, {}), 7.3857565, 1e-7);
}

TEST(MeanCurvature, GradientIsConeAngle) {
  const Decomposition d = octahedron_star();
  const double h = 1e-6;
  const double grad = (mean_curvature_H(d, {2.0 + h}) - mean_curvature_H(d, {2.0 - h})) / (2 * h);
  EXPECT_NEAR(grad, 2 * kPi, 1e-6);
}

TEST(MeanCurvature, Homogeneous) {
  const Decomposition d = octahedron_star();
  auto pts = d.vertices();
  for (auto& p : pts) p *= 1.7;
  const Decomposition big = Decomposition::from_tetrahedra(pts, d.tetrahedra());
  EXPECT_NEAR(mean_curvature_H(big, big.interior_lengths()), 1.7 * mean_curvature_H(d, d.interior_lengths()), 1e-12);
}

TEST(RigidityFromLambda, OctahedronAndFlexibleStar) {
  const LambdaRigidity oct = rigidity_from_lambda(octahedron_star());
  EXPECT_TRUE(oct.rigid);
  EXPECT_TRUE(oct.rank_rigid);
  EXPECT_NEAR(oct.lambda.matrix(0, 0), 4.0, 1e-9);

  const LambdaRigidity flex = rigidity_from_lambda(axial_decomposition(star_root()));
  EXPECT_FALSE(flex.rigid);
  EXPECT_FALSE(flex.rank_rigid);
  EXPECT_LE(std::abs(flex.lambda.matrix(0, 0)), 1e-9);
}

TEST(RigidityFromLambda, AgreesOnRandomStars) {
  for (const auto& d : random_star_decompositions(20, 33)) {
    const LambdaRigidity lr = rigidity_from_lambda(d);
    EXPECT_EQ(lr.rigid, lr.rank_rigid);
  }
}

TEST(Schlafli, RandomTetrahedra) {
  Rng rng(34);
  std::uniform_real_distribution<double> u(-1, 1);
  int done = 0;
  while (done < 200) {
    std::array<Point3, 4> p;
    for (auto& q : p) q = Point3(u(rng), u(rng), u(rng));
    if (std::abs((p[1] - p[0]).cross(p[2] - p[0]).dot(p[3] - p[0])) < 0.05) continue;
    TetraLengths l;
    for (int e = 0; e < 6; ++e) {
      const auto [a, b] = tetra_edge_vertices(e);
      l[e] = (p[a] - p[b]).norm();
    }
    std::array<double, 6> dir;
    for (auto& x : dir) x = u(rng);
    EXPECT_LE(std::abs(schlafli_residual(l, dir)), 1e-9);
    ++done;
  }
}
