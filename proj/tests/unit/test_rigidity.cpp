#include "polyrigid/geometry.hpp"
#include "polyrigid/linalg.hpp"
#include "polyrigid/rigidity.hpp"
#include "polyrigid/suspension.hpp"
#include "shapes.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace polyrigid;

namespace {

Framework octahedron_bars() { return Framework::all_bars(shapes::octahedron()); }

// Octahedron with the equator and [N, S] as cables.
Framework octahedron_tensegrity() { return tensegrity_labeling(shapes::octahedron_suspension(), true); }

int rank_of(const Framework& fw) { return numerical_rank(rigidity_matrix(fw), 1e-9); }

}  // namespace

TEST(Linalg, RankAndKernels) {
  Rng rng(1);
  const Eigen::MatrixXd a = Eigen::MatrixXd::Random(7, 4) * Eigen::MatrixXd::Random(4, 9);
  const SvdSummary s = analyze_matrix(a, 1e-9);
  EXPECT_EQ(s.rank, 4);
  EXPECT_EQ(s.right_null.cols(), 5);
  EXPECT_EQ(s.left_null.cols(), 3);
  EXPECT_LE((a * s.right_null).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE((a.transpose() * s.left_null).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE(orthonormality_residual(s.right_null), 1e-12);
  EXPECT_EQ(null_space(Eigen::MatrixXd::Identity(3, 3), 1e-9).cols(), 0);
}

TEST(RigidityMatrix, SingleBar) {
  const Framework fw({{0, 0, 0}, {1, 0, 0}}, {{0, 1, EdgeKind::Bar}});
  Eigen::MatrixXd expected(1, 6);
  expected << -1, 0, 0, 1, 0, 0;
  EXPECT_EQ(rigidity_matrix(fw), expected);
}

TEST(RigidityMatrix, IsHalfGradientOfSquaredLengths) {
  Rng rng(7);
  const auto s = *random_convex_surface(rng, 10);
  const Framework fw = Framework::all_bars(s);
  const Eigen::MatrixXd r = rigidity_matrix(fw);
  const double h = 1e-6;
  for (int e = 0; e < fw.edge_count(); ++e) {
    const auto& ed = fw.edges()[e];
    for (int v : {ed.i, ed.j}) {
      for (int c = 0; c < 3; ++c) {
        auto sq = [&](double t) {
          auto p = fw.vertices();
          p[v](c) += t;
          return 0.5 * (p[ed.i] - p[ed.j]).squaredNorm();
        };
        EXPECT_NEAR(r(e, 3 * v + c), (sq(h) - sq(-h)) / (2 * h), 1e-8);
      }
    }
  }
}

TEST(RigidityMatrix, TetrahedronAndOctahedronRanks) {
  EXPECT_EQ(rank_of(Framework::all_bars(shapes::regular_tetrahedron())), 6);
  const Framework oct = octahedron_bars();
  EXPECT_EQ(rigidity_matrix(oct).rows(), 12);
  EXPECT_EQ(rigidity_matrix(oct).cols(), 18);
  EXPECT_EQ(rank_of(oct), 12);
}

TEST(FlexSpace, Dimensions) {
  const FlexSpace tet = bar_flex_space(Framework::all_bars(shapes::regular_tetrahedron()));
  EXPECT_EQ(tet.dimension, 6);
  EXPECT_EQ(tet.trivial_dimension, 6);

  const Framework bars({{0, 0, 0}, {1, 0, 0}, {0, 2, 1}, {0, 3, 1}}, {{0, 1, EdgeKind::Bar}, {2, 3, EdgeKind::Bar}});
  EXPECT_EQ(bar_flex_space(bars).dimension, 10);
}

TEST(FlexSpace, VertexInsideFaceAddsFlex) {
  auto pts = shapes::octahedron_points();
  pts.push_back((pts[0] + pts[2] + pts[3]) / 3.0);
  auto edges = octahedron_bars().edges();
  for (int k : {0, 2, 3}) edges.push_back({k, 6, EdgeKind::Bar});
  const FlexSpace f = bar_flex_space(Framework(pts, edges));
  EXPECT_EQ(f.dimension, 7);
  const Eigen::MatrixXd flex = nontrivial_flexes(Framework(pts, edges));
  ASSERT_EQ(flex.cols(), 1);
  // The flex moves the new vertex along the face normal.
  const Vec3 normal = (pts[2] - pts[0]).cross(pts[3] - pts[0]).normalized();
  const Vec3 v6 = flex.col(0).segment<3>(18);
  EXPECT_NEAR(std::abs(v6.normalized().dot(normal)), 1.0, 1e-6);
}

TEST(InfinitesimalRigidity, OctahedronAndDeletions) {
  const Framework oct = octahedron_bars();
  EXPECT_TRUE(is_infinitesimally_rigid(oct));
  for (int e = 0; e < oct.edge_count(); ++e) {
    const Framework less = oct.without_edge(e);
    EXPECT_EQ(rank_of(less), 11);
    EXPECT_EQ(bar_flex_space(less).dimension, 7);
    EXPECT_FALSE(is_infinitesimally_rigid(less));
  }
}

TEST(InfinitesimalRigidity, CubeSkeletonFlexes) {
  const auto p = shapes::cube_points();
  std::vector<FrameworkEdge> edges;
  for (int a = 0; a < 8; ++a) {
    for (int b = a + 1; b < 8; ++b) {
      if ((p[a] - p[b]).norm() < 1.0 + 1e-12) edges.push_back({a, b, EdgeKind::Bar});
    }
  }
  ASSERT_EQ(edges.size(), 12u);
  EXPECT_FALSE(is_infinitesimally_rigid(Framework(p, edges)));
}

TEST(InfinitesimalRigidity, PlanarConfigurationRejected) {
  const Framework planar({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}},
                         {{0, 1, EdgeKind::Bar}, {0, 2, EdgeKind::Bar}, {1, 3, EdgeKind::Bar},
                          {2, 3, EdgeKind::Bar}, {0, 3, EdgeKind::Bar}});
  EXPECT_THROW(is_infinitesimally_rigid(planar), GeometryError);
}

TEST(Framework, RejectsBadEdges) {
  const std::vector<Point3> p{{0, 0, 0}, {1, 0, 0}};
  EXPECT_THROW(Framework(p, {{0, 2, EdgeKind::Bar}}), GeometryError);
  EXPECT_THROW(Framework(p, {{0, 1, EdgeKind::Bar}, {1, 0, EdgeKind::Cable}}), GeometryError);
  EXPECT_THROW(Framework({{0, 0, 0}, {0, 0, 0}}, {{0, 1, EdgeKind::Bar}}), GeometryError);
}

TEST(TensegrityFlex, RotationIsNeutral) {
  const Framework fw = octahedron_tensegrity();
  Motion m = Motion::zero(6);
  for (int k = 0; k < 6; ++k) m.v.segment<3>(3 * k) = Vec3(0, 0, 1).cross(fw.vertices()[k]);
  for (const auto& r : tensegrity_flex_test(fw, m)) {
    EXPECT_NEAR(r.value, 0.0, 1e-15);
    EXPECT_TRUE(r.satisfied);
  }
}

TEST(TensegrityFlex, StretchedCableViolated) {
  const Framework fw({{0, 0, 0}, {2, 0, 0}}, {{0, 1, EdgeKind::Cable}});
  Motion m = Motion::zero(2);
  m.v.segment<3>(3) = Vec3(1, 0, 0);
  const auto r = tensegrity_flex_test(fw, m);
  EXPECT_NEAR(r[0].value, 2.0, 1e-15);
  EXPECT_FALSE(r[0].satisfied);
  m.v.segment<3>(3) = Vec3(-1, 0, 0);
  EXPECT_TRUE(tensegrity_flex_test(fw, m)[0].satisfied);
}

TEST(TensegrityFlex, BarFlexProjection) {
  // Project a random motion onto the bar flexes of octahedron + [N, S]: every
  // bar value vanishes.
  const Framework fw = octahedron_tensegrity().as_bars();
  const FlexSpace fs = bar_flex_space(fw);
  Rng rng(3);
  const Eigen::VectorXd x = shapes::random_vector(18, rng);
  const Motion m{fs.basis * (fs.basis.transpose() * x)};
  for (const auto& r : tensegrity_flex_test(fw, m)) EXPECT_NEAR(r.value, 0.0, 1e-12);
}

TEST(Stress, TetrahedronHasNone) {
  EXPECT_TRUE(equilibrium_stress_space(Framework::all_bars(shapes::regular_tetrahedron())).empty());
}

TEST(Stress, OctahedronWithAxis) {
  const Framework fw = octahedron_tensegrity();
  ASSERT_EQ(fw.edge_count(), 13);
  const auto space = equilibrium_stress_space(fw);
  ASSERT_EQ(space.size(), 1u);
  // Hand equilibrium at p = (1, 0, 0): laterals pull (-1)(p - N) + (-1)(p - S)
  // = (-2, 0, 0), equator cables (+1)(p - q) to (0, +-1, 0) give (2, 0, 0).
  Stress s = space[0];
  const double scale = s.omega(fw.edge_index(make_edge(0, 1))) / 2.0;
  for (int e = 0; e < fw.edge_count(); ++e) {
    const auto& ed = fw.edges()[e];
    const bool ns = ed.key() == make_edge(0, 1);
    const bool lateral = !ns && (ed.i <= 1);
    const double expected = ns ? 2.0 : (lateral ? -1.0 : 1.0);
    EXPECT_NEAR(s.omega(e) / scale, expected, 1e-12) << to_string(ed.key());
  }
  EXPECT_LE(equilibrium_residual(fw, s), 1e-12);
  const Stress w = normalized_max_one(s);
  EXPECT_NEAR(w.omega.maxCoeff(), 1.0, 1e-15);
  EXPECT_TRUE(is_proper(fw, w));
  EXPECT_FALSE(is_proper(fw, Stress{-w.omega}));
  EXPECT_TRUE(is_proper(fw.as_bars(), Stress{-w.omega}));
}

TEST(Stress, EnergyVanishesForEquilibrium) {
  const Framework fw = octahedron_tensegrity();
  const Stress s = equilibrium_stress_space(fw)[0];
  Rng rng(9);
  for (int k = 0; k < 10; ++k) {
    const Motion m{shapes::random_vector(18, rng)};
    EXPECT_NEAR(stress_energy(fw, s, m), 0.0, 1e-9);
  }
  Motion rot = Motion::zero(6);
  for (int k = 0; k < 6; ++k) rot.v.segment<3>(3 * k) = Vec3(1, 2, 3).cross(fw.vertices()[k]);
  Stress bent = s;
  bent.omega(3) += 0.5;
  EXPECT_NEAR(stress_energy(fw, bent, rot), 0.0, 1e-12);
  const Motion m{shapes::random_vector(18, rng)};
  EXPECT_GT(std::abs(stress_energy(fw, bent, m)), 1e-6);
}

TEST(Exchange, OctahedronWithAxis) {
  const Framework fw = octahedron_tensegrity();
  const Stress s = normalized_max_one(equilibrium_stress_space(fw)[0]);
  EXPECT_TRUE(exchange_rigidity_check(fw, s, fw.edge_index(make_edge(0, 1))));
  EXPECT_TRUE(exchange_rigidity_check(fw, s, fw.edge_index(make_edge(0, 2))));
  Stress zeroed = s;
  zeroed.omega(0) = 0.0;
  try {
    exchange_rigidity_check(fw, zeroed, 0);
    FAIL() << "expected a precondition error";
  } catch (const ExchangePreconditionError& e) {
    EXPECT_TRUE(e.failure() == ExchangeFailure::StressZeroOnEdge || e.failure() == ExchangeFailure::NotEquilibrium);
  }
  EXPECT_THROW(exchange_rigidity_check(fw, Stress{-s.omega}, 0), ExchangePreconditionError);
}

TEST(ProjectiveInvariance, OctahedronRank) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m(0, 3) = 0.2;
  m(2, 3) = -0.1;
  m(1, 0) = 0.3;
  const auto pts = apply_projective(ProjectiveMap(m), shapes::octahedron_points());
  EXPECT_EQ(rank_of(octahedron_bars().with_vertices(pts)), 12);
  EXPECT_EQ(rank_of(octahedron_bars().without_edge(0).with_vertices(pts)), 11);
}

TEST(TrivialMotions, SixDimensionalAndInKernel) {
  const Framework oct = octahedron_bars();
  const Eigen::MatrixXd t = trivial_motions(oct.vertices());
  EXPECT_EQ(t.cols(), 6);
  EXPECT_LE((rigidity_matrix(oct) * t).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_EQ(affine_dimension(oct.vertices()), 3);
  EXPECT_EQ(affine_dimension(std::vector<Point3>{{0, 0, 0}, {1, 1, 1}, {2, 2, 2}}), 1);
}
