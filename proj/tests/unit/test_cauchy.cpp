#include "polyrigid/cauchy.hpp"
#include "polyrigid/generators.hpp"
#include "polyrigid/geometry.hpp"
#include "polyrigid/linalg.hpp"
#include "polyrigid/rigidity.hpp"
#include "shapes.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace polyrigid;

namespace {

constexpr Sign P = Sign::Plus;
constexpr Sign M = Sign::Minus;
constexpr Sign Z = Sign::Zero;

std::vector<Face> canonical(std::vector<Face> faces) {
  for (auto& f : faces) std::rotate(f.begin(), std::min_element(f.begin(), f.end()), f.end());
  std::sort(faces.begin(), faces.end());
  return faces;
}

// K4 with edge {0, 1} subdivided by vertex 4.
PlanarEmbedding subdivided_k4() {
  PlanarEmbedding g = embedding_from_surface(shapes::regular_tetrahedron());
  for (int v : {0, 1}) std::replace(g.rotation[v].begin(), g.rotation[v].end(), 1 - v, 4);
  g.rotation.push_back({0, 1});
  g.vertex_count = 5;
  g.edges.clear();
  for (int v = 0; v < 5; ++v) {
    for (int w : g.rotation[v]) {
      if (v < w) g.edges.push_back({v, w});
    }
  }
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

SignVector manual(std::vector<Sign> signs) {
  SignVector sv;
  sv.rates.assign(signs.size(), 0.0);
  for (std::size_t k = 0; k < signs.size(); ++k) sv.rates[k] = static_cast<double>(signs[k]);
  sv.signs = std::move(signs);
  return sv;
}

}  // namespace

TEST(SignChanges, Cyclic) {
  const std::vector<Sign> alt{P, M, P, M};
  EXPECT_EQ(cyclic_sign_changes(alt), 4);
  const std::vector<Sign> odd{P, M, P};
  EXPECT_EQ(cyclic_sign_changes(odd), 2);
  const std::vector<Sign> zeros{P, Z, M, Z, Z, P, P};
  EXPECT_EQ(cyclic_sign_changes(zeros), 2);
  const std::vector<Sign> none{Z, Z};
  EXPECT_EQ(cyclic_sign_changes(none), 0);
}

TEST(Embedding, EulerAndFaceCounts) {
  Rng rng(21);
  int checked = 0;
  while (checked < 20) {
    const auto s = random_convex_surface(rng, 6 + checked);
    if (!s) continue;
    ++checked;
    const PlanarEmbedding g = embedding_from_surface(*s);
    const auto faces = g.faces();
    const int v = g.vertex_count, e = static_cast<int>(g.edges.size()), f = static_cast<int>(faces.size());
    EXPECT_EQ(v - e + f, 2);
    EXPECT_EQ(2 * e, 3 * f);
    EXPECT_EQ(f, s->face_count());
    EXPECT_TRUE(g.connected());
  }
}

TEST(Embedding, SubdividedK4Faces) {
  const PlanarEmbedding g = subdivided_k4();
  const auto faces = g.faces();
  EXPECT_EQ(faces.size(), 4u);
  EXPECT_EQ(g.vertex_count - static_cast<int>(g.edges.size()) + static_cast<int>(faces.size()), 2);
}

TEST(TopoLemma, NoWitnessOnSmallGraphs) {
  EXPECT_FALSE(topo_lemma_witness_search(embedding_from_surface(shapes::regular_tetrahedron())).has_value());
  EXPECT_FALSE(topo_lemma_witness_search(embedding_from_surface(shapes::octahedron())).has_value());
  EXPECT_FALSE(topo_lemma_witness_search(subdivided_k4()).has_value());
}

TEST(TopoLemma, TooLarge) {
  EXPECT_THROW(topo_lemma_witness_search(embedding_from_surface(shapes::icosahedron())), GeometryError);
}

TEST(SignSubgraph, AllZeroIsEmpty) {
  const auto s = shapes::octahedron();
  const auto g = sign_subgraph(s, manual(std::vector<Sign>(12, Z)));
  EXPECT_EQ(g.embedding.vertex_count, 0);
  EXPECT_TRUE(g.embedding.edges.empty());
}

TEST(SignSubgraph, StarOfOneVertexRejected) {
  const auto s = shapes::octahedron();
  std::vector<Sign> signs(12, Z);
  for (int e = 0; e < 12; ++e) {
    if (s.edges()[e].i == 0) signs[e] = (e % 2) ? P : M;
  }
  EXPECT_THROW(sign_subgraph(s, manual(signs)), GeometryError);
}

TEST(CountSignChanges, TriangleFacesAtMostTwo) {
  const auto s = shapes::regular_tetrahedron();
  // Edge order is sorted: 01 02 03 12 13 23.
  const auto g = sign_subgraph(s, manual({P, P, M, M, P, P}));
  const SignChangeStats st = count_sign_changes(g);
  const auto faces = g.embedding.faces();
  ASSERT_EQ(faces.size(), st.per_face.size());
  int total = 0;
  for (std::size_t f = 0; f < faces.size(); ++f) {
    bool plus = false, minus = false;
    for (int e : faces[f]) (g.labels[e] == P ? plus : minus) = true;
    EXPECT_EQ(st.per_face[f], plus && minus ? 2 : 0);
    total += st.per_face[f];
  }
  EXPECT_EQ(st.s, total);
  int vertex_total = 0;
  for (int c : st.per_vertex) vertex_total += c;
  EXPECT_EQ(vertex_total, st.s);
  EXPECT_EQ(st.lower_bound, 4 * 4 - 6);
  EXPECT_EQ(st.euler_upper, 4 * 6 - 4 * 4);
  EXPECT_FALSE(st.contradiction);
}

TEST(VertexSignLemma, ZeroSatisfiedAndAdversarialFlagged) {
  const auto s = shapes::octahedron();
  for (const auto& r : vertex_sign_lemma_check(s, manual(std::vector<Sign>(12, Z)))) {
    EXPECT_TRUE(r.satisfied);
    EXPECT_TRUE(r.all_zero);
  }
  std::vector<Sign> signs(12, Z);
  for (int e = 0; e < 12; ++e) {
    if (s.edges()[e].i == 0) signs[e] = P;
  }
  const auto reports = vertex_sign_lemma_check(s, manual(signs));
  EXPECT_FALSE(reports[0].satisfied);
  EXPECT_TRUE(reports[0].convex);
  EXPECT_EQ(reports[0].changes, 0);
}

TEST(SignVector, TrivialMotionGivesZeros) {
  const auto s = shapes::octahedron();
  Motion m = Motion::zero(6);
  for (int k = 0; k < 6; ++k) m.v.segment<3>(3 * k) = Vec3(0.3, -1, 2).cross(s.vertices()[k]) + Vec3(1, 2, 3);
  const SignVector sv = sign_vector_from_flex(s, m);
  for (Sign x : sv.signs) EXPECT_EQ(x, Z);
}

TEST(SignVector, FlexOfOctahedronMinusEquatorEdge) {
  const auto s = shapes::octahedron();
  const Framework all = Framework::all_bars(s);
  const int removed = s.edge_index(make_edge(2, 3));
  const Eigen::MatrixXd flex = nontrivial_flexes(all.without_edge(removed));
  ASSERT_EQ(flex.cols(), 1);
  const Motion m{flex.col(0)};
  const SignVector sv = sign_vector_from_flex(s, m);
  EXPECT_NE(sv.signs[removed], Z);
  // Finite-difference oracle on the dihedral angles of the moved surface.
  const double h = 1e-6;
  auto moved = [&](double t) {
    std::vector<Point3> p = s.vertices();
    for (int k = 0; k < 6; ++k) p[k] += t * m.at(k);
    return PolyhedralSurface(p, s.faces());
  };
  const auto plus = moved(h), minus = moved(-h);
  // sign_vector_from_flex rescales to unit diameter and unit motion norm; signs agree.
  for (int e = 0; e < s.edge_count(); ++e) {
    const double fd = (dihedral_angle(plus, s.edges()[e]) - dihedral_angle(minus, s.edges()[e])) / (2 * h);
    if (std::abs(fd) > 1e-5) {
      EXPECT_EQ(sv.signs[e], fd > 0 ? P : M) << to_string(s.edges()[e]);
    } else {
      EXPECT_EQ(sv.signs[e], Z) << to_string(s.edges()[e]);
    }
  }
  // Not a flex of the full surface, so only the subgraph is checked.
  const auto stats = count_sign_changes(sign_subgraph(s, sv));
  EXPECT_GT(stats.e, 0);
}

TEST(Dent, OctahedronEquatorEdge) {
  const auto s = shapes::octahedron();
  const DentResult d = dent(s, make_edge(2, 3));
  EXPECT_EQ(d.new_edge, make_edge(0, 1));
  EXPECT_FALSE(d.surface.has_edge(2, 3));
  const auto faces = canonical(d.surface.faces());
  auto has = [&](Face f) {
    for (const auto& g : faces) {
      auto a = g, b = f;
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      if (a == b) return true;
    }
    return false;
  };
  EXPECT_TRUE(has({0, 1, 2}));
  EXPECT_TRUE(has({0, 1, 3}));
  EXPECT_EQ(d.surface.face_count(), 8);
}

TEST(Dent, Involution) {
  const auto s = shapes::icosahedron();
  for (int e = 0; e < s.edge_count(); e += 7) {
    const DentResult d = dent(s, s.edges()[e]);
    const DentResult back = dent(d.surface, d.new_edge);
    EXPECT_EQ(back.new_edge, s.edges()[e]);
    EXPECT_EQ(canonical(back.surface.faces()), canonical(s.faces()));
  }
}

TEST(Dent, IcosahedronAnyEdge) {
  const auto s = shapes::icosahedron();
  for (int e = 0; e < s.edge_count(); ++e) {
    const DentResult d = dent(s, s.edges()[e]);
    const auto r = classify_convexity(d.surface);
    EXPECT_EQ(r.classification, ConvexityClass::WeaklyStrictlyConvex);
    EXPECT_TRUE(r.edge_non_convex[d.surface.edge_index(d.new_edge)]);
  }
}

TEST(Dent, Errors) {
  const DentResult d = dent(shapes::octahedron(), make_edge(2, 3));
  // Opposite vertices of (3, 4) are N and S, now adjacent.
  EXPECT_FALSE(dentable(d.surface, make_edge(3, 4)));
  EXPECT_THROW(dent(d.surface, make_edge(3, 4)), GeometryError);
  // A diagonal of a cube face has a coplanar quadrilateral.
  const auto cube = *hull_surface(shapes::cube_points());
  for (int e = 0; e < cube.edge_count(); ++e) {
    const Edge ed = cube.edges()[e];
    if ((cube.vertices()[ed.i] - cube.vertices()[ed.j]).norm() > 1.2 &&
        std::abs(dihedral_angle(cube, e) - std::numbers::pi) < 1e-12) {
      EXPECT_THROW(dent(cube, ed), GeometryError);
    }
  }
  EXPECT_THROW(dent(shapes::octahedron(), make_edge(0, 1)), GeometryError);
}

TEST(Dent, AdjacentPair) {
  Rng rng(4);
  const auto s = shapes::icosahedron();
  for (int k = 0; k < 10; ++k) {
    const auto pd = random_adjacent_pair_dent(s, rng);
    ASSERT_TRUE(pd.has_value());
    const Edge a = pd->dented[0], b = pd->dented[1];
    const int shared = (a.i == b.i || a.i == b.j) ? a.i : a.j;
    EXPECT_TRUE(shared == b.i || shared == b.j);
    const int oa = a.i + a.j - shared, ob = b.i + b.j - shared;
    // Not on one face.
    EXPECT_FALSE(s.has_edge(oa, ob));
    EXPECT_TRUE(is_infinitesimally_rigid(Framework::all_bars(pd->surface)));
    EXPECT_EQ(classify_convexity(pd->surface).non_convex_edge_count, 2);
  }
}

TEST(Harness, OctahedronDentRigid) {
  const DentResult d = dent(shapes::octahedron(), make_edge(2, 3));
  EXPECT_EQ(numerical_rank(rigidity_matrix(Framework::all_bars(d.surface)), 1e-9), 12);
}

TEST(Harness, SmallRunHasNoFailures) {
  const HarnessReport r = theorem1_harness(7, 10);
  EXPECT_EQ(r.trials, 10);
  EXPECT_EQ(r.failures, 0);
  EXPECT_EQ(r.checked + 2 * r.skipped, 20);
  for (const auto& inst : r.instances) {
    if (inst.kind == DentKind::Control) continue;
    EXPECT_EQ(inst.rank, 3 * inst.vertex_count - 6);
    EXPECT_GE(inst.vertex_count, 8);
    EXPECT_LE(inst.vertex_count, 20);
  }
}

TEST(Harness, Deterministic) {
  const HarnessReport a = theorem1_harness(99, 5), b = theorem1_harness(99, 5);
  ASSERT_EQ(a.instances.size(), b.instances.size());
  for (std::size_t k = 0; k < a.instances.size(); ++k) {
    EXPECT_EQ(a.instances[k].dented, b.instances[k].dented);
    EXPECT_EQ(a.instances[k].rank, b.instances[k].rank);
  }
}
