#pragma once

#include "polyrigid/common.hpp"
#include "polyrigid/geometry.hpp"
#include "polyrigid/rigidity.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace polyrigid {

enum class Sign : std::int8_t { Minus = -1, Zero = 0, Plus = 1 };

char to_char(Sign s);

/// Sign of the first-order dihedral variation per surface edge (surface edge
/// order), together with the variations themselves.
struct SignVector {
  std::vector<Sign> signs;
  std::vector<double> rates;
};

/// Dihedral variations are evaluated on the unit-diameter surface with the
/// motion rescaled to unit norm; |rate| <= threshold counts as 0.
SignVector sign_vector_from_flex(const PolyhedralSurface& surface, const Motion& m, double threshold = 1e-9);

/// Number of sign changes in cyclic order, zeros skipped: a change is a pair
/// of cyclically consecutive nonzero entries of opposite sign.
int cyclic_sign_changes(std::span<const Sign> cyclic);

/// A graph on the sphere given by a rotation system: rotation[v] lists the
/// neighbours of v counter-clockwise.
struct PlanarEmbedding {
  int vertex_count = 0;
  std::vector<Edge> edges;  // sorted
  std::vector<std::vector<int>> rotation;

  int edge_index(int a, int b) const;
  /// Faces as cyclic lists of edge indices.
  std::vector<std::vector<int>> faces() const;
  bool connected() const;
};

PlanarEmbedding embedding_from_surface(const PolyhedralSurface& surface);

/// Zero-free signed subgraph with inherited rotation system.
struct SignedPlanarGraph {
  PlanarEmbedding embedding;
  std::vector<Sign> labels;     // per embedding edge
  std::vector<int> surface_ids; // per embedding vertex
};

/// Drops 0-labelled edges and the vertices left without edges. Throws
/// GeometryError if a remaining vertex has degree < 3 or the subgraph is not
/// connected (neither happens for flex-induced signs).
SignedPlanarGraph sign_subgraph(const PolyhedralSurface& surface, const SignVector& sv);

struct SignChangeStats {
  std::vector<int> per_vertex;
  std::vector<int> per_face;
  int v = 0, e = 0, f = 0;
  int s = 0;  // total over face corners, equal to the total over vertices
  std::map<int, int> face_sizes;  // k -> number of faces with k edges
  int lower_bound = 0;      // 4v - 6
  int face_bound = 0;       // sum over faces of 2 * floor(k / 2)
  int euler_upper = 0;      // 4e - 4f
  bool lower_holds = false; // 4v - 6 <= s
  bool upper_holds = false; // s <= 4e - 4f
  bool contradiction = false;  // both hold, which Euler's relation forbids
};

SignChangeStats count_sign_changes(const SignedPlanarGraph& g);

/// Exhaustive search for a +/- labelling where no vertex sees a single sign
/// and all but at most three vertices see >= 4 sign changes. Returns the
/// labelling if found. Throws for more than max_edges edges.
std::optional<std::vector<Sign>> topo_lemma_witness_search(const PlanarEmbedding& g, int max_edges = 14);

struct VertexSignReport {
  int vertex = 0;
  bool convex = false;      // every incident edge has dihedral <= pi
  int changes = 0;
  int nonzero = 0;
  bool all_zero = false;
  bool satisfied = false;
  std::string clause;
};

/// Checks the per-vertex conclusions about flex-induced signs: at a convex
/// vertex all zero or >= 4 changes; elsewhere all zero or both signs present
/// with >= 3 nonzero entries.
std::vector<VertexSignReport> vertex_sign_lemma_check(const PolyhedralSurface& surface, const SignVector& sv);

struct DentResult {
  PolyhedralSurface surface;
  Edge new_edge;
};

/// Replaces the two faces on edge (a, b) by the two triangles on the other
/// diagonal (c, d) of the quadrilateral.
DentResult dent(const PolyhedralSurface& surface, Edge edge, double geom_tol = 1e-9);

/// True when dent() would accept the edge.
bool dentable(const PolyhedralSurface& surface, Edge edge, double geom_tol = 1e-9);

struct PairDent {
  PolyhedralSurface surface;
  std::array<Edge, 2> dented;     // edges of the original surface, sharing a vertex
  std::array<Edge, 2> new_edges;
};

/// Dents two random edges at a common vertex that do not lie on one face,
/// applied one after the other. Returns nullopt when no such pair is
/// dentable.
std::optional<PairDent> random_adjacent_pair_dent(const PolyhedralSurface& surface, std::mt19937_64& rng,
                                                  double geom_tol = 1e-9);

enum class DentKind { Single, AdjacentPair, Control };

std::string to_string(DentKind k);

struct HarnessInstance {
  int trial = 0;
  DentKind kind = DentKind::Single;
  int vertex_count = 0;
  std::vector<Edge> dented;
  bool rigid = false;
  int rank = 0;
  int expected_rank = 0;
  std::optional<SignChangeStats> flex_signs;  // only for flexible instances
  std::vector<Point3> vertices;               // dumped when the instance fails
  std::vector<Face> faces;
};

struct HarnessReport {
  std::uint64_t seed = 0;
  int trials = 0;
  int skipped = 0;
  int checked = 0;     // single + adjacent-pair instances
  int failures = 0;    // of those, not infinitesimally rigid
  int controls = 0;
  int controls_flexible = 0;
  std::vector<HarnessInstance> instances;
};

struct HarnessConfig {
  int min_vertices = 8;
  int max_vertices = 20;
  bool controls = true;
};

HarnessReport theorem1_harness(std::uint64_t seed, int trials, const HarnessConfig& cfg = {}, const Tolerance& tol = {});

}  // namespace polyrigid
