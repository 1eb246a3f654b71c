#pragma once

#include "polyrigid/common.hpp"
#include "polyrigid/generators.hpp"
#include "polyrigid/geometry.hpp"
#include "polyrigid/rigidity.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace polyrigid {

class Decomposition;

/// Two poles coned over a closed equatorial polygon. In surface() vertex 0 is
/// N, vertex 1 is S and vertex 2 + i is p_i; faces are [N, p_i, p_i+1] and
/// [S, p_i+1, p_i].
class Suspension {
 public:
  Suspension(Point3 north, Point3 south, std::vector<Point3> equator, double geom_tol = 1e-9);

  const Point3& north() const { return north_; }
  const Point3& south() const { return south_; }
  const std::vector<Point3>& equator() const { return equator_; }
  int equator_size() const { return static_cast<int>(equator_.size()); }
  const PolyhedralSurface& surface() const { return surface_; }

  static constexpr int kNorth = 0;
  static constexpr int kSouth = 1;
  static int equator_vertex(int i) { return 2 + i; }

  /// Same poles, transformed points.
  Suspension transformed(const ProjectiveMap& map, double geom_tol = 1e-9) const;
  Suspension with_equator_point(int i, const Point3& p) const;

 private:
  Point3 north_;
  Point3 south_;
  std::vector<Point3> equator_;
  PolyhedralSurface surface_;
};

/// Throws GeometryError for n < 3, coincident points or a degenerate face.
Suspension build_suspension(const Point3& north, const Point3& south, std::vector<Point3> equator,
                            double geom_tol = 1e-9);

/// Cylindrical coordinates in the frame S = 0, N = (0, 0, 1) reached by a
/// similarity. The frame is mirrored when the equator runs clockwise about the
/// axis, so that theta_i lies in (0, pi) for decomposable suspensions.
struct CylindricalEquator {
  std::vector<double> r;
  std::vector<double> azimuth;
  std::vector<double> z;
  std::vector<double> theta;  // azimuth[i+1] - azimuth[i] in [0, 2 pi)
  double ns_length = 0.0;     // |NS| before the similarity
  bool mirrored = false;
};

CylindricalEquator cylindrical_equator(const Suspension& s);

struct Decomposability {
  bool decomposable = false;
  std::string diagnostic;
};

/// The projection of the equator along N-S must be a simple polygon with the
/// axis strictly inside and every triangle (axis, u_i, u_i+1) of the same
/// orientation, so the tetrahedra [N, S, p_i, p_i+1] do not overlap.
Decomposability is_ns_decomposable(const Suspension& s, const Tolerance& tol = {});

bool is_weakly_strictly_convex(const Suspension& s, const Tolerance& tol = {});

/// Equator edges first (p_i p_i+1 in order), then the lateral edges
/// [N, p_i] and [S, p_i], then [N, S] when requested. Equator and [N, S] are
/// cables, lateral edges are bars.
Framework tensegrity_labeling(const Suspension& s, bool include_ns);

struct InductiveStress {
  Stress stress;                  // on tensegrity_labeling(s, true)
  std::vector<std::string> trace;
  bool fallback = false;          // a reduced suspension failed re-verification
};

/// Proper equilibrium stress built by removing reflex-lateral-edge vertices
/// one at a time and gluing small suspensions back. Throws GeometryError when
/// the hypotheses fail and InvariantViolation (with the trace) when the result
/// is not a proper equilibrium stress.
InductiveStress inductive_proper_stress(const Suspension& s, const Tolerance& tol = {});

/// Infinitesimal rigidity of the surface bar framework. When the suspension is
/// decomposable and weakly strictly convex, the verdict is also recomputed by
/// the exchange argument on the tensegrity stress; disagreement throws
/// InvariantViolation.
bool suspension_rigidity(const Suspension& s, const Tolerance& tol = {});

/// Rate of the dihedral angle at [N, S] of the tetrahedron N = (0, 0, 1),
/// S = 0, p_1, p_2 when |NS| grows at unit speed with the other five lengths
/// fixed. Throws when |sin theta| < 1e-12.
double theta_prime(double z1, double r1, double z2, double r2, double theta);

struct LambdaBreakdown {
  std::vector<double> simplex_terms;     // theta' per tetrahedron [N, S, p_i, p_i+1]
  std::vector<double> a;                 // r_i r_i+1 sin theta_i
  std::vector<double> b;                 // oriented area of (u_i-1, u_i, u_i+1), doubled
  std::vector<double> expression_terms;  // per vertex i
  double simplex_total = 0.0;            // in the normalized frame
  double expression_total = 0.0;
  double ns_length = 1.0;
  double lambda = 0.0;                   // simplex_total / ns_length
};

/// Both closed forms of the derivative of the total angle around [N, S] with
/// respect to |NS|. Totals are given in the frame S = 0, N = (0, 0, 1);
/// lambda is the value for the suspension as given. Throws
/// InvariantViolation if the two totals disagree beyond 1e-9 relative.
LambdaBreakdown lambda_scalar(const Suspension& s);

struct ElementaryReport {
  bool in_scope = false;
  std::string reason;
  bool projective = false;  // the normalizing map was not affine
  std::optional<LambdaBreakdown> breakdown;  // after normalization
  double min_term = 0.0;
  bool terms_nonnegative = false;
  bool total_positive = false;
  bool rigid = false;
  bool passed = false;
};

/// Suspension over a convex polygon: projected equator convex with the axis
/// inside. Out of scope inputs produce a report without assertions.
ElementaryReport theorem_elementary_check(const Suspension& s, const Tolerance& tol = {});

/// Projective map placing the poles at (0, 0, 1) and 0 with z = 0 and z = 1
/// supporting the suspension.
struct NormalizedSuspension {
  Suspension suspension;
  ProjectiveMap map;
};

NormalizedSuspension normalize_poles(const Suspension& s, const Tolerance& tol = {});

/// The star of the single interior edge: poles at its endpoints, equator the
/// link cycle. Throws if the decomposition does not have exactly one interior
/// edge or its star does not close.
Suspension interior_edge_star(const Decomposition& d);

/// The tetrahedra [N, S, p_i, p_i+1], sharing the interior edge [N, S].
Decomposition axial_decomposition(const Suspension& s, const Tolerance& tol = {});

/// Moves p_k along the axis direction to a height where |lambda| <= tol, by
/// bisection on [lo, hi] (frame heights). Stops early when the bracket reaches
/// machine precision. Throws if lambda does not change sign on the bracket.
Suspension lambda_root_on_height(const Suspension& s, int k, double lo, double hi, double tol = 1e-10);

/// Whether a suspension belongs to the class a generator profile targets:
/// convex: strongly strictly convex and decomposable; weak: decomposable,
/// weakly strictly convex, with a reflex lateral edge; convex-projection:
/// projected equator convex around the axis with normalizable poles; star:
/// decomposable; random: any valid suspension.
bool matches_profile(const Suspension& s, SuspensionProfile profile, const Tolerance& tol = {});

struct GeneratedSuspension {
  Suspension suspension;
  int attempt = 0;
};

/// Draws with sub-seeds split_seed(seed, attempt) until one matches the
/// profile; nullopt after max_attempts.
std::optional<GeneratedSuspension> generate_suspension(int n, SuspensionProfile profile, std::uint64_t seed,
                                                       const Tolerance& tol = {}, int max_attempts = 1000);

}  // namespace polyrigid
