#include "polyrigid/suspension.hpp"

#include "polyrigid/hull.hpp"
#include "polyrigid/lambda.hpp"
#include "polyrigid/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

namespace polyrigid {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<Point3> all_points(const Point3& n, const Point3& s, const std::vector<Point3>& eq) {
  std::vector<Point3> p{n, s};
  p.insert(p.end(), eq.begin(), eq.end());
  return p;
}

std::vector<Face> suspension_faces(int n) {
  std::vector<Face> faces;
  for (int i = 0; i < n; ++i) {
    const int a = Suspension::equator_vertex(i);
    const int b = Suspension::equator_vertex((i + 1) % n);
    faces.push_back({Suspension::kNorth, a, b});
    faces.push_back({Suspension::kSouth, b, a});
  }
  return faces;
}

PolyhedralSurface checked_surface(const Point3& north, const Point3& south, const std::vector<Point3>& eq,
                                  double geom_tol) {
  if (eq.size() < 3) throw GeometryError("suspension needs at least 3 equator vertices");
  auto pts = all_points(north, south, eq);
  const auto unit = normalized_unit_diameter(pts);
  const auto faces = suspension_faces(static_cast<int>(eq.size()));
  for (const auto& f : faces) {
    const double area = (unit[f[1]] - unit[f[0]]).cross(unit[f[2]] - unit[f[0]]).norm();
    if (area < geom_tol) {
      throw GeometryError("degenerate suspension face (" + std::to_string(f[0]) + ", " + std::to_string(f[1]) +
                          ", " + std::to_string(f[2]) + ")");
    }
  }
  return PolyhedralSurface(std::move(pts), faces, geom_tol);
}

double cross2(double ax, double ay, double bx, double by) { return ax * by - ay * bx; }

}  // namespace

Suspension::Suspension(Point3 north, Point3 south, std::vector<Point3> equator, double geom_tol)
    : north_(north),
      south_(south),
      equator_(std::move(equator)),
      surface_(checked_surface(north_, south_, equator_, geom_tol)) {}

Suspension Suspension::transformed(const ProjectiveMap& map, double geom_tol) const {
  const auto pts = apply_projective(map, surface_.vertices(), geom_tol);
  return Suspension(pts[0], pts[1], std::vector<Point3>(pts.begin() + 2, pts.end()), geom_tol);
}

Suspension Suspension::with_equator_point(int i, const Point3& p) const {
  auto eq = equator_;
  eq.at(i) = p;
  return Suspension(north_, south_, std::move(eq));
}

Suspension build_suspension(const Point3& north, const Point3& south, std::vector<Point3> equator, double geom_tol) {
  return Suspension(north, south, std::move(equator), geom_tol);
}

CylindricalEquator cylindrical_equator(const Suspension& s) {
  const ProjectiveMap frame = pole_frame_similarity(s.north(), s.south());
  const int n = s.equator_size();
  std::vector<Point3> q;
  for (const auto& p : s.equator()) q.push_back(frame.apply(p));
  double area = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto& a = q[i];
    const auto& b = q[(i + 1) % n];
    area += cross2(a.x(), a.y(), b.x(), b.y());
  }
  CylindricalEquator c;
  c.ns_length = (s.north() - s.south()).norm();
  c.mirrored = area < 0.0;
  for (auto& p : q) {
    if (c.mirrored) p.y() = -p.y();
    c.r.push_back(std::hypot(p.x(), p.y()));
    c.azimuth.push_back(std::atan2(p.y(), p.x()));
    c.z.push_back(p.z());
  }
  for (int i = 0; i < n; ++i) {
    double t = std::fmod(c.azimuth[(i + 1) % n] - c.azimuth[i], kTwoPi);
    if (t < 0.0) t += kTwoPi;
    c.theta.push_back(t);
  }
  return c;
}

namespace {

struct Projected {
  std::vector<double> x, y;
};

Projected projected(const CylindricalEquator& c) {
  Projected p;
  for (std::size_t i = 0; i < c.r.size(); ++i) {
    p.x.push_back(c.r[i] * std::cos(c.azimuth[i]));
    p.y.push_back(c.r[i] * std::sin(c.azimuth[i]));
  }
  return p;
}

int orient(double ax, double ay, double bx, double by, double cx, double cy, double eps) {
  const double v = cross2(bx - ax, by - ay, cx - ax, cy - ay);
  return v > eps ? 1 : (v < -eps ? -1 : 0);
}

bool segments_touch(double ax, double ay, double bx, double by, double cx, double cy, double dx, double dy,
                    double eps) {
  const int o1 = orient(ax, ay, bx, by, cx, cy, eps);
  const int o2 = orient(ax, ay, bx, by, dx, dy, eps);
  const int o3 = orient(cx, cy, dx, dy, ax, ay, eps);
  const int o4 = orient(cx, cy, dx, dy, bx, by, eps);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  auto on = [&](double px, double py, double qx, double qy, double rx, double ry, int o) {
    return o == 0 && std::min(px, qx) - eps <= rx && rx <= std::max(px, qx) + eps && std::min(py, qy) - eps <= ry &&
           ry <= std::max(py, qy) + eps;
  };
  return on(ax, ay, bx, by, cx, cy, o1) || on(ax, ay, bx, by, dx, dy, o2) || on(cx, cy, dx, dy, ax, ay, o3) ||
         on(cx, cy, dx, dy, bx, by, o4);
}

}  // namespace

Decomposability is_ns_decomposable(const Suspension& s, const Tolerance& tol) {
  const CylindricalEquator c = cylindrical_equator(s);
  const Projected u = projected(c);
  const int n = s.equator_size();
  double rmax = 0.0;
  for (double r : c.r) rmax = std::max(rmax, r);
  const double eps = tol.geom_tol * std::max(rmax * rmax, 1e-300);

  for (int i = 0; i < n; ++i) {
    if (c.r[i] <= tol.geom_tol * rmax) {
      return {false, "equator vertex " + std::to_string(i) + " projects onto the axis"};
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      const int i1 = (i + 1) % n, j1 = (j + 1) % n;
      if (segments_touch(u.x[i], u.y[i], u.x[i1], u.y[i1], u.x[j], u.y[j], u.x[j1], u.y[j1], eps)) {
        return {false, "projected equator is not simple: edges " + std::to_string(i) + " and " + std::to_string(j) +
                           " meet"};
      }
    }
  }
  double turn = 0.0;
  for (double t : c.theta) turn += t;
  if (std::abs(turn - kTwoPi) > 1e-6) {
    return {false, "axis is not inside the projected equator (winding " + std::to_string(turn / kTwoPi) + ")"};
  }
  for (int i = 0; i < n; ++i) {
    const int i1 = (i + 1) % n;
    if (cross2(u.x[i], u.y[i], u.x[i1], u.y[i1]) <= eps) {
      return {false, "tetrahedron [N, S, p" + std::to_string(i) + ", p" + std::to_string(i1) +
                         "] is flat or reversed; axial tetrahedra would overlap"};
    }
  }
  return {true, ""};
}

bool is_weakly_strictly_convex(const Suspension& s, const Tolerance& tol) {
  return classify_convexity(s.surface(), tol).classification != ConvexityClass::NotWeaklyConvex;
}

Framework tensegrity_labeling(const Suspension& s, bool include_ns) {
  const int n = s.equator_size();
  std::vector<FrameworkEdge> edges;
  for (int i = 0; i < n; ++i) {
    edges.push_back({Suspension::equator_vertex(i), Suspension::equator_vertex((i + 1) % n), EdgeKind::Cable});
  }
  for (int i = 0; i < n; ++i) edges.push_back({Suspension::kNorth, Suspension::equator_vertex(i), EdgeKind::Bar});
  for (int i = 0; i < n; ++i) edges.push_back({Suspension::kSouth, Suspension::equator_vertex(i), EdgeKind::Bar});
  if (include_ns) edges.push_back({Suspension::kNorth, Suspension::kSouth, EdgeKind::Cable});
  return Framework(s.surface().vertices(), std::move(edges));
}

// ---------------------------------------------------------------------------
// Inductive stress

namespace {

using StressMap = std::map<Edge, double>;

struct Induction {
  const Suspension& top;
  const Tolerance& tol;
  std::vector<std::string>& trace;

  // Original vertex id of position k in a sub-suspension on the equator ids.
  static int id_of(const std::vector<int>& eq, int local) {
    return local < 2 ? local : Suspension::equator_vertex(eq[local - 2]);
  }

  Suspension sub(const std::vector<int>& eq) const {
    std::vector<Point3> pts;
    for (int i : eq) pts.push_back(top.equator()[i]);
    return Suspension(top.north(), top.south(), std::move(pts), tol.geom_tol);
  }

  // Null-space stress of the tensegrity suspension, cables made positive.
  std::optional<StressMap> base(const Suspension& s, const std::vector<int>& eq) const {
    const Framework fw = tensegrity_labeling(s, true);
    const auto space = equilibrium_stress_space(fw, tol);
    if (space.size() != 1) {
      trace.push_back("base: stress space has dimension " + std::to_string(space.size()));
      return std::nullopt;
    }
    Eigen::VectorXd w = space[0].omega;
    double cable_sum = 0.0;
    for (int k = 0; k < fw.edge_count(); ++k) {
      if (fw.edges()[k].kind == EdgeKind::Cable) cable_sum += w(k);
    }
    if (cable_sum < 0.0) w = -w;
    StressMap out;
    for (int k = 0; k < fw.edge_count(); ++k) {
      const auto& e = fw.edges()[k];
      out[make_edge(id_of(eq, e.i), id_of(eq, e.j))] = w(k);
    }
    trace.push_back("base: n=" + std::to_string(eq.size()) + ", null-space stress");
    return out;
  }

  std::optional<StressMap> solve(const std::vector<int>& eq, int depth) const {
    const Suspension s = sub(eq);
    const std::string pad(2 * depth, ' ');
    if (depth > 0) {
      const auto dec = is_ns_decomposable(s, tol);
      if (!dec.decomposable || !is_weakly_strictly_convex(s, tol)) {
        trace.push_back(pad + "reduced suspension fails hypotheses: " +
                        (dec.decomposable ? std::string("not weakly strictly convex") : dec.diagnostic));
        return std::nullopt;
      }
    }
    const ConvexityReport conv = classify_convexity(s.surface(), tol);
    const int n = static_cast<int>(eq.size());
    struct Candidate {
      int pole;
      int k;
    };
    std::vector<Candidate> reflex;
    for (int k = 0; k < n; ++k) {
      for (int pole : {Suspension::kNorth, Suspension::kSouth}) {
        const int e = s.surface().edge_index(make_edge(pole, Suspension::equator_vertex(k)));
        if (conv.edge_non_convex[e]) reflex.push_back({pole, k});
      }
    }
    if (reflex.empty() || n == 3) {
      if (!reflex.empty()) trace.push_back(pad + "n=3 with a reflex lateral edge; using the null-space stress");
      return base(s, eq);
    }
    for (const auto& [pole, k] : reflex) {
      const char* pole_name = pole == Suspension::kNorth ? "N" : "S";
      trace.push_back(pad + "reflex lateral edge [" + pole_name + ", p" + std::to_string(eq[k]) + "], n=" +
                      std::to_string(n));
      std::vector<int> reduced = eq;
      reduced.erase(reduced.begin() + k);
      auto big = solve(reduced, depth + 1);
      if (!big) continue;

      const int other = pole == Suspension::kNorth ? Suspension::kSouth : Suspension::kNorth;
      const int prev = Suspension::equator_vertex(eq[(k + n - 1) % n]);
      const int next = Suspension::equator_vertex(eq[(k + 1) % n]);
      const int apex = Suspension::equator_vertex(eq[k]);
      const auto& p = top.surface().vertices();
      // Small suspension with axis [pole, p_k] over the triangle (other, prev, next).
      const std::vector<int> ids{pole, apex, other, prev, next};
      std::vector<Point3> pts;
      for (int id : ids) pts.push_back(p[id]);
      std::vector<FrameworkEdge> edges{{0, 1, EdgeKind::Bar}, {0, 2, EdgeKind::Bar}, {0, 3, EdgeKind::Bar},
                                       {0, 4, EdgeKind::Bar}, {1, 2, EdgeKind::Bar}, {1, 3, EdgeKind::Bar},
                                       {1, 4, EdgeKind::Bar}, {2, 3, EdgeKind::Bar}, {3, 4, EdgeKind::Bar},
                                       {2, 4, EdgeKind::Bar}};
      const Framework small(pts, edges, tol.geom_tol);
      const auto space = equilibrium_stress_space(small, tol);
      if (space.size() != 1) {
        trace.push_back(pad + "  small suspension stress space has dimension " + std::to_string(space.size()));
        continue;
      }
      const Edge chord = make_edge(prev, next);
      const double target = big->at(chord);
      const double on_chord = space[0].omega(8);
      const double wmax = space[0].omega.cwiseAbs().maxCoeff();
      if (std::abs(on_chord) <= tol.rank_tol * wmax) {
        trace.push_back(pad + "  small suspension stress vanishes on the chord");
        continue;
      }
      const double scale = -target / on_chord;
      StressMap sum = *big;
      for (int m = 0; m < small.edge_count(); ++m) {
        const auto& e = small.edges()[m];
        sum[make_edge(ids[e.i], ids[e.j])] += scale * space[0].omega(m);
      }
      double smax = 0.0;
      for (const auto& [edge, w] : sum) smax = std::max(smax, std::abs(w));
      if (std::abs(sum.at(chord)) > 1e-9 * smax) {
        trace.push_back(pad + "  chord stresses failed to cancel");
        continue;
      }
      sum.erase(chord);
      std::ostringstream msg;
      msg << pad << "  glued small suspension, scale " << scale;
      trace.push_back(msg.str());
      return sum;
    }
    return std::nullopt;
  }
};

}  // namespace

InductiveStress inductive_proper_stress(const Suspension& s, const Tolerance& tol) {
  const auto dec = is_ns_decomposable(s, tol);
  if (!dec.decomposable) throw GeometryError("inductive_proper_stress: not N-S decomposable: " + dec.diagnostic);
  if (!is_weakly_strictly_convex(s, tol)) {
    throw GeometryError("inductive_proper_stress: suspension is not weakly strictly convex");
  }
  InductiveStress out;
  const Framework fw = tensegrity_labeling(s, true);
  std::vector<int> eq(s.equator_size());
  for (int i = 0; i < s.equator_size(); ++i) eq[i] = i;
  const Induction ind{s, tol, out.trace};
  auto result = ind.solve(eq, 0);
  if (!result) {
    out.fallback = true;
    out.trace.push_back("induction unavailable; falling back to the null-space stress");
    result = ind.base(s, eq);
  }
  auto dump = [&] {
    std::string t;
    for (const auto& line : out.trace) t += "\n  " + line;
    return t;
  };
  if (!result) throw InvariantViolation("inductive_proper_stress: no stress could be built" + dump());
  out.stress.omega = Eigen::VectorXd::Zero(fw.edge_count());
  for (const auto& [edge, w] : *result) {
    const int k = fw.edge_index(edge);
    if (k < 0) throw InvariantViolation("inductive_proper_stress: stray edge " + to_string(edge) + dump());
    out.stress.omega(k) = w;
  }
  if (equilibrium_residual(fw, out.stress) > 1e-9) {
    throw InvariantViolation("inductive_proper_stress: result is not in equilibrium" + dump());
  }
  if (!is_proper(fw, out.stress)) throw InvariantViolation("inductive_proper_stress: result is not proper" + dump());
  return out;
}

bool suspension_rigidity(const Suspension& s, const Tolerance& tol) {
  const bool verdict = is_infinitesimally_rigid(Framework::all_bars(s.surface()), tol);
  if (!is_ns_decomposable(s, tol).decomposable || !is_weakly_strictly_convex(s, tol)) return verdict;
  const InductiveStress ind = inductive_proper_stress(s, tol);
  const Framework fw = tensegrity_labeling(s, true);
  const int ns = fw.edge_count() - 1;
  bool exchanged = false;
  try {
    exchanged = exchange_rigidity_check(fw, ind.stress, ns, tol);
  } catch (const ExchangePreconditionError& e) {
    throw InvariantViolation(std::string("suspension_rigidity: exchange argument unavailable (") +
                             to_string(e.failure()) + "): " + e.what());
  }
  if (exchanged != verdict || !verdict) {
    throw InvariantViolation("suspension_rigidity: decomposable weakly convex suspension found flexible");
  }
  return verdict;
}

// ---------------------------------------------------------------------------
// Lambda

double theta_prime(double z1, double r1, double z2, double r2, double theta) {
  const double s = std::sin(theta);
  if (std::abs(s) < 1e-12) throw GeometryError("theta_prime: degenerate simplex (sin theta = 0)");
  if (!(r1 > 0.0) || !(r2 > 0.0)) throw GeometryError("theta_prime: vertex on the axis");
  const double c = std::cos(theta);
  const double dz = z1 - z2;
  return (dz * dz + z1 * (1.0 - z1) * (1.0 - (r2 / r1) * c) + z2 * (1.0 - z2) * (1.0 - (r1 / r2) * c)) / (r1 * r2 * s);
}

LambdaBreakdown lambda_scalar(const Suspension& s) {
  const CylindricalEquator c = cylindrical_equator(s);
  const Projected u = projected(c);
  const int n = s.equator_size();
  LambdaBreakdown out;
  out.ns_length = c.ns_length;
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    try {
      out.simplex_terms.push_back(theta_prime(c.z[i], c.r[i], c.z[j], c.r[j], c.theta[i]));
    } catch (const GeometryError& e) {
      throw GeometryError("lambda_scalar: simplex " + std::to_string(i) + ": " + e.what());
    }
    out.simplex_total += out.simplex_terms.back();
    out.a.push_back(cross2(u.x[i], u.y[i], u.x[j], u.y[j]));
  }
  for (int i = 0; i < n; ++i) {
    const int h = (i + n - 1) % n;
    const int j = (i + 1) % n;
    out.b.push_back(cross2(u.x[i] - u.x[h], u.y[i] - u.y[h], u.x[j] - u.x[i], u.y[j] - u.y[i]));
  }
  for (int i = 0; i < n; ++i) {
    const int h = (i + n - 1) % n;
    const int j = (i + 1) % n;
    const double dz = c.z[j] - c.z[i];
    const double term = dz * dz / out.a[i] + c.z[i] * (1.0 - c.z[i]) * out.b[i] / (out.a[h] * out.a[i]);
    out.expression_terms.push_back(term);
    out.expression_total += term;
  }
  if (std::abs(out.simplex_total - out.expression_total) > 1e-9 * std::max(1.0, std::abs(out.simplex_total))) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "lambda_scalar: closed forms disagree: " << out.simplex_total << " vs " << out.expression_total;
    throw InvariantViolation(msg.str());
  }
  out.lambda = out.simplex_total / out.ns_length;
  return out;
}

NormalizedSuspension normalize_poles(const Suspension& s, const Tolerance& tol) {
  const ProjectiveMap map = pole_normalizing_map(s.north(), s.south(), s.equator(), tol);
  return {s.transformed(map, tol.geom_tol), map};
}

ElementaryReport theorem_elementary_check(const Suspension& s, const Tolerance& tol) {
  ElementaryReport rep;
  const CylindricalEquator c = cylindrical_equator(s);
  const Projected u = projected(c);
  const int n = s.equator_size();
  double rmax = 0.0;
  for (double r : c.r) rmax = std::max(rmax, r);
  const double eps = tol.geom_tol * rmax * rmax;
  double turn = 0.0;
  for (double t : c.theta) turn += t;
  for (int i = 0; i < n; ++i) {
    const int h = (i + n - 1) % n;
    const int j = (i + 1) % n;
    if (cross2(u.x[i], u.y[i], u.x[j], u.y[j]) <= eps || std::abs(turn - kTwoPi) > 1e-6) {
      rep.reason = "axis is not inside the projected equator";
      return rep;
    }
    if (cross2(u.x[i] - u.x[h], u.y[i] - u.y[h], u.x[j] - u.x[i], u.y[j] - u.y[i]) < -eps) {
      rep.reason = "projected equator is not convex at vertex " + std::to_string(i);
      return rep;
    }
  }
  NormalizedSuspension normalized{s, ProjectiveMap::identity()};
  try {
    normalized = normalize_poles(s, tol);
  } catch (const GeometryError& e) {
    rep.reason = std::string("pole normalization impossible: ") + e.what();
    return rep;
  }
  rep.in_scope = true;
  rep.projective = !normalized.map.is_affine();
  const LambdaBreakdown br = lambda_scalar(normalized.suspension);
  const CylindricalEquator cn = cylindrical_equator(normalized.suspension);
  rep.min_term = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const int h = (i + n - 1) % n;
    const int j = (i + 1) % n;
    const double dz = cn.z[j] - cn.z[i];
    rep.min_term = std::min(rep.min_term, dz * dz / br.a[i]);
    rep.min_term = std::min(rep.min_term, cn.z[i] * (1.0 - cn.z[i]) * br.b[i] / (br.a[h] * br.a[i]));
  }
  rep.terms_nonnegative = rep.min_term >= -1e-12;
  rep.total_positive = br.expression_total > 0.0;
  rep.breakdown = br;
  rep.rigid = suspension_rigidity(s, tol);
  rep.passed = rep.terms_nonnegative && rep.total_positive && rep.rigid;
  return rep;
}

Decomposition axial_decomposition(const Suspension& s, const Tolerance& tol) {
  std::vector<Tetrahedron> tets;
  const int n = s.equator_size();
  for (int i = 0; i < n; ++i) {
    tets.push_back({Suspension::kNorth, Suspension::kSouth, Suspension::equator_vertex(i),
                    Suspension::equator_vertex((i + 1) % n)});
  }
  return Decomposition::from_tetrahedra(s.surface().vertices(), std::move(tets), tol,
                                        {make_edge(Suspension::kNorth, Suspension::kSouth)});
}

Suspension interior_edge_star(const Decomposition& d) {
  if (d.interior_count() != 1) {
    throw GeometryError("interior_edge_star: decomposition has " + std::to_string(d.interior_count()) +
                        " interior edges, expected 1");
  }
  const Edge e = d.interior_edges()[0];
  const auto& star = d.star(0);
  const auto& tets = d.tetrahedra();
  auto others = [&](int t) {
    std::vector<int> o;
    for (int v : tets[t]) {
      if (v != e.i && v != e.j) o.push_back(v);
    }
    return o;
  };
  std::vector<Point3> equator;
  const int m = static_cast<int>(star.size());
  for (int k = 0; k < m; ++k) {
    const auto a = others(star[k]);
    const auto b = others(star[(k + 1) % m]);
    int shared = -1;
    for (int x : a) {
      if (std::find(b.begin(), b.end(), x) != b.end()) shared = x;
    }
    if (shared < 0) throw GeometryError("interior_edge_star: star of " + to_string(e) + " does not close");
    equator.push_back(d.vertices()[shared]);
  }
  return Suspension(d.vertices()[e.i], d.vertices()[e.j], std::move(equator));
}

Suspension lambda_root_on_height(const Suspension& s, int k, double lo, double hi, double tol) {
  if (k < 0 || k >= s.equator_size()) throw GeometryError("lambda_root_on_height: vertex out of range");
  const Vec3 axis = (s.north() - s.south()) / (s.north() - s.south()).norm();
  const double len = (s.north() - s.south()).norm();
  const double z0 = cylindrical_equator(s).z[k];
  auto at = [&](double h) { return s.with_equator_point(k, s.equator()[k] + (h - z0) * len * axis); };
  auto f = [&](double h) { return lambda_scalar(at(h)).lambda; };
  double flo = f(lo);
  double fhi = f(hi);
  if ((flo > 0.0) == (fhi > 0.0) && flo != 0.0 && fhi != 0.0) {
    throw GeometryError("lambda_root_on_height: lambda does not change sign");
  }
  // Bisect until |lambda| <= tol or the bracket cannot shrink further.
  for (int it = 0; it < 400; ++it) {
    if (std::abs(flo) <= tol || std::abs(fhi) <= tol) break;
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  return at(std::abs(flo) <= std::abs(fhi) ? lo : hi);
}

bool matches_profile(const Suspension& s, SuspensionProfile profile, const Tolerance& tol) {
  switch (profile) {
    case SuspensionProfile::Convex:
      return is_ns_decomposable(s, tol).decomposable &&
             classify_convexity(s.surface(), tol).classification == ConvexityClass::StronglyStrictlyConvex;
    case SuspensionProfile::Weak: {
      if (!is_ns_decomposable(s, tol).decomposable) return false;
      const ConvexityReport conv = classify_convexity(s.surface(), tol);
      if (conv.classification == ConvexityClass::NotWeaklyConvex) return false;
      for (int e = 0; e < s.surface().edge_count(); ++e) {
        const Edge ed = s.surface().edges()[e];
        if (ed.i <= Suspension::kSouth && conv.edge_non_convex[e]) return true;
      }
      return false;
    }
    case SuspensionProfile::ConvexProjection:
      return theorem_elementary_check(s, tol).in_scope;
    case SuspensionProfile::Star:
      return is_ns_decomposable(s, tol).decomposable;
    case SuspensionProfile::Random:
      return true;
  }
  return false;
}

std::optional<GeneratedSuspension> generate_suspension(int n, SuspensionProfile profile, std::uint64_t seed,
                                                       const Tolerance& tol, int max_attempts) {
  if (n < 3) throw GeometryError("generate_suspension: n must be at least 3");
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    Rng rng(split_seed(seed, static_cast<std::uint64_t>(attempt)));
    const SuspensionData data = random_suspension_data(rng, n, profile);
    try {
      Suspension s(data.north, data.south, data.equator, tol.geom_tol);
      if (matches_profile(s, profile, tol)) return GeneratedSuspension{std::move(s), attempt};
    } catch (const GeometryError&) {
    }
  }
  return std::nullopt;
}

}  // namespace polyrigid
